"""Fill unknown design parameters from the default regressions.

Regressed quantities:

- ``empty_weight_fraction``: power law on MTOW over the aircraft table,
  restricted to turboprops when every sink is a propeller and to turbofans
  when every sink is a fan. It is evaluated at the MTOW class, the seed MTOW
  that the regressed fraction itself implies.
- Gas-turbine ``specific_power``: power law of dry mass on rated power over
  the engine table, evaluated at the reference rating (installed rating at a
  seed MTOW shared equally between the turbines).
- Gas-turbine ``efficiency``: power law of power-specific fuel consumption on
  rated power, converted to thermal efficiency with the specific energy of the
  feeding fuel.

``cd0`` and ``oswald_efficiency`` have no regression; leaving them out is an
error.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field

from ..cache import ModelCache, default_cache
from ..exceptions import InsufficientDataError, RegressionError
from ..models import AircraftSpec
from ..powertrain import PropArchitecture
from .database import HistoricalDatabase
from .models import fit, predict

logger = logging.getLogger(__name__)

UNREGRESSED_FIELDS = ("cd0", "oswald_efficiency")
SEED_RESERVE_FRACTION = 0.25
"""Fuel/energy share of MTOW assumed when seeding the iteration."""
SEED_FALLBACK_FACTOR = 4.0
THRUST_REFERENCE_SPEED = 100.0
"""Speed converting a thrust rating into a power rating for engine regressions, m/s."""
MTOW_CLASS_TOLERANCE = 1e-9
MTOW_CLASS_MAX_ITERATIONS = 100


class FillEntry(BaseModel):
    """One regressed value.

    Attributes:
        field: Filled field, ``<component>.<field>`` for component data.
        value: Filled value (SI).
        std: One-sigma uncertainty (0 for power laws).
        rows_used: Training rows behind the regression.
        model: Human summary of the regression.
    """

    field: str = Field(..., description="Filled field")
    value: float = Field(..., description="Filled value, SI")
    std: float = Field(0.0, ge=0, description="One-sigma uncertainty")
    rows_used: int = Field(..., ge=0, description="Training rows")
    model: str = Field("", description="Regression summary")

    model_config = ConfigDict(frozen=True)


@dataclass(frozen=True)
class FillResult:
    """Completed specification and architecture with the fill report."""

    spec: AircraftSpec
    architecture: PropArchitecture | None = None
    report: tuple[FillEntry, ...] = ()


def seed_mtow(spec: AircraftSpec, empty_weight_fraction: float) -> tuple[float, bool]:
    """Initial MTOW guess ``(payload + crew) / (1 - f_e - 0.25)``.

    Returns:
        The seed and whether the 4x (payload + crew) fallback was used
        because the denominator was 0.05 or less.
    """
    denominator = 1.0 - empty_weight_fraction - SEED_RESERVE_FRACTION
    if denominator <= 0.05:
        return SEED_FALLBACK_FACTOR * spec.payload_and_crew, True
    return spec.payload_and_crew / denominator, False


def _propulsor_class(arch: PropArchitecture | None) -> str | None:
    if arch is None:
        return None
    kinds = {arch.component(sink_id).kind for sink_id in arch.sink_ids}
    if kinds == {"propeller"}:
        return "turboprop"
    if kinds == {"fan"}:
        return "turbofan"
    return None


def _fill_empty_weight_fraction(
    spec: AircraftSpec,
    db: HistoricalDatabase,
    arch: PropArchitecture | None,
    cache: ModelCache | None,
) -> FillEntry:
    inputs = ["mtow_kg"]
    output = "empty_weight_fraction"
    propulsor = _propulsor_class(arch)
    where = {"type": propulsor} if propulsor else None
    try:
        model = fit(db, inputs, output, "power_law", table="aircraft", where=where, cache=cache)
    except InsufficientDataError:
        if where is None:
            raise
        logger.info("too few %s rows for %s; using every aircraft", propulsor, output)
        where = None
        model = fit(db, inputs, output, "power_law", table="aircraft", cache=cache)

    # The MTOW class and the fraction depend on each other through the seed.
    rows = db.usable_rows("aircraft", [*inputs, output], where=where)
    fraction = float(rows[output].median())
    mtow, _ = seed_mtow(spec, fraction)
    for _ in range(MTOW_CLASS_MAX_ITERATIONS):
        fraction = predict(model, [mtow]).mean
        if not 0.0 < fraction < 1.0:
            msg = f"regressed {output} {fraction:.3f} at MTOW {mtow:.0f} kg is outside (0, 1)"
            raise RegressionError(msg)
        updated, _ = seed_mtow(spec, fraction)
        if abs(updated - mtow) <= MTOW_CLASS_TOLERANCE * mtow:
            mtow = updated
            break
        mtow = updated
    else:
        logger.warning("MTOW class for %s did not settle; using %.0f kg", output, mtow)
    logger.debug("%s regressed at an MTOW class of %.0f kg", output, mtow)
    return FillEntry(
        field=output,
        value=fraction,
        rows_used=model.n_rows,
        model=model.describe(),
    )


def _turbine_reference_power(spec: AircraftSpec, arch: PropArchitecture, f_e: float) -> float:
    turbines = [c.id for c in arch.components if c.kind == "gas_turbine"]
    mtow, _ = seed_mtow(spec, f_e)
    rating = spec.installed_rating(mtow)
    if spec.rating_kind == "thrust":
        rating *= THRUST_REFERENCE_SPEED
    return rating / len(turbines)


def _feeding_fuel_energy(spec: AircraftSpec, arch: PropArchitecture, turbine_id: str) -> float:
    feeders = [
        spec.source(up).specific_energy
        for up in arch.upstream(turbine_id)
        if arch.component(up).role == "source"
    ]
    if len(set(feeders)) != 1:
        msg = f"cannot regress efficiency of '{turbine_id}': it must be fed by exactly one fuel"
        raise RegressionError(msg)
    return feeders[0]


def _fill_turbines(
    spec: AircraftSpec,
    arch: PropArchitecture,
    db: HistoricalDatabase,
    f_e: float,
    cache: ModelCache | None,
) -> tuple[dict[str, dict[str, float]], list[FillEntry]]:
    turbines = [c for c in arch.components if c.kind == "gas_turbine"]
    pending = [c for c in turbines if c.specific_power is None or c.efficiency is None]
    if not pending:
        return {}, []

    reference = _turbine_reference_power(spec, arch, f_e)
    updates: dict[str, dict[str, float]] = {}
    report: list[FillEntry] = []
    for component in pending:
        changes: dict[str, float] = {}
        if component.specific_power is None:
            model = fit(
                db, ["rated_power_w"], "dry_mass_kg", "power_law", table="engines", cache=cache
            )
            mass = predict(model, [reference]).mean
            changes["specific_power"] = reference / mass
            report.append(
                FillEntry(
                    field=f"{component.id}.specific_power",
                    value=changes["specific_power"],
                    rows_used=model.n_rows,
                    model=model.describe(),
                )
            )
        if component.efficiency is None:
            model = fit(
                db, ["rated_power_w"], "psfc_kgpj", "power_law", table="engines", cache=cache
            )
            psfc = predict(model, [reference]).mean
            efficiency = 1.0 / (psfc * _feeding_fuel_energy(spec, arch, component.id))
            if not 0.0 < efficiency <= 1.0:
                msg = f"regressed efficiency {efficiency:.3f} of '{component.id}' is outside (0, 1]"
                raise RegressionError(msg)
            changes["efficiency"] = efficiency
            report.append(
                FillEntry(
                    field=f"{component.id}.efficiency",
                    value=efficiency,
                    rows_used=model.n_rows,
                    model=model.describe(),
                )
            )
        updates[component.id] = changes
    return updates, report


def fill_unknowns(
    spec: AircraftSpec,
    db: HistoricalDatabase,
    arch: PropArchitecture | None = None,
    *,
    cache: ModelCache | None = default_cache,
) -> FillResult:
    """Complete a specification (and architecture) from the regressions.

    Args:
        spec: Parsed specification, possibly with unknown fields.
        db: Loaded historical database.
        arch: Architecture whose gas turbines may lack efficiency or
            specific power; also selects the propulsor class of the
            empty-weight regression.
        cache: Model cache; None disables caching.

    Returns:
        Completed specification and architecture plus one report entry per
        filled value. A fully specified input comes back unchanged with an
        empty report.

    Raises:
        RegressionError: A field has no regression ("no regression available
            for <field>"), or a regression fails.

    Example:
        >>> result = fill_unknowns(spec, load_database(bundled_data_dir()), arch)
        >>> [entry.field for entry in result.report]
        ['empty_weight_fraction', 'gt_left.specific_power', 'gt_left.efficiency', ...]
    """
    missing = spec.missing_fields()
    for name in UNREGRESSED_FIELDS:
        if name in missing:
            msg = f"no regression available for {name}"
            raise RegressionError(msg)

    report: list[FillEntry] = []
    changes: dict[str, float] = {}
    if "empty_weight_fraction" in missing:
        entry = _fill_empty_weight_fraction(spec, db, arch, cache)
        changes["empty_weight_fraction"] = entry.value
        report.append(entry)
    completed = spec.updated(**changes) if changes else spec

    updated_arch = arch
    if arch is not None:
        assert completed.empty_weight_fraction is not None  # noqa: S101
        f_e = completed.empty_weight_fraction
        updates, entries = _fill_turbines(completed, arch, db, f_e, cache)
        if updates:
            updated_arch = arch.with_component_updates(updates)
            report.extend(entries)

    for entry in report:
        logger.info(
            "filled %s = %.6g (std %.3g, %d rows)",
            entry.field,
            entry.value,
            entry.std,
            entry.rows_used,
        )
    return FillResult(spec=completed, architecture=updated_arch, report=tuple(report))


def fill_report_table(report: Sequence[FillEntry]) -> str:
    """Render a fill report as aligned text lines."""
    entries = list(report)
    if not entries:
        return "  (nothing regressed)"
    width = max(len(entry.field) for entry in entries)
    return "\n".join(
        f"  {entry.field:<{width}}  {entry.value:>12.6g}  ± {entry.std:<10.3g}"
        f" ({entry.rows_used} rows)"
        for entry in entries
    )
