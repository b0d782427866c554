"""Sized-aircraft reports: text, JSON and the iteration log CSV."""

from __future__ import annotations

import io
from collections.abc import Sequence
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from ..exceptions import InputError
from ..mission import MissionResult
from ..regression import fill_report_table
from .driver import IterationRecord, SizedAircraft

ITERATION_COLUMNS = ("iteration", "mtow_kg", "computed_mtow_kg", "residual")


def _mass_line(label: str, mass: float, mtow: float) -> str:
    return f"  {label:<28} {mass:>14.3f} kg  {100.0 * mass / mtow:>6.2f} %"


def format_report(sized: SizedAircraft, mission: MissionResult | None = None) -> str:
    """Render a sized aircraft as human-readable text."""
    unit = "N" if sized.rating_kind == "thrust" else "W"
    lines = [
        f"Sized aircraft: {sized.name}",
        f"  converged in {len(sized.iterations)} iteration(s), tolerance {sized.tolerance:.1e}",
        "",
        "Mass breakdown",
        _mass_line("payload", sized.payload_mass, sized.mtow),
        _mass_line("crew", sized.crew_mass, sized.mtow),
        _mass_line("airframe", sized.airframe_mass, sized.mtow),
    ]
    lines += [
        _mass_line(f"propulsion: {cid}", mass, sized.mtow)
        for cid, mass in sized.propulsion_masses.items()
    ]
    lines += [_mass_line(f"fuel: {sid}", mass, sized.mtow) for sid, mass in sized.fuel_mass.items()]
    lines += [
        _mass_line(f"battery: {sid}", mass, sized.mtow) for sid, mass in sized.battery_mass.items()
    ]
    lines += [
        f"  {'MTOW':<28} {sized.mtow:>14.3f} kg",
        f"  mass closure error {sized.mass_closure_error():.2e}",
        "",
        "Geometry and rating",
        f"  wing area                    {sized.wing_area:>14.3f} m²",
        f"  installed {sized.rating_kind:<18} {sized.installed_rating:>14.1f} {unit}",
        "",
        "Mission energy",
    ]
    lines += [
        f"  {sid:<28} {energy / 1e9:>14.6f} GJ" for sid, energy in sized.energy_per_source.items()
    ]
    if mission is not None:
        lines += [
            f"  design distance              {mission.design_distance / 1000:>14.1f} km",
            f"  flight time                  {mission.final_state.time / 3600:>14.3f} h",
            f"  idle clamps                  {mission.idle_clamps:>14d}",
        ]
    lines += ["", "Regressed parameters", fill_report_table(sized.fill_report)]
    return "\n".join(lines) + "\n"


def sized_to_json(sized: SizedAircraft) -> str:
    """Serialize a sized aircraft to JSON."""
    return sized.model_dump_json(indent=2) + "\n"


def load_sized(path: Path | str) -> SizedAircraft:
    """Read a sized aircraft written by ``sized_to_json``.

    Raises:
        InputError: Unreadable file or invalid content.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read {path}: {e}"
        raise InputError(msg) from e
    try:
        return SizedAircraft.model_validate_json(text)
    except ValidationError as e:
        msg = f"{path} is not a sized-aircraft report: {e.errors()[0]['msg']}"
        raise InputError(msg) from e


def iterations_to_csv(records: Sequence[IterationRecord]) -> str:
    """Render the iteration log as CSV text."""
    frame = pd.DataFrame(
        [(r.iteration, r.mtow, r.computed_mtow, r.residual) for r in records],
        columns=list(ITERATION_COLUMNS),
    )
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format="%.9g", lineterminator="\n")
    return buffer.getvalue()


def write_iterations_csv(records: Sequence[IterationRecord], path: Path | str) -> None:
    """Write the iteration log CSV."""
    Path(path).write_text(iterations_to_csv(records), encoding="utf-8", newline="")
