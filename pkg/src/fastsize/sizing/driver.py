"""Fixed-point sizing driver.

One loop couples the airframe/propulsion build-up with the mission-driven
energy-source sizing. Each iteration:

1. flies the mission at the current MTOW guess (capacity checks off, since
   the sources are still being sized);
2. sizes airframe and propulsion on that flight's peak powers and the
   installed rating;
3. sizes the energy sources on that flight's energy totals;
4. sums payload, crew and every mass into a new MTOW and relaxes towards it.

The loop stops when the relative change drops below the tolerance; the
mission is then flown once more, with capacity checks on, at the converged
masses.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import DivergenceError, MissionError, NonConvergenceError, SizingError
from ..mission import DEFAULT_DT_MAX, FlightVehicle, MissionResult, fly_mission, true_airspeed
from ..mission.atmosphere import atmosphere
from ..models import AircraftSpec, MissionProfile
from ..powertrain import (
    OperationSplit,
    PropArchitecture,
    architecture_from_document,
    architecture_to_document,
    check_compatibility,
)
from ..regression import FillEntry, HistoricalDatabase, fill_unknowns, seed_mtow
from .weights import WeightBuildup, energy_source_sizing, weight_buildup

logger = logging.getLogger(__name__)

DIVERGENCE_FACTOR = 10.0
STALL_MARGIN = 1.1


class SizingOptions(BaseModel):
    """Fixed-point iteration settings.

    Attributes:
        tolerance: Relative MTOW change that counts as converged.
        max_iterations: Iteration budget.
        relaxation: ω in ``mtow_next = ω·computed + (1 - ω)·previous``.
        initial_mtow_guess: Seed MTOW, kg; the regression seed when omitted.
        dt_max: Longest mission integration step, s.
    """

    tolerance: float = Field(1e-6, gt=0, description="Relative MTOW convergence tolerance")
    max_iterations: int = Field(100, ge=1, description="Iteration budget")
    relaxation: float = Field(1.0, gt=0, le=1, description="Relaxation factor ω")
    initial_mtow_guess: float | None = Field(None, gt=0, description="Seed MTOW, kg")
    dt_max: float = Field(DEFAULT_DT_MAX, gt=0, description="Longest integration step, s")

    model_config = ConfigDict(frozen=True, extra="forbid")


class IterationRecord(BaseModel):
    """One fixed-point iteration."""

    iteration: int = Field(..., ge=1)
    mtow: float = Field(..., description="MTOW the iteration started from, kg")
    computed_mtow: float = Field(..., description="MTOW implied by the build-up, kg")
    residual: float = Field(..., description="|computed - mtow| / mtow")

    model_config = ConfigDict(frozen=True)


class SizedAircraft(BaseModel):
    """Converged aircraft.

    The completed specification, architecture document and fill report are
    embedded so the aircraft can be re-flown or drawn from this record alone.
    """

    name: str
    mtow: float = Field(..., gt=0, description="Maximum takeoff mass, kg")
    airframe_mass: float = Field(..., ge=0, description="Airframe mass, kg")
    propulsion_masses: dict[str, float] = Field(..., description="Mass per component, kg")
    fuel_mass: dict[str, float] = Field(..., description="Mass per consumable source, kg")
    battery_mass: dict[str, float] = Field(..., description="Mass per battery source, kg")
    payload_mass: float = Field(..., ge=0)
    crew_mass: float = Field(..., ge=0)
    wing_area: float = Field(..., gt=0, description="Wing reference area, m²")
    installed_rating: float = Field(..., ge=0, description="Installed thrust (N) or power (W)")
    rating_kind: str = Field(..., description="thrust or power")
    energy_per_source: dict[str, float] = Field(..., description="Mission energy, J")
    iterations: list[IterationRecord] = Field(default_factory=list)
    converged: bool = True
    tolerance: float = Field(..., gt=0)
    spec: AircraftSpec
    architecture: dict[str, Any] = Field(..., description="Completed architecture document")
    fill_report: list[FillEntry] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    @property
    def propulsion_mass(self) -> float:
        """Total propulsion mass, kg."""
        return math.fsum(self.propulsion_masses.values())

    @property
    def mass_sum(self) -> float:
        """Payload, crew, airframe, propulsion and energy sources, kg."""
        return math.fsum(
            [
                self.payload_mass,
                self.crew_mass,
                self.airframe_mass,
                *self.propulsion_masses.values(),
                *self.fuel_mass.values(),
                *self.battery_mass.values(),
            ]
        )

    def mass_closure_error(self) -> float:
        """Relative gap between MTOW and the sum of its parts."""
        return abs(self.mass_sum - self.mtow) / self.mtow

    def build_architecture(self) -> PropArchitecture:
        """Rebuild the embedded architecture."""
        return architecture_from_document(self.architecture)

    def vehicle(self) -> FlightVehicle:
        """The aircraft at its sized masses, ready to fly."""
        return FlightVehicle(self.spec, self.mtow, dict(self.fuel_mass), dict(self.battery_mass))


@dataclass(frozen=True)
class SizingResult:
    """Sized aircraft and the mission flown at its converged masses."""

    aircraft: SizedAircraft
    mission: MissionResult


@dataclass(frozen=True)
class _Iterate:
    buildup: WeightBuildup
    fuel: dict[str, float]
    battery: dict[str, float]
    energy: dict[str, float]
    computed: float


def stall_speed(spec: AircraftSpec, altitude: float) -> float:
    """Stall true airspeed at MTOW, m/s."""
    density = atmosphere(altitude).density
    return math.sqrt(2.0 * spec.wing_loading / (density * spec.max_lift_coefficient))


def _check_stall_margin(spec: AircraftSpec, profile: MissionProfile) -> None:
    first = profile.segments[0]
    speed = true_airspeed(first.speed, first.start_altitude)
    v_stall = stall_speed(spec, first.start_altitude)
    if v_stall > STALL_MARGIN * speed:
        logger.warning(
            "wing loading %.0f N/m² gives a stall speed of %.1f m/s, more than %.1fx the "
            "first segment speed of %.1f m/s",
            spec.wing_loading,
            v_stall,
            STALL_MARGIN,
            speed,
        )


def _takeoff_conditions(
    profile: MissionProfile, arch: PropArchitecture
) -> tuple[OperationSplit, float]:
    first = profile.segments[0]
    segment = next((s for s in profile.segments if s.kind == "takeoff"), first)
    speed = true_airspeed(segment.speed, segment.start_altitude)
    return arch.operation(segment.operation_id), speed


def _iterate(
    mtow: float,
    spec: AircraftSpec,
    profile: MissionProfile,
    arch: PropArchitecture,
    previous: _Iterate | None,
    options: SizingOptions,
) -> tuple[_Iterate, MissionResult]:
    vehicle = FlightVehicle(
        spec,
        mtow,
        previous.fuel if previous else {},
        previous.battery if previous else {},
    )
    flight = fly_mission(vehicle, profile, arch, dt_max=options.dt_max, enforce_capacity=False)
    operation, speed = _takeoff_conditions(profile, arch)
    buildup = weight_buildup(
        mtow,
        spec,
        arch,
        flight.peak_power,
        takeoff_operation=operation,
        takeoff_speed=speed,
    )
    peak_draw = {sid: flight.peak_power.get(sid, 0.0) for sid in arch.source_ids}
    sources = energy_source_sizing(
        spec, flight.energy_per_source, flight.fuel_per_source, peak_draw
    )
    computed = math.fsum(
        [
            spec.payload_mass,
            spec.crew_mass,
            buildup.airframe_mass,
            *buildup.propulsion_masses.values(),
            *sources.fuel_mass.values(),
            *sources.battery_mass.values(),
        ]
    )
    state = _Iterate(
        buildup,
        sources.fuel_mass,
        sources.battery_mass,
        dict(flight.energy_per_source),
        computed,
    )
    return state, flight


def size_aircraft(
    spec: AircraftSpec,
    profile: MissionProfile,
    arch: PropArchitecture,
    db: HistoricalDatabase,
    options: SizingOptions | None = None,
) -> SizingResult:
    """Size an aircraft for its design mission.

    Args:
        spec: Parsed specification; unknowns are filled from ``db``.
        profile: Design mission with reserves.
        arch: Propulsion architecture.
        db: Historical database for the regressions.
        options: Iteration settings.

    Returns:
        The converged aircraft and the mission flown at its masses.

    Raises:
        ConstraintError: The documents disagree.
        RegressionError: An unknown cannot be filled.
        NonConvergenceError: Budget exhausted; carries the iteration log.
        DivergenceError: MTOW became NaN or exceeded 10x the seed.
        MissionError: The mission cannot be flown (message names the iteration).
        InfeasibleDecompositionError: Propulsion outweighs the empty weight.

    Example:
        >>> result = size_aircraft(spec, profile, arch, load_database(bundled_data_dir()))
        >>> round(result.aircraft.mtow)
        18412
    """
    options = options or SizingOptions()
    check_compatibility(spec, arch, profile)
    filled = fill_unknowns(spec, db, arch)
    spec = filled.spec
    arch = filled.architecture or arch
    assert spec.empty_weight_fraction is not None  # noqa: S101
    _check_stall_margin(spec, profile)

    if options.initial_mtow_guess is not None:
        seed = options.initial_mtow_guess
    else:
        seed, fallback = seed_mtow(spec, spec.empty_weight_fraction)
        if fallback:
            logger.warning(
                "empty-weight fraction %.3f leaves no room for the seed formula; "
                "seeding MTOW at 4x payload and crew (%.1f kg)",
                spec.empty_weight_fraction,
                seed,
            )
    if not seed > 0:
        msg = f"cannot seed the iteration: MTOW guess {seed} kg (payload and crew are zero?)"
        raise SizingError(msg)

    records: list[IterationRecord] = []
    mtow = seed
    state: _Iterate | None = None
    flight: MissionResult | None = None
    converged = False
    for iteration in range(1, options.max_iterations + 1):
        try:
            state, flight = _iterate(mtow, spec, profile, arch, state, options)
        except MissionError as e:
            msg = f"iteration {iteration}: {e}"
            raise type(e)(msg, segment_index=e.segment_index, source_id=e.source_id) from e
        computed = state.computed
        residual = abs(computed - mtow) / mtow if math.isfinite(computed) else math.inf
        records.append(
            IterationRecord(
                iteration=iteration, mtow=mtow, computed_mtow=computed, residual=residual
            )
        )
        logger.debug(
            "iteration %d: mtow %.6f kg -> %.6f kg (residual %.3e)",
            iteration,
            mtow,
            computed,
            residual,
        )
        if not math.isfinite(computed) or computed > DIVERGENCE_FACTOR * seed:
            msg = (
                f"MTOW diverged at iteration {iteration}: {computed:.6g} kg "
                f"from a seed of {seed:.1f} kg"
            )
            raise DivergenceError(msg, records)
        if residual < options.tolerance:
            converged = True
            break
        mtow = options.relaxation * computed + (1.0 - options.relaxation) * mtow

    if not converged or state is None or flight is None:
        last = records[-1].residual if records else math.inf
        msg = (
            f"MTOW did not converge in {options.max_iterations} iterations "
            f"(last residual {last:.3e}, tolerance {options.tolerance:.1e})"
        )
        raise NonConvergenceError(msg, records)
    logger.info("converged in %d iterations: MTOW %.1f kg", len(records), mtow)

    buildup = state.buildup
    sized = SizedAircraft(
        name=spec.name,
        mtow=mtow,
        airframe_mass=buildup.airframe_mass,
        propulsion_masses=buildup.propulsion_masses,
        fuel_mass=state.fuel,
        battery_mass=state.battery,
        payload_mass=spec.payload_mass,
        crew_mass=spec.crew_mass,
        wing_area=buildup.wing_area,
        installed_rating=buildup.installed_rating,
        rating_kind=buildup.rating_kind,
        energy_per_source=state.energy,
        iterations=records,
        converged=True,
        tolerance=options.tolerance,
        spec=spec,
        architecture=architecture_to_document(arch),
        fill_report=list(filled.report),
    )
    try:
        mission = fly_mission(sized.vehicle(), profile, arch, dt_max=options.dt_max)
    except MissionError as e:
        msg = f"converged aircraft: {e}"
        raise type(e)(msg, segment_index=e.segment_index, source_id=e.source_id) from e
    return SizingResult(sized, mission)
