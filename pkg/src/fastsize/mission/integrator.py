"""Energy-based mission integration.

Each segment is marched with forward Euler steps no longer than ``dt_max``;
the last step of a segment is shortened so that it ends exactly on the
terminator. Kinematics (altitude, speed, distance versus time) depend only on
the segment and the atmosphere, so they are planned first by
``plan_segment``; the dynamics then evaluate the point-mass demand at the
start of every step, propagate it through the powertrain and deplete the
energy sources:

- consumable sources lose ``P·Δt / specific_energy`` of mass, and so does the
  aircraft;
- batteries lose ``P·Δt`` of energy and keep their mass.

Takeoff is a fixed-duration pseudo-segment at the installed rating rather
than a ground-roll simulation.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field

from ..exceptions import BatteryDepletedError, FuelExhaustedError, MissionError, PowerFlowError
from ..models import TAKEOFF_DURATION, AircraftSpec, MissionProfile, Segment
from ..powertrain import OperationSplit, PropArchitecture, propagate_power
from .dynamics import (
    AeroModel,
    FlightState,
    Kinematics,
    PointMassDemand,
    point_mass_demand,
    true_airspeed,
)
from .history import MissionHistory, MissionSample

logger = logging.getLogger(__name__)

DEFAULT_DT_MAX = 10.0
CAPACITY_TOLERANCE = 1e-9
"""Relative overdraw tolerated before a source counts as exhausted."""


@dataclass(frozen=True)
class FlightVehicle:
    """Aircraft with concrete masses, ready to fly.

    Attributes:
        spec: Completed specification (drag polar known).
        mtow: Takeoff mass, kg.
        fuel_mass: Loaded mass per consumable source, kg.
        battery_mass: Installed mass per battery source, kg.
    """

    spec: AircraftSpec
    mtow: float
    fuel_mass: Mapping[str, float] = field(default_factory=dict)
    battery_mass: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def from_fixed_weights(cls, spec: AircraftSpec) -> FlightVehicle:
        """Build a vehicle from the specification's explicit weights.

        Raises:
            MissionError: The specification carries no weights.
        """
        if spec.weights is None:
            msg = f"aircraft '{spec.name}' has no [weights] to fly with"
            raise MissionError(msg)
        return cls(spec, spec.weights.mtow, spec.weights.fuel_mass, spec.weights.battery_mass)

    @property
    def wing_area(self) -> float:
        """Wing reference area, m²."""
        return self.spec.wing_area(self.mtow)

    def aero(self, *, stall_check: bool = True) -> AeroModel:
        """Drag polar of this vehicle.

        Raises:
            MissionError: cd0 or oswald_efficiency is still unknown.
        """
        if self.spec.cd0 is None or self.spec.oswald_efficiency is None:
            msg = f"aircraft '{self.spec.name}' needs cd0 and oswald_efficiency to fly"
            raise MissionError(msg)
        return AeroModel(
            wing_area=self.wing_area,
            cd0=self.spec.cd0,
            k=self.spec.induced_drag_factor,
            max_lift_coefficient=self.spec.max_lift_coefficient if stall_check else None,
        )

    def usable_battery_energy(self, source_id: str) -> float:
        """Usable energy of one battery source, J."""
        source = self.spec.source(source_id)
        mass = self.battery_mass.get(source_id, 0.0)
        return mass * source.specific_energy * (source.usable_depth_of_discharge or 1.0)

    def initial_state(self, altitude: float, tas: float) -> FlightState:
        """State at brake release."""
        sources = {source.id: source for source in self.spec.energy_sources}
        return FlightState(
            time=0.0,
            distance=0.0,
            altitude=altitude,
            true_airspeed=tas,
            mass=self.mtow,
            battery_energy_remaining={
                sid: self.usable_battery_energy(sid) for sid, s in sources.items() if s.is_battery
            },
            fuel_mass_remaining={
                sid: self.fuel_mass.get(sid, 0.0) for sid, s in sources.items() if s.is_consumable
            },
        )


# ---------------------------------------------------------------------------
# Kinematic planning
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PlannedStep:
    """Kinematics of one integration step, relative to the segment start."""

    elapsed_start: float
    elapsed_end: float
    altitude_start: float
    altitude_end: float
    tas_start: float
    tas_end: float
    gamma: float
    acceleration: float
    distance_end: float

    @property
    def dt(self) -> float:
        """Step length, s."""
        return self.elapsed_end - self.elapsed_start


@dataclass(frozen=True)
class SegmentPlan:
    """Planned steps of one segment."""

    segment: Segment
    steps: tuple[PlannedStep, ...]

    @property
    def duration(self) -> float:
        """Segment duration, s."""
        return self.steps[-1].elapsed_end if self.steps else 0.0

    @property
    def distance(self) -> float:
        """Ground distance covered, m."""
        return self.steps[-1].distance_end if self.steps else 0.0


def _step_boundaries(duration: float, dt_max: float) -> list[float]:
    if duration <= 0.0:
        return [0.0]
    count = max(1, math.ceil(duration / dt_max - 1e-9))
    return [k * dt_max for k in range(count)] + [duration]


def plan_segment(segment: Segment, dt_max: float = DEFAULT_DT_MAX) -> SegmentPlan:
    """Plan the kinematics of a segment.

    Args:
        segment: Segment with a concrete terminator value (open cruises must
            be resolved first).
        dt_max: Longest step, s.

    Returns:
        The planned steps; the last one ends exactly on the terminator.

    Raises:
        MissionError: Open cruise distance, missing rate of climb, or a climb
            rate the airspeed cannot sustain.
    """
    if dt_max <= 0:
        msg = f"dt_max must be positive, got {dt_max}"
        raise MissionError(msg)

    if segment.kind in ("climb", "descent"):
        return _plan_altitude_change(segment, dt_max)

    altitude = segment.start_altitude
    tas = true_airspeed(segment.speed, altitude)
    value = segment.terminator.value
    if segment.kind == "cruise":
        if value is None:
            msg = "cruise distance is open; resolve it against the design range first"
            raise MissionError(msg)
        duration = value / tas
    else:
        duration = value if value is not None else TAKEOFF_DURATION
    moves = segment.kind != "takeoff"

    bounds = _step_boundaries(duration, dt_max)
    steps = []
    for start, end in zip(bounds, bounds[1:], strict=False):
        distance_end = tas * end if moves else 0.0
        if segment.kind == "cruise" and end == duration:
            distance_end = value or 0.0
        steps.append(
            PlannedStep(start, end, altitude, altitude, tas, tas, 0.0, 0.0, distance_end)
        )
    return SegmentPlan(segment, tuple(steps))


def _plan_altitude_change(segment: Segment, dt_max: float) -> SegmentPlan:
    if segment.rate_of_climb is None:
        msg = f"{segment.kind} needs a rate of climb"
        raise MissionError(msg)
    h0, h1 = segment.start_altitude, segment.end_altitude
    rate = math.copysign(segment.rate_of_climb, h1 - h0)
    duration = (h1 - h0) / rate
    bounds = _step_boundaries(duration, dt_max)

    steps = []
    distance = 0.0
    for start, end in zip(bounds, bounds[1:], strict=False):
        altitude_start = h0 + rate * start
        altitude_end = h1 if end == duration else h0 + rate * end
        tas_start = true_airspeed(segment.speed, altitude_start)
        tas_end = true_airspeed(segment.speed, altitude_end)
        sin_gamma = rate / tas_start
        if abs(sin_gamma) >= 1.0:
            msg = f"rate of {abs(rate):g} m/s exceeds the airspeed of {tas_start:.1f} m/s"
            raise MissionError(msg)
        gamma = math.asin(sin_gamma)
        dt = end - start
        distance += tas_start * math.cos(gamma) * dt
        steps.append(
            PlannedStep(
                start,
                end,
                altitude_start,
                altitude_end,
                tas_start,
                tas_end,
                gamma,
                (tas_end - tas_start) / dt,
                distance,
            )
        )
    return SegmentPlan(segment, tuple(steps))


def resolve_profile(
    profile: MissionProfile, design_range: float, dt_max: float = DEFAULT_DT_MAX
) -> MissionProfile:
    """Give the open cruise, if any, the distance left of the design range.

    Raises:
        MissionError: The other design segments already cover the range.
    """
    open_index = next(
        (i for i, segment in enumerate(profile.segments) if segment.is_open_cruise), None
    )
    if open_index is None:
        return profile
    covered = math.fsum(
        plan_segment(segment, dt_max).distance
        for i, segment in enumerate(profile.segments)
        if i != open_index
    )
    remaining = design_range - covered
    if remaining <= 0.0:
        msg = (
            f"other design segments cover {covered / 1000:.1f} km, leaving nothing of the "
            f"{design_range / 1000:.1f} km design range for the cruise"
        )
        raise MissionError(msg, segment_index=open_index)
    segments = list(profile.segments)
    segments[open_index] = segments[open_index].with_distance(remaining)
    return profile.model_copy(update={"segments": tuple(segments)})


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SegmentFlight:
    """Outcome of flying one segment.

    Attributes:
        end: State at the terminator.
        samples: History slice, one sample per step.
        energy: Energy drawn per source during the segment, J.
        fuel: Mass burned per consumable source during the segment, kg.
        peak_power: Largest rating power per component during the segment, W.
        idle_clamps: Steps whose thrust requirement was clamped at zero.
    """

    end: FlightState
    samples: list[MissionSample]
    energy: dict[str, float]
    fuel: dict[str, float]
    peak_power: dict[str, float]
    idle_clamps: int = 0


def takeoff_sink_demands(
    spec: AircraftSpec,
    arch: PropArchitecture,
    op: OperationSplit,
    mtow: float,
    tas: float,
) -> dict[str, float]:
    """Sink output power at the installed rating.

    With a power rating, each active sink takes in its thrust share of the
    installed power; with a thrust rating, each delivers its share of the
    installed thrust at ``tas``.

    Raises:
        PowerFlowError: A sink efficiency is unknown.
    """
    rating = spec.installed_rating(mtow)
    demands: dict[str, float] = {}
    for sink_id, share in op.thrust_shares.items():
        if spec.rating_kind == "thrust":
            demands[sink_id] = share * rating * tas
            continue
        efficiency = arch.component(sink_id).efficiency
        if efficiency is None:
            msg = f"efficiency of sink '{sink_id}' is unknown"
            raise PowerFlowError(msg)
        demands[sink_id] = share * rating * efficiency
    return demands


def fly_segment(
    start: FlightState,
    segment: Segment,
    vehicle: FlightVehicle,
    arch: PropArchitecture,
    dt_max: float = DEFAULT_DT_MAX,
    *,
    enforce_capacity: bool = True,
    energy_drawn: Mapping[str, float] | None = None,
    segment_index: int = -1,
) -> SegmentFlight:
    """Integrate one segment.

    Args:
        start: State at segment start.
        segment: Segment to fly (open cruises resolved).
        vehicle: Aircraft and its loaded masses.
        arch: Propulsion architecture.
        dt_max: Longest step, s.
        enforce_capacity: Raise when a source runs out. Sizing iterations
            fly with this off while sources are still being sized.
        energy_drawn: Cumulative energy per source before this segment, J.
        segment_index: Index recorded in the samples.

    Returns:
        End state, history slice and segment totals.

    Raises:
        StallError: Lift coefficient above the maximum.
        FuelExhaustedError: A consumable source ran dry.
        BatteryDepletedError: A battery fell below its usable floor.
        MissionError: Other kinematic failures.
    """
    plan = plan_segment(segment, dt_max)
    op = arch.operation(segment.operation_id)
    spec = vehicle.spec
    is_takeoff = segment.kind == "takeoff"
    aero = vehicle.aero(stall_check=not is_takeoff)

    source_ids = arch.source_ids
    sources = {sid: spec.source(sid) for sid in source_ids}
    component_ids = [c.id for c in arch.components]
    cumulative = {sid: (energy_drawn or {}).get(sid, 0.0) for sid in source_ids}
    fuel_remaining = dict(start.fuel_mass_remaining)
    battery_remaining = dict(start.battery_energy_remaining)

    energy = dict.fromkeys(source_ids, 0.0)
    fuel = {sid: 0.0 for sid in source_ids if sources[sid].is_consumable}
    peak = dict.fromkeys(component_ids, 0.0)
    samples: list[MissionSample] = []
    clamps = 0

    mass = start.mass
    for step in plan.steps:
        state = FlightState(
            time=start.time + step.elapsed_start,
            distance=start.distance,
            altitude=step.altitude_start,
            true_airspeed=step.tas_start,
            mass=mass,
        )
        if is_takeoff:
            demand = point_mass_demand(state, Kinematics(), aero)
            sink_demands = takeoff_sink_demands(spec, arch, op, vehicle.mtow, step.tas_start)
            thrust = math.fsum(sink_demands.values()) / step.tas_start
            demand = PointMassDemand(
                demand.lift_coefficient, demand.drag, thrust, thrust * step.tas_start
            )
        else:
            demand = point_mass_demand(state, Kinematics(step.gamma, step.acceleration), aero)
            clamps += demand.idle_clamped
            sink_demands = {
                sink_id: share * demand.sink_power_demand
                for sink_id, share in op.thrust_shares.items()
            }
        table = propagate_power(arch, op, sink_demands)

        dt = step.dt
        for sid in source_ids:
            drawn = table.draw[sid] * dt
            energy[sid] += drawn
            cumulative[sid] += drawn
            source = sources[sid]
            if source.is_consumable:
                burned = drawn / source.specific_energy
                fuel[sid] += burned
                mass -= burned
                fuel_remaining[sid] = fuel_remaining.get(sid, 0.0) - burned
            else:
                battery_remaining[sid] = battery_remaining.get(sid, 0.0) - drawn
        if enforce_capacity:
            _check_capacity(vehicle, fuel_remaining, battery_remaining, state.time + dt)
        if mass <= 0.0:
            msg = f"aircraft mass fell to {mass:g} kg"
            raise MissionError(msg)

        powers = table.rating_powers(arch)
        for component_id, power in powers.items():
            if power > peak[component_id]:
                peak[component_id] = power
        samples.append(
            MissionSample(
                time=start.time + step.elapsed_end,
                distance=start.distance + step.distance_end,
                altitude=step.altitude_end,
                tas=step.tas_end,
                mass=mass,
                cl=demand.lift_coefficient,
                drag=demand.drag,
                thrust=demand.thrust_required,
                gamma=step.gamma,
                power=tuple(powers[cid] for cid in component_ids),
                energy=tuple(cumulative[sid] for sid in source_ids),
                segment_index=segment_index,
            )
        )

    if clamps:
        logger.info("segment %d (%s): %d idle clamp(s)", segment_index, segment.kind, clamps)
    last = plan.steps[-1] if plan.steps else None
    end = FlightState(
        time=start.time + plan.duration,
        distance=start.distance + plan.distance,
        altitude=last.altitude_end if last else segment.end_altitude,
        true_airspeed=last.tas_end if last else start.true_airspeed,
        mass=mass,
        battery_energy_remaining={k: max(v, 0.0) for k, v in battery_remaining.items()},
        fuel_mass_remaining={k: max(v, 0.0) for k, v in fuel_remaining.items()},
    )
    return SegmentFlight(end, samples, energy, fuel, peak, clamps)


def _check_capacity(
    vehicle: FlightVehicle,
    fuel_remaining: Mapping[str, float],
    battery_remaining: Mapping[str, float],
    time: float,
) -> None:
    for sid, remaining in fuel_remaining.items():
        capacity = vehicle.fuel_mass.get(sid, 0.0)
        if remaining < -CAPACITY_TOLERANCE * capacity:
            msg = (
                f"fuel source '{sid}' exhausted at t={time:.0f} s "
                f"({capacity:.1f} kg loaded)"
            )
            raise FuelExhaustedError(msg, source_id=sid)
    for sid, remaining in battery_remaining.items():
        capacity = vehicle.usable_battery_energy(sid)
        if remaining < -CAPACITY_TOLERANCE * capacity:
            msg = (
                f"battery '{sid}' depleted below its usable floor at t={time:.0f} s "
                f"({capacity / 3.6e6:.1f} kWh usable)"
            )
            raise BatteryDepletedError(msg, source_id=sid)


# ---------------------------------------------------------------------------
# Whole mission
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SegmentSummary:
    """Totals of one flown segment."""

    index: int
    kind: str
    reserve: bool
    start_time: float
    duration: float
    distance: float
    energy: dict[str, float]
    fuel: dict[str, float]
    idle_clamps: int


@dataclass(frozen=True)
class MissionResult:
    """Outcome of a complete mission.

    Attributes:
        history: Samples of design and reserve segments.
        energy_per_source: Energy drawn per source, design plus reserve, J.
        fuel_per_source: Mass burned per consumable source, kg.
        peak_power: Largest rating power per component, W.
        segments: Per-segment totals in flight order.
        final_state: State after the last reserve segment.
        profile: Profile actually flown (open cruise resolved).
    """

    history: MissionHistory
    energy_per_source: dict[str, float]
    fuel_per_source: dict[str, float]
    peak_power: dict[str, float]
    segments: list[SegmentSummary]
    final_state: FlightState
    profile: MissionProfile

    @property
    def design_distance(self) -> float:
        """Ground distance of the design segments, m."""
        return math.fsum(s.distance for s in self.segments if not s.reserve)

    @property
    def total_fuel(self) -> float:
        """Mass burned over all consumable sources, kg."""
        return math.fsum(self.fuel_per_source.values())

    @property
    def idle_clamps(self) -> int:
        """Idle clamps over the whole mission."""
        return sum(s.idle_clamps for s in self.segments)


def fly_mission(
    vehicle: FlightVehicle,
    profile: MissionProfile,
    arch: PropArchitecture,
    *,
    dt_max: float = DEFAULT_DT_MAX,
    enforce_capacity: bool = True,
) -> MissionResult:
    """Fly the design segments, then the reserves.

    Args:
        vehicle: Aircraft with concrete masses.
        profile: Mission; an open cruise takes the rest of the design range.
        arch: Propulsion architecture.
        dt_max: Longest integration step, s.
        enforce_capacity: Raise when a source runs out.

    Returns:
        History, per-source totals and per-component peak powers.

    Raises:
        MissionError: Any segment failure, annotated with its index.

    Example:
        >>> result = fly_mission(FlightVehicle.from_fixed_weights(spec), profile, arch)
        >>> result.fuel_per_source["fuel"]
        1203.4
    """
    resolved = resolve_profile(profile, vehicle.spec.design_range, dt_max)
    first = resolved.segments[0]
    state = vehicle.initial_state(
        first.start_altitude, true_airspeed(first.speed, first.start_altitude)
    )

    source_ids = arch.source_ids
    component_ids = [c.id for c in arch.components]
    history = MissionHistory(tuple(component_ids), tuple(source_ids))
    energy = dict.fromkeys(source_ids, 0.0)
    fuel = {sid: 0.0 for sid in source_ids if vehicle.spec.source(sid).is_consumable}
    peak = dict.fromkeys(component_ids, 0.0)
    summaries: list[SegmentSummary] = []

    for index, segment, reserve in resolved.flight_order():
        try:
            flight = fly_segment(
                state,
                segment,
                vehicle,
                arch,
                dt_max,
                enforce_capacity=enforce_capacity,
                energy_drawn=energy,
                segment_index=index,
            )
        except MissionError as e:
            raise e.at_segment(index) from e
        history.samples.extend(flight.samples)
        for sid, value in flight.energy.items():
            energy[sid] += value
        for sid, value in flight.fuel.items():
            fuel[sid] += value
        for cid, value in flight.peak_power.items():
            peak[cid] = max(peak[cid], value)
        summaries.append(
            SegmentSummary(
                index=index,
                kind=segment.kind,
                reserve=reserve,
                start_time=state.time,
                duration=flight.end.time - state.time,
                distance=flight.end.distance - state.distance,
                energy=flight.energy,
                fuel=flight.fuel,
                idle_clamps=flight.idle_clamps,
            )
        )
        state = flight.end

    history.check_invariants()
    return MissionResult(history, energy, fuel, peak, summaries, state, resolved)
