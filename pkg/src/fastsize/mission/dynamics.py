"""Point-mass flight mechanics.

The aircraft is a point mass flying a drag polar ``C_D = C_D0 + k·C_L²``.
Thrust balances drag, the weight component along the path and the inertial
force of the scheduled speed change; the sinks must deliver ``T·V``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field

from ..exceptions import MissionError, StallError
from ..models import SpeedSchedule
from ..units import G0
from .atmosphere import RHO0, atmosphere

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlightState:
    """Aircraft state at one instant.

    Attributes:
        time: Elapsed mission time, s.
        distance: Ground distance flown, m.
        altitude: Altitude, m.
        true_airspeed: True airspeed, m/s.
        mass: Aircraft mass, kg.
        battery_energy_remaining: Usable energy left per battery source, J.
        fuel_mass_remaining: Mass left per consumable source, kg.
    """

    time: float
    distance: float
    altitude: float
    true_airspeed: float
    mass: float
    battery_energy_remaining: Mapping[str, float] = field(default_factory=dict)
    fuel_mass_remaining: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class Kinematics:
    """Flight-path angle (rad) and along-path acceleration (m/s²)."""

    gamma: float = 0.0
    acceleration: float = 0.0


@dataclass(frozen=True, slots=True)
class AeroModel:
    """Aerodynamic data of the point mass.

    Attributes:
        wing_area: Reference area, m².
        cd0: Parasite drag coefficient.
        k: Induced drag factor 1/(π·AR·e).
        max_lift_coefficient: Stall limit; None disables the check.
    """

    wing_area: float
    cd0: float
    k: float
    max_lift_coefficient: float | None = None


@dataclass(frozen=True, slots=True)
class PointMassDemand:
    """Forces and power required at one instant.

    Attributes:
        lift_coefficient: C_L.
        drag: Drag, N.
        thrust_required: Thrust after clamping at zero, N.
        sink_power_demand: Propulsive output power required, W.
        idle_clamped: Whether a negative thrust requirement was clamped.
    """

    lift_coefficient: float
    drag: float
    thrust_required: float
    sink_power_demand: float
    idle_clamped: bool = False


def true_airspeed(schedule: SpeedSchedule, altitude: float) -> float:
    """Resolve a speed schedule to true airspeed at an altitude, m/s."""
    if schedule.kind == "tas":
        return schedule.value
    state = atmosphere(altitude)
    if schedule.kind == "eas":
        return schedule.value * math.sqrt(RHO0 / state.density)
    return schedule.value * state.speed_of_sound


def point_mass_demand(
    state: FlightState,
    kinematics: Kinematics,
    aero: AeroModel,
    g: float = G0,
) -> PointMassDemand:
    """Compute lift coefficient, drag, thrust and sink power required.

    Args:
        state: Current flight state (altitude, speed and mass are used).
        kinematics: Flight-path angle and acceleration.
        aero: Wing area and drag polar.
        g: Gravitational acceleration, m/s².

    Returns:
        The demand; negative thrust is clamped to zero and flagged.

    Raises:
        MissionError: Non-positive airspeed or dynamic pressure.
        StallError: C_L above the maximum lift coefficient.

    Example:
        >>> demand = point_mass_demand(
        ...     FlightState(time=0, distance=0, altitude=0, true_airspeed=100, mass=50_000),
        ...     Kinematics(),
        ...     AeroModel(wing_area=100, cd0=0.02, k=0.05),
        ... )
        >>> round(demand.drag)
        31877
    """
    v = state.true_airspeed
    density = atmosphere(state.altitude).density
    qs = 0.5 * density * v * v * aero.wing_area
    if v <= 0 or qs <= 0:
        msg = f"airspeed {v:g} m/s and wing area {aero.wing_area:g} m² give no dynamic lift"
        raise MissionError(msg)

    weight = state.mass * g
    cl = weight * math.cos(kinematics.gamma) / qs
    if aero.max_lift_coefficient is not None and cl > aero.max_lift_coefficient:
        msg = (
            f"stall: C_L {cl:.3f} exceeds C_Lmax {aero.max_lift_coefficient:.3f} at "
            f"{v:.1f} m/s, {state.altitude:.0f} m"
        )
        raise StallError(msg)

    drag = qs * (aero.cd0 + aero.k * cl * cl)
    thrust = drag + weight * math.sin(kinematics.gamma) + state.mass * kinematics.acceleration
    clamped = thrust < 0.0
    if clamped:
        logger.debug("idle clamp: thrust %.1f N at t=%.1f s set to 0", thrust, state.time)
        thrust = 0.0
    return PointMassDemand(
        lift_coefficient=cl,
        drag=drag,
        thrust_required=thrust,
        sink_power_demand=thrust * v,
        idle_clamped=clamped,
    )
