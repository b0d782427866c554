"""Mission analysis: atmosphere, point-mass dynamics and time integration.

Exported:
    - atmosphere, AtmosphereState: ISA up to 20 km
    - FlightState, Kinematics, AeroModel, point_mass_demand, true_airspeed
    - FlightVehicle, fly_mission, fly_segment, plan_segment, resolve_profile
    - MissionHistory, MissionSample and the history CSV helpers
"""

from .atmosphere import CEILING, AtmosphereState, atmosphere
from .dynamics import (
    AeroModel,
    FlightState,
    Kinematics,
    PointMassDemand,
    point_mass_demand,
    true_airspeed,
)
from .history import (
    STATE_COLUMNS,
    MissionHistory,
    MissionSample,
    history_to_csv,
    read_history_csv,
    write_history_csv,
)
from .integrator import (
    DEFAULT_DT_MAX,
    FlightVehicle,
    MissionResult,
    PlannedStep,
    SegmentFlight,
    SegmentPlan,
    SegmentSummary,
    fly_mission,
    fly_segment,
    plan_segment,
    resolve_profile,
    takeoff_sink_demands,
)

__all__ = [
    "CEILING",
    "DEFAULT_DT_MAX",
    "STATE_COLUMNS",
    "AeroModel",
    "AtmosphereState",
    "FlightState",
    "FlightVehicle",
    "Kinematics",
    "MissionHistory",
    "MissionResult",
    "MissionSample",
    "PlannedStep",
    "PointMassDemand",
    "SegmentFlight",
    "SegmentPlan",
    "SegmentSummary",
    "atmosphere",
    "fly_mission",
    "fly_segment",
    "history_to_csv",
    "plan_segment",
    "point_mass_demand",
    "read_history_csv",
    "resolve_profile",
    "takeoff_sink_demands",
    "true_airspeed",
    "write_history_csv",
]
