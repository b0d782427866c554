"""Domain models shared by every part of the engine.

This package provides the validated, immutable input types and the document
layer that produces them. Models use Pydantic v2 with unknown fields
forbidden.

Exported Models:
    - AircraftSpec, EnergySourceSpec, FixedWeights: design inputs
    - MissionProfile, Segment, SpeedSchedule, Terminator: mission inputs
    - Violation: one mission invariant violation
"""

from .aircraft import REGRESSABLE_FIELDS, AircraftSpec, EnergySourceSpec, FixedWeights
from .mission import (
    MAX_ALTITUDE,
    TAKEOFF_DURATION,
    MissionProfile,
    Segment,
    SpeedSchedule,
    Terminator,
    Violation,
    validate_mission,
)
from .parsing import (
    load_mission,
    load_spec,
    parse_mission,
    parse_spec,
    serialize_mission,
    serialize_spec,
)

__all__ = [
    "MAX_ALTITUDE",
    "REGRESSABLE_FIELDS",
    "TAKEOFF_DURATION",
    "AircraftSpec",
    "EnergySourceSpec",
    "FixedWeights",
    "MissionProfile",
    "Segment",
    "SpeedSchedule",
    "Terminator",
    "Violation",
    "load_mission",
    "load_spec",
    "parse_mission",
    "parse_spec",
    "serialize_mission",
    "serialize_spec",
    "validate_mission",
]
