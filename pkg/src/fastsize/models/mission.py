"""Mission profile models and validation.

A mission is an ordered list of segments flown from sea level, followed by
reserve segments whose energy is carried but whose distance does not count
toward the design range. Segment invariants are checked by
``validate_mission``, which reports violations as data instead of raising.

Example:
    >>> profile = MissionProfile(segments=(climb, cruise, descent))
    >>> validate_mission(profile)
    []
"""

from __future__ import annotations

from collections.abc import Iterator
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

SegmentKind = Literal["takeoff", "climb", "cruise", "descent", "loiter"]
SpeedKind = Literal["tas", "eas", "mach"]
TerminatorKind = Literal["distance", "duration", "altitude_reached"]

MAX_ALTITUDE = 20_000.0
"""Ceiling of the modeled atmosphere, m."""

TAKEOFF_DURATION = 60.0
"""Default duration of the takeoff pseudo-segment, s."""

_ALTITUDE_TOL = 1e-9

_EXPECTED_TERMINATOR: dict[str, TerminatorKind] = {
    "takeoff": "duration",
    "climb": "altitude_reached",
    "descent": "altitude_reached",
    "cruise": "distance",
    "loiter": "duration",
}


class SpeedSchedule(BaseModel):
    """How a segment's airspeed is held.

    Attributes:
        kind: ``tas`` (true airspeed, m/s), ``eas`` (equivalent airspeed, m/s)
            or ``mach``.
        value: Speed in m/s, or the Mach number.
    """

    kind: SpeedKind = Field(..., description="Speed schedule type")
    value: float = Field(..., gt=0, description="Speed, m/s, or Mach number")

    model_config = ConfigDict(frozen=True, extra="forbid")


class Terminator(BaseModel):
    """Condition ending a segment.

    ``value`` is a distance (m) or duration (s). A distance terminator without
    a value marks the open cruise that absorbs the rest of the design range; a
    takeoff duration without a value defaults to 60 s.
    """

    kind: TerminatorKind = Field(..., description="Terminator type")
    value: float | None = Field(None, ge=0, description="Distance, m, or duration, s")

    model_config = ConfigDict(frozen=True, extra="forbid")


class Segment(BaseModel):
    """One flight segment.

    Attributes:
        kind: Segment type.
        start_altitude: Altitude at segment start, m.
        end_altitude: Altitude at segment end, m.
        speed: Speed schedule.
        terminator: End condition.
        operation_id: Operation split used throughout the segment.
        rate_of_climb: Climb or descent rate magnitude, m/s.
    """

    kind: SegmentKind = Field(..., description="Segment type")
    start_altitude: float = Field(..., description="Start altitude, m")
    end_altitude: float = Field(..., description="End altitude, m")
    speed: SpeedSchedule = Field(..., description="Speed schedule")
    terminator: Terminator = Field(..., description="End condition")
    operation_id: str = Field(..., min_length=1, description="Operation split id")
    rate_of_climb: float | None = Field(None, gt=0, description="Climb/descent rate, m/s")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @property
    def is_open_cruise(self) -> bool:
        """Whether this cruise absorbs the remaining design range."""
        return self.terminator.kind == "distance" and self.terminator.value is None

    def with_distance(self, distance: float) -> Segment:
        """Return a copy terminated at the given distance."""
        return self.model_copy(update={"terminator": Terminator(kind="distance", value=distance)})


class MissionProfile(BaseModel):
    """Design mission followed by reserve segments."""

    name: str = Field("mission", description="Profile identifier")
    segments: tuple[Segment, ...] = Field(..., description="Design mission segments")
    reserve_segments: tuple[Segment, ...] = Field(
        default=(), description="Reserve segments flown after the design mission"
    )

    model_config = ConfigDict(frozen=True, extra="forbid")

    def flight_order(self) -> Iterator[tuple[int, Segment, bool]]:
        """Yield ``(index, segment, is_reserve)`` in flight order."""
        for index, segment in enumerate(self.segments):
            yield index, segment, False
        offset = len(self.segments)
        for index, segment in enumerate(self.reserve_segments):
            yield offset + index, segment, True

    @property
    def operation_ids(self) -> list[str]:
        """Operation ids used by the profile, in first-use order."""
        seen: dict[str, None] = {}
        for _, segment, _ in self.flight_order():
            seen.setdefault(segment.operation_id, None)
        return list(seen)


class Violation(BaseModel):
    """One mission invariant violation.

    Attributes:
        segment_index: Offending segment in flight order, or None when the
            violation concerns the whole profile.
        code: Short machine-readable identifier.
        message: Human-readable description.
    """

    segment_index: int | None = Field(None, description="Segment index in flight order")
    code: str = Field(..., description="Violation identifier")
    message: str = Field(..., description="Description")

    model_config = ConfigDict(frozen=True)

    def __str__(self) -> str:
        return self.message


def validate_mission(profile: MissionProfile) -> list[Violation]:
    """Check every mission invariant.

    Args:
        profile: Profile to check.

    Returns:
        All violations found, each naming its segment index; an empty list
        means the profile is valid.

    Example:
        >>> [v.code for v in validate_mission(profile_with_gap)]
        ['altitude_discontinuity']
    """
    violations: list[Violation] = []
    ordered = list(profile.flight_order())

    if not profile.segments:
        violations.append(Violation(code="empty_mission", message="mission has no segments"))
        return violations

    first = profile.segments[0]
    if abs(first.start_altitude) > _ALTITUDE_TOL:
        violations.append(
            Violation(
                segment_index=0,
                code="first_altitude",
                message=f"segment 0 starts at {first.start_altitude:g} m, not at 0 m",
            )
        )

    for (_, previous, _), (index, segment, _) in zip(ordered, ordered[1:], strict=False):
        if abs(previous.end_altitude - segment.start_altitude) > _ALTITUDE_TOL:
            violations.append(
                Violation(
                    segment_index=index,
                    code="altitude_discontinuity",
                    message=(
                        f"altitude discontinuity at boundary {index}: segment {index - 1} "
                        f"ends at {previous.end_altitude:g} m, segment {index} starts at "
                        f"{segment.start_altitude:g} m"
                    ),
                )
            )

    if not any(segment.kind == "cruise" for segment in profile.segments):
        violations.append(Violation(code="missing_cruise", message="missing cruise segment"))

    open_cruises = [index for index, segment, _ in ordered if segment.is_open_cruise]
    for index in open_cruises[1:]:
        violations.append(
            Violation(
                segment_index=index,
                code="open_cruise",
                message=f"segment {index}: only one cruise may leave its distance open",
            )
        )

    for index, segment, is_reserve in ordered:
        violations.extend(_segment_violations(index, segment, is_reserve))
    return violations


def _segment_violations(index: int, segment: Segment, is_reserve: bool) -> list[Violation]:
    found: list[Violation] = []

    def flag(code: str, text: str) -> None:
        found.append(Violation(segment_index=index, code=code, message=f"segment {index}: {text}"))

    for label, altitude in (("start", segment.start_altitude), ("end", segment.end_altitude)):
        if not 0.0 <= altitude <= MAX_ALTITUDE:
            flag(
                "altitude_range",
                f"{label} altitude {altitude:g} m outside the modeled atmosphere "
                f"(0 to {MAX_ALTITUDE:g} m)",
            )

    rise = segment.end_altitude - segment.start_altitude
    if segment.kind in ("cruise", "loiter", "takeoff") and abs(rise) > _ALTITUDE_TOL:
        flag(
            "altitude_hold",
            f"{segment.kind} must hold altitude (start {segment.start_altitude:g} m, "
            f"end {segment.end_altitude:g} m)",
        )
    if segment.kind == "climb" and rise <= 0:
        flag("climb_direction", "climb must end above its start altitude")
    if segment.kind == "descent" and rise >= 0:
        flag("descent_direction", "descent must end below its start altitude")
    if segment.kind == "takeoff" and index != 0:
        flag("takeoff_position", "takeoff is only allowed as the first segment")

    expected = _EXPECTED_TERMINATOR[segment.kind]
    terminator = segment.terminator
    if terminator.kind != expected:
        flag(
            "terminator_kind",
            f"{segment.kind} must end on {expected}, not {terminator.kind}",
        )
    elif terminator.kind == "duration" and segment.kind == "loiter" and not terminator.value:
        flag("terminator_value", "loiter needs a positive duration")
    elif terminator.kind == "distance" and terminator.value is None and is_reserve:
        flag("terminator_value", "reserve cruise needs an explicit distance")
    elif terminator.kind == "distance" and terminator.value == 0:
        flag("terminator_value", "cruise distance must be positive")

    if segment.kind in ("climb", "descent") and segment.rate_of_climb is None:
        flag("rate_of_climb", f"{segment.kind} needs rate_of_climb")
    return found
