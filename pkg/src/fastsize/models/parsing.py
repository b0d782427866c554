"""Input document parsing and serialization.

Documents are TOML files carrying a required ``schema_version = 1`` key. This
module turns aircraft and mission documents into validated models and back,
and provides the helpers the architecture and geometry documents share:
TOML decoding with line context, unknown-key rejection, unit conversion and
translation of model validation failures into ``ConstraintError``.

Example:
    >>> spec = parse_spec(Path("regional_turboprop.aircraft.toml").read_text())
    >>> spec.design_range
    1300000.0
    >>> parse_spec(serialize_spec(spec)) == spec
    True
"""

from __future__ import annotations

import re
import sys
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import Any, TypeVar

import tomli_w
from pydantic import BaseModel, ValidationError

from ..exceptions import ConstraintError, DocumentParseError
from ..units import Dimension, to_si
from .aircraft import AircraftSpec
from .mission import TAKEOFF_DURATION, MissionProfile, validate_mission

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

SCHEMA_VERSION = 1

ModelT = TypeVar("ModelT", bound=BaseModel)

_TOML_LINE = re.compile(r"at line (\d+)")


class Document:
    """Decoded TOML document that remembers its source text for line lookups.

    Attributes:
        kind: Document family (``aircraft``, ``mission``, ...), used in messages.
        data: Decoded content with ``schema_version`` removed.
    """

    def __init__(self, text: str, kind: str) -> None:
        """Decode ``text`` and check its schema version.

        Raises:
            DocumentParseError: Malformed TOML, or a missing or unsupported
                ``schema_version``.
        """
        self.kind = kind
        self._text = text
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            match = _TOML_LINE.search(str(e))
            line = int(match.group(1)) if match else None
            msg = f"{kind} document is not valid TOML: {e}"
            raise DocumentParseError(msg, line=line) from e

        if "schema_version" not in data:
            msg = f"{kind} document is missing required key 'schema_version'"
            raise DocumentParseError(msg, key="schema_version")
        version = data.pop("schema_version")
        if version != SCHEMA_VERSION:
            msg = f"{kind} document has unsupported schema_version {version!r} (expected 1)"
            raise DocumentParseError(msg, key="schema_version", line=self.line_of("schema_version"))
        self.data: dict[str, Any] = data

    def line_of(self, key: str) -> int | None:
        """Return the first line assigning ``key`` (or opening a table of that name)."""
        leaf = re.escape(key.rsplit(".", 1)[-1].split("[", 1)[0])
        pattern = re.compile(rf'^\s*(?:"?{leaf}"?\s*=|\[+\s*(?:[\w.]+\.)?{leaf}\s*\]+)', re.M)
        match = pattern.search(self._text)
        return self._text.count("\n", 0, match.start()) + 1 if match else None

    def reject_unknown(self, table: Mapping[str, Any], allowed: Iterable[str], where: str) -> None:
        """Raise on the first key of ``table`` not listed in ``allowed``."""
        allowed_set = set(allowed)
        for key in table:
            if key not in allowed_set:
                path = f"{where}.{key}" if where else key
                line = self.line_of(key)
                location = f" (line {line})" if line else ""
                msg = f"unknown key '{path}' in {self.kind} document{location}"
                raise DocumentParseError(msg, key=path, line=line)

    def require(self, table: Mapping[str, Any], key: str, where: str) -> Any:  # noqa: ANN401
        """Return ``table[key]`` or raise naming the missing key."""
        if key not in table:
            path = f"{where}.{key}" if where else key
            msg = f"missing required key '{path}' in {self.kind} document"
            raise DocumentParseError(msg, key=path)
        return table[key]

    def table(self, parent: Mapping[str, Any], key: str, where: str) -> dict[str, Any]:
        """Return a sub-table, raising when the value is not a table."""
        value = parent.get(key, {})
        if not isinstance(value, dict):
            path = f"{where}.{key}" if where else key
            msg = f"'{path}' must be a table in {self.kind} document"
            raise DocumentParseError(msg, key=path, line=self.line_of(key))
        return value

    def tables(self, parent: Mapping[str, Any], key: str, where: str) -> list[dict[str, Any]]:
        """Return an array of tables (empty when absent)."""
        value = parent.get(key, [])
        if not isinstance(value, list) or not all(isinstance(item, dict) for item in value):
            path = f"{where}.{key}" if where else key
            msg = f"'{path}' must be an array of tables in {self.kind} document"
            raise DocumentParseError(msg, key=path, line=self.line_of(key))
        return value


def quantity(
    table: Mapping[str, Any], key: str, dimension: Dimension, where: str = ""
) -> float | None:
    """Convert ``table[key]`` to SI, or return None when absent."""
    if key not in table:
        return None
    return to_si(table[key], dimension, key=f"{where}.{key}" if where else key)


def build_model(model: type[ModelT], data: Mapping[str, Any], where: str) -> ModelT:
    """Validate ``data`` into ``model``, reporting the failed invariant.

    Raises:
        ConstraintError: A field constraint or model invariant does not hold.
    """
    try:
        return model.model_validate(dict(data))
    except ValidationError as e:
        error = e.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        text = str(error["msg"]).removeprefix("Value error, ")
        path = ".".join(part for part in (where, location) if part)
        msg = f"{path}: {text}" if path else text
        raise ConstraintError(msg, invariant=location or str(error["type"])) from e


def read_text(path: Path | str) -> str:
    """Read a document file as UTF-8.

    Raises:
        DocumentParseError: The file cannot be read.
    """
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read {path}: {e.strerror or e}"
        raise DocumentParseError(msg) from e


# ---------------------------------------------------------------------------
# Aircraft documents
# ---------------------------------------------------------------------------

# document key -> (model field, dimension or None for text)
_AIRCRAFT_KEYS: dict[str, tuple[str, Dimension | None]] = {
    "name": ("name", None),
    "architecture": ("architecture_id", None),
    "payload": ("payload_mass", Dimension.MASS),
    "crew": ("crew_mass", Dimension.MASS),
    "range": ("design_range", Dimension.LENGTH),
    "thrust_to_weight": ("thrust_to_weight", Dimension.DIMENSIONLESS),
    "power_to_weight": ("power_to_weight", Dimension.POWER_TO_WEIGHT),
    "wing_loading": ("wing_loading", Dimension.PRESSURE),
    "aspect_ratio": ("aspect_ratio", Dimension.DIMENSIONLESS),
    "oswald_efficiency": ("oswald_efficiency", Dimension.DIMENSIONLESS),
    "cd0": ("cd0", Dimension.DIMENSIONLESS),
    "max_lift_coefficient": ("max_lift_coefficient", Dimension.DIMENSIONLESS),
    "empty_weight_fraction": ("empty_weight_fraction", Dimension.DIMENSIONLESS),
    "empty_weight_basis": ("empty_weight_basis", None),
}

_SOURCE_KEYS: dict[str, tuple[str, Dimension | None]] = {
    "id": ("id", None),
    "kind": ("kind", None),
    "specific_energy": ("specific_energy", Dimension.SPECIFIC_ENERGY),
    "usable_depth_of_discharge": ("usable_depth_of_discharge", Dimension.DIMENSIONLESS),
    "max_specific_power": ("max_specific_power", Dimension.SPECIFIC_POWER),
}


def convert_fields(
    table: Mapping[str, Any], keys: Mapping[str, tuple[str, Dimension | None]], where: str
) -> dict[str, Any]:
    """Map document keys to model fields, converting quantities to SI."""
    fields: dict[str, Any] = {}
    for key, (field, dimension) in keys.items():
        if key not in table:
            continue
        fields[field] = table[key] if dimension is None else quantity(table, key, dimension, where)
    return fields


def parse_spec(document: str) -> AircraftSpec:
    """Parse an aircraft document into an ``AircraftSpec``.

    Quantities are normalized to SI; unknown keys are rejected; regressable
    fields that are absent stay ``None`` to be filled later.

    Args:
        document: TOML text.

    Returns:
        The validated specification.

    Raises:
        DocumentParseError: Malformed document or unknown key.
        UnitError: A quantity carries an unknown or incompatible unit.
        ConstraintError: A type invariant does not hold.

    Example:
        >>> parse_spec(text).wing_loading
        5000.0
    """
    doc = Document(document, "aircraft")
    data = doc.data
    doc.reject_unknown(data, [*_AIRCRAFT_KEYS, "energy_sources", "weights"], "")
    for key in ("name", "architecture", "payload", "range", "wing_loading", "aspect_ratio"):
        doc.require(data, key, "")
    doc.require(data, "max_lift_coefficient", "")

    fields = convert_fields(data, _AIRCRAFT_KEYS, "")

    sources = []
    for index, table in enumerate(doc.tables(data, "energy_sources", "")):
        where = f"energy_sources[{index}]"
        doc.reject_unknown(table, _SOURCE_KEYS, where)
        sources.append(convert_fields(table, _SOURCE_KEYS, where))
    fields["energy_sources"] = sources

    if "weights" in data:
        weights = doc.table(data, "weights", "")
        doc.reject_unknown(weights, ("mtow", "fuel_mass", "battery_mass"), "weights")
        converted: dict[str, Any] = {}
        if "mtow" in weights:
            converted["mtow"] = quantity(weights, "mtow", Dimension.MASS, "weights")
        for group in ("fuel_mass", "battery_mass"):
            masses = doc.table(weights, group, "weights")
            converted[group] = {
                source_id: quantity(masses, source_id, Dimension.MASS, f"weights.{group}")
                for source_id in masses
            }
        fields["weights"] = converted

    return build_model(AircraftSpec, fields, "")


def serialize_spec(spec: AircraftSpec) -> str:
    """Write a specification as a normalized aircraft document (SI numbers)."""
    out: dict[str, Any] = {"schema_version": SCHEMA_VERSION}
    for key, (field, _) in _AIRCRAFT_KEYS.items():
        value = getattr(spec, field)
        if value is not None:
            out[key] = value
    out["energy_sources"] = [
        {
            key: getattr(source, field)
            for key, (field, _) in _SOURCE_KEYS.items()
            if getattr(source, field) is not None
        }
        for source in spec.energy_sources
    ]
    if spec.weights is not None:
        out["weights"] = {
            "mtow": spec.weights.mtow,
            "fuel_mass": dict(spec.weights.fuel_mass),
            "battery_mass": dict(spec.weights.battery_mass),
        }
    return tomli_w.dumps(out)


def load_spec(path: Path | str) -> AircraftSpec:
    """Read and parse an aircraft document file."""
    return parse_spec(read_text(path))


# ---------------------------------------------------------------------------
# Mission documents
# ---------------------------------------------------------------------------

_SEGMENT_KEYS = (
    "kind",
    "altitude",
    "start_altitude",
    "end_altitude",
    "tas",
    "eas",
    "mach",
    "terminator",
    "distance",
    "duration",
    "operation",
    "rate_of_climb",
)

_DEFAULT_TERMINATOR = {
    "takeoff": "duration",
    "climb": "altitude_reached",
    "descent": "altitude_reached",
    "cruise": "distance",
    "loiter": "duration",
}

_TERMINATOR_VALUE_KEY = {"distance": "distance", "duration": "duration"}


def _parse_segment(doc: Document, table: Mapping[str, Any], where: str) -> dict[str, Any]:
    doc.reject_unknown(table, _SEGMENT_KEYS, where)
    kind = doc.require(table, "kind", where)
    segment: dict[str, Any] = {"kind": kind, "operation_id": doc.require(table, "operation", where)}

    altitude = quantity(table, "altitude", Dimension.LENGTH, where)
    start = quantity(table, "start_altitude", Dimension.LENGTH, where)
    end = quantity(table, "end_altitude", Dimension.LENGTH, where)
    if altitude is not None and (start is not None or end is not None):
        msg = f"{where}: give either 'altitude' or 'start_altitude'/'end_altitude', not both"
        raise DocumentParseError(msg, key=f"{where}.altitude", line=doc.line_of("altitude"))
    if altitude is None and start is None and end is None and kind == "takeoff":
        altitude = 0.0
    if altitude is not None:
        start = end = altitude
    if start is None or end is None:
        missing = "start_altitude" if start is None else "end_altitude"
        msg = f"{where}: missing required key '{missing}'"
        raise DocumentParseError(msg, key=f"{where}.{missing}")
    segment["start_altitude"] = start
    segment["end_altitude"] = end

    speeds = [key for key in ("tas", "eas", "mach") if key in table]
    if len(speeds) != 1:
        msg = f"{where}: exactly one of tas / eas / mach is required"
        raise DocumentParseError(msg, key=f"{where}.speed")
    speed_kind = speeds[0]
    speed_dimension = Dimension.DIMENSIONLESS if speed_kind == "mach" else Dimension.SPEED
    segment["speed"] = {
        "kind": speed_kind,
        "value": quantity(table, speed_kind, speed_dimension, where),
    }

    given = [key for key in ("distance", "duration") if key in table]
    if len(given) > 1:
        msg = f"{where}: give at most one of distance / duration"
        raise DocumentParseError(msg, key=f"{where}.terminator")
    if "terminator" in table:
        terminator_kind = table["terminator"]
    elif given:
        terminator_kind = given[0]
    else:
        terminator_kind = _DEFAULT_TERMINATOR.get(str(kind), "distance")
    value_key = _TERMINATOR_VALUE_KEY.get(str(terminator_kind))
    if given and given[0] != value_key:
        msg = f"{where}: '{given[0]}' does not match terminator '{terminator_kind}'"
        raise DocumentParseError(msg, key=f"{where}.{given[0]}", line=doc.line_of(given[0]))
    value = None
    if value_key == "distance":
        value = quantity(table, "distance", Dimension.LENGTH, where)
    elif value_key == "duration":
        value = quantity(table, "duration", Dimension.TIME, where)
        if value is None and kind == "takeoff":
            value = TAKEOFF_DURATION
    segment["terminator"] = {"kind": terminator_kind, "value": value}

    rate = quantity(table, "rate_of_climb", Dimension.RATE, where)
    if rate is not None:
        segment["rate_of_climb"] = abs(rate)
    return segment


def parse_mission(document: str, *, validate: bool = True) -> MissionProfile:
    """Parse a mission document into a ``MissionProfile``.

    Args:
        document: TOML text.
        validate: Raise on mission invariant violations.

    Returns:
        The profile.

    Raises:
        DocumentParseError: Malformed document or unknown key.
        UnitError: A quantity carries an unknown or incompatible unit.
        ConstraintError: A type invariant or mission invariant does not hold;
            the message lists every violation with its segment index.
    """
    doc = Document(document, "mission")
    data = doc.data
    doc.reject_unknown(data, ("name", "segments", "reserve_segments"), "")
    doc.require(data, "segments", "")
    fields: dict[str, Any] = {}
    if "name" in data:
        fields["name"] = data["name"]
    for group in ("segments", "reserve_segments"):
        fields[group] = [
            _parse_segment(doc, table, f"{group}[{index}]")
            for index, table in enumerate(doc.tables(data, group, ""))
        ]
    profile = build_model(MissionProfile, fields, "")

    if validate:
        violations = validate_mission(profile)
        if violations:
            listing = "; ".join(str(violation) for violation in violations)
            msg = f"invalid mission: {listing}"
            raise ConstraintError(msg, invariant=violations[0].code)
    return profile


def serialize_mission(profile: MissionProfile) -> str:
    """Write a profile as a normalized mission document (SI numbers)."""

    def segment_table(segment: Any) -> dict[str, Any]:  # noqa: ANN401
        table: dict[str, Any] = {
            "kind": segment.kind,
            "start_altitude": segment.start_altitude,
            "end_altitude": segment.end_altitude,
            segment.speed.kind: segment.speed.value,
            "terminator": segment.terminator.kind,
            "operation": segment.operation_id,
        }
        value_key = _TERMINATOR_VALUE_KEY.get(segment.terminator.kind)
        if value_key is not None and segment.terminator.value is not None:
            table[value_key] = segment.terminator.value
        if segment.rate_of_climb is not None:
            table["rate_of_climb"] = segment.rate_of_climb
        return table

    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "name": profile.name,
        "segments": [segment_table(segment) for segment in profile.segments],
    }
    if profile.reserve_segments:
        out["reserve_segments"] = [segment_table(s) for s in profile.reserve_segments]
    return tomli_w.dumps(out)


def load_mission(path: Path | str, *, validate: bool = True) -> MissionProfile:
    """Read and parse a mission document file."""
    return parse_mission(read_text(path), validate=validate)
