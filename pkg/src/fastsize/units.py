"""Unit normalization for input documents.

Quantities in documents are either bare numbers (already SI) or strings of the
form ``"<number> <unit>"``. Every quantity is converted to SI exactly once, at
parse time; the rest of the engine never sees a unit.

Example:
    >>> to_si("1000 km", Dimension.LENGTH, key="design_range")
    1000000.0
    >>> to_si("5000 N/m2", Dimension.PRESSURE, key="wing_loading")
    5000.0
"""

from __future__ import annotations

import re
from enum import Enum
from tokenize import TokenError
from typing import Any

from pint import UnitRegistry
from pint.errors import PintError, UndefinedUnitError

from .exceptions import UnitError

G0 = 9.80665
"""Standard gravity, m/s²."""

_ureg = UnitRegistry()
Q_ = _ureg.Quantity


class Dimension(Enum):
    """Physical dimension expected for a document key."""

    DIMENSIONLESS = "dimensionless"
    MASS = "mass"
    LENGTH = "length"
    SPEED = "speed"
    RATE = "rate"
    TIME = "time"
    PRESSURE = "pressure"
    POWER = "power"
    SPECIFIC_ENERGY = "specific_energy"
    SPECIFIC_POWER = "specific_power"
    POWER_TO_WEIGHT = "power_to_weight"
    ANGLE = "angle"


# Dimension -> pint dimensionality it must reduce to
_DIMENSIONALITY: dict[Dimension, str | None] = {
    Dimension.DIMENSIONLESS: None,
    Dimension.MASS: "[mass]",
    Dimension.LENGTH: "[length]",
    Dimension.SPEED: "[length] / [time]",
    Dimension.RATE: "[length] / [time]",
    Dimension.TIME: "[time]",
    Dimension.PRESSURE: "[mass] / [length] / [time] ** 2",
    Dimension.POWER: "[mass] * [length] ** 2 / [time] ** 3",
    Dimension.SPECIFIC_ENERGY: "[length] ** 2 / [time] ** 2",
    Dimension.SPECIFIC_POWER: "[length] ** 2 / [time] ** 3",
    # W/N reduces to a speed
    Dimension.POWER_TO_WEIGHT: "[length] / [time]",
    # radians reduce to a pure number
    Dimension.ANGLE: None,
}

# Units quoted in error messages, per dimension.
_SUGGESTED: dict[Dimension, tuple[str, ...]] = {
    Dimension.DIMENSIONLESS: (),
    Dimension.MASS: ("kg", "g", "t", "lb"),
    Dimension.LENGTH: ("m", "km", "ft", "nmi", "mi"),
    Dimension.SPEED: ("m/s", "km/h", "kt", "ft/min"),
    Dimension.RATE: ("m/s", "km/h", "kt", "ft/min"),
    Dimension.TIME: ("s", "min", "h"),
    Dimension.PRESSURE: ("N/m2", "Pa", "lbf/ft2"),
    Dimension.POWER: ("W", "kW", "MW", "hp"),
    Dimension.SPECIFIC_ENERGY: ("J/kg", "MJ/kg", "Wh/kg", "kWh/kg"),
    Dimension.SPECIFIC_POWER: ("W/kg", "kW/kg"),
    Dimension.POWER_TO_WEIGHT: ("W/N", "kW/N"),
    Dimension.ANGLE: ("rad", "deg"),
}

# Document spellings the registry reads differently or not at all.
_SPELLINGS = {"kt": "knot", "lbm": "lb", "m2": "m**2", "ft2": "ft**2"}
_SPELLING = re.compile(r"\b(" + "|".join(_SPELLINGS) + r")\b")


def known_units(dimension: Dimension) -> list[str]:
    """List the usual unit spellings for a dimension."""
    return list(_SUGGESTED[dimension])


def _parse(text: str, key: str) -> Any:
    """Parse a quantity string into a pint quantity."""
    normalized = _SPELLING.sub(lambda m: _SPELLINGS[m.group(1)], text.strip())
    try:
        return Q_(normalized)
    except UndefinedUnitError as exc:
        msg = f"'{key}': unknown unit in {text!r}"
        raise UnitError(msg, key=key) from exc
    except (PintError, ValueError, TypeError, AttributeError, SyntaxError, TokenError) as exc:
        msg = f"'{key}': cannot read quantity {text!r}"
        raise UnitError(msg, key=key) from exc


def to_si(value: object, dimension: Dimension, key: str) -> float:
    """Convert a document quantity to SI.

    Args:
        value: Bare number (taken as SI) or ``"<number> <unit>"`` string.
        dimension: Dimension the key expects.
        key: Document key, used in error messages.

    Returns:
        Value in SI units.

    Raises:
        UnitError: Value is not a quantity, the unit is unknown, or the unit
            belongs to another dimension.
    """
    if isinstance(value, bool):
        msg = f"'{key}': expected a quantity, got a boolean"
        raise UnitError(msg, key=key)
    if isinstance(value, int | float):
        return float(value)
    if not isinstance(value, str):
        msg = f"'{key}': expected a number or '<number> <unit>' string, got {value!r}"
        raise UnitError(msg, key=key)

    quantity = _parse(value, key)
    if not isinstance(quantity, Q_):
        msg = f"'{key}': cannot read quantity {value!r}"
        raise UnitError(msg, key=key)
    if quantity.unitless:
        return float(quantity.magnitude)

    if dimension is Dimension.DIMENSIONLESS:
        msg = f"'{key}' is dimensionless but carries unit '{quantity.units:~}'"
        raise UnitError(msg, key=key)
    expected = _DIMENSIONALITY[dimension]
    matches = quantity.dimensionless if expected is None else quantity.check(expected)
    if not matches:
        accepted = ", ".join(known_units(dimension))
        msg = (
            f"'{key}': unit '{quantity.units:~}' is not a {dimension.value} unit "
            f"(accepted: {accepted})"
        )
        raise UnitError(msg, key=key)
    try:
        return float(quantity.to_base_units().magnitude)
    except PintError as exc:
        msg = f"'{key}': cannot convert {value!r} to SI"
        raise UnitError(msg, key=key) from exc
