"""International Standard Atmosphere, troposphere and lower stratosphere.

Two layers: a 6.5 K/km lapse from sea level to the tropopause at 11 km, then
an isothermal layer up to 20 km, the ceiling of the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..exceptions import MissionError
from ..units import G0

R_AIR = 287.05287
"""Specific gas constant of dry air, J/(kg·K)."""
GAMMA_AIR = 1.4

T0 = 288.15
P0 = 101_325.0
RHO0 = P0 / (R_AIR * T0)
"""Sea-level density, kg/m³ (1.2250)."""

LAPSE_RATE = -0.0065
TROPOPAUSE = 11_000.0
CEILING = 20_000.0

_T11 = T0 + LAPSE_RATE * TROPOPAUSE
_P11 = P0 * (_T11 / T0) ** (-G0 / (LAPSE_RATE * R_AIR))


@dataclass(frozen=True, slots=True)
class AtmosphereState:
    """Atmospheric properties at one altitude (SI)."""

    altitude: float
    temperature: float
    pressure: float
    density: float
    speed_of_sound: float


def atmosphere(h: float) -> AtmosphereState:
    """Evaluate the standard atmosphere.

    Args:
        h: Geopotential altitude, m, within [0, 20000].

    Returns:
        Temperature, pressure, density and speed of sound at ``h``.

    Raises:
        MissionError: Altitude outside the modeled range.

    Example:
        >>> round(atmosphere(11_000.0).temperature, 2)
        216.65
    """
    if not 0.0 <= h <= CEILING:
        msg = f"altitude {h:g} m outside the modeled atmosphere (0 to {CEILING:g} m)"
        raise MissionError(msg)
    if h <= TROPOPAUSE:
        temperature = T0 + LAPSE_RATE * h
        pressure = P0 * (temperature / T0) ** (-G0 / (LAPSE_RATE * R_AIR))
    else:
        temperature = _T11
        pressure = _P11 * math.exp(-G0 * (h - TROPOPAUSE) / (R_AIR * _T11))
    return AtmosphereState(
        altitude=h,
        temperature=temperature,
        pressure=pressure,
        density=pressure / (R_AIR * temperature),
        speed_of_sound=math.sqrt(GAMMA_AIR * R_AIR * temperature),
    )
