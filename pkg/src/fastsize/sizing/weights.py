"""Weight build-up and energy-source sizing.

The empty-weight fraction normally covers airframe and propulsion together;
propulsion masses sized from component peak powers are carved out of it so
they are not counted twice. With ``empty_weight_basis = "airframe_only"`` the
fraction covers the airframe alone and propulsion is added on top.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

from ..exceptions import InfeasibleDecompositionError
from ..mission import takeoff_sink_demands
from ..models import AircraftSpec
from ..powertrain import OperationSplit, PropArchitecture, propagate_power, size_components


@dataclass(frozen=True)
class WeightBuildup:
    """Masses implied by one MTOW guess.

    Attributes:
        mtow: The guess, kg.
        airframe_mass: Airframe mass, kg.
        propulsion_masses: Mass per transmitter and sink, kg.
        wing_area: Wing reference area, m².
        installed_rating: Installed thrust (N) or power (W).
        rating_kind: ``thrust`` or ``power``.
        sizing_powers: Power each component was sized on, W.
    """

    mtow: float
    airframe_mass: float
    propulsion_masses: dict[str, float]
    wing_area: float
    installed_rating: float
    rating_kind: str
    sizing_powers: dict[str, float]

    @property
    def propulsion_mass(self) -> float:
        """Total propulsion mass, kg."""
        return math.fsum(self.propulsion_masses.values())


def takeoff_rating_powers(
    spec: AircraftSpec,
    arch: PropArchitecture,
    op: OperationSplit,
    mtow: float,
    speed: float,
) -> dict[str, float]:
    """Rating power of every component with the installed rating applied.

    The installed rating is apportioned among the sinks by the operation's
    thrust shares and propagated through its splits.
    """
    demands = takeoff_sink_demands(spec, arch, op, mtow, speed)
    return propagate_power(arch, op, demands).rating_powers(arch)


def weight_buildup(
    mtow: float,
    spec: AircraftSpec,
    arch: PropArchitecture,
    peak_powers: Mapping[str, float],
    *,
    takeoff_operation: OperationSplit | None = None,
    takeoff_speed: float | None = None,
) -> WeightBuildup:
    """Airframe and propulsion masses at an MTOW guess.

    Args:
        mtow: MTOW guess, kg.
        spec: Completed specification.
        arch: Architecture with every specific power known.
        peak_powers: Peak rating power per component over the mission, W.
        takeoff_operation: Operation the installed rating is apportioned
            by; None sizes on ``peak_powers`` alone.
        takeoff_speed: True airspeed converting a thrust rating to power, m/s.

    Returns:
        The build-up. Components are sized on the larger of their mission
        peak and their share of the installed rating.

    Raises:
        InfeasibleDecompositionError: Propulsion outweighs the empty-weight
            allowance.

    Example:
        >>> round(weight_buildup(50_000, spec, arch, {}).wing_area, 2)  # W/S = 5000 N/m²
        98.07
    """
    if not mtow > 0:
        msg = f"MTOW guess must be positive, got {mtow}"
        raise InfeasibleDecompositionError(msg)
    if spec.empty_weight_fraction is None:
        msg = f"aircraft '{spec.name}' has no empty_weight_fraction; fill it first"
        raise InfeasibleDecompositionError(msg)

    powers = {c.id: peak_powers.get(c.id, 0.0) for c in arch.components}
    if takeoff_operation is not None and takeoff_speed is not None:
        rated = takeoff_rating_powers(spec, arch, takeoff_operation, mtow, takeoff_speed)
        powers = {cid: max(power, rated[cid]) for cid, power in powers.items()}
    propulsion = size_components(arch, powers)
    propulsion_total = math.fsum(propulsion.values())

    allowance = spec.empty_weight_fraction * mtow
    if spec.empty_weight_basis == "airframe_only":
        airframe = allowance
    else:
        airframe = allowance - propulsion_total
        if airframe < 0:
            msg = (
                f"infeasible decomposition: propulsion mass {propulsion_total:.1f} kg exceeds "
                f"the empty-weight allowance {allowance:.1f} kg at MTOW {mtow:.1f} kg"
            )
            raise InfeasibleDecompositionError(msg)

    return WeightBuildup(
        mtow=mtow,
        airframe_mass=airframe,
        propulsion_masses=propulsion,
        wing_area=spec.wing_area(mtow),
        installed_rating=spec.installed_rating(mtow),
        rating_kind=spec.rating_kind,
        sizing_powers=powers,
    )


@dataclass(frozen=True)
class EnergySourceMasses:
    """Masses of the energy sources, kg."""

    fuel_mass: dict[str, float]
    battery_mass: dict[str, float]

    @property
    def total(self) -> float:
        """All source masses, kg."""
        return math.fsum([*self.fuel_mass.values(), *self.battery_mass.values()])


def energy_source_sizing(
    spec: AircraftSpec,
    energy_per_source: Mapping[str, float],
    fuel_per_source: Mapping[str, float],
    peak_draw: Mapping[str, float] | None = None,
) -> EnergySourceMasses:
    """Size the energy sources from mission totals.

    Consumables carry exactly the mass burned (design plus reserve).
    Batteries carry ``E / (e·DoD)``, raised to ``P_peak / p_max`` when the
    power bound is larger.

    Example:
        >>> sized = energy_source_sizing(spec, {"pack": 7.2e9}, {})
        >>> sized.battery_mass["pack"]  # 250 Wh/kg, DoD 0.8
        10000.0
    """
    fuel: dict[str, float] = {}
    battery: dict[str, float] = {}
    for source in spec.energy_sources:
        if source.is_consumable:
            fuel[source.id] = fuel_per_source.get(source.id, 0.0)
            continue
        assert source.usable_depth_of_discharge is not None  # noqa: S101
        assert source.max_specific_power is not None  # noqa: S101
        energy = energy_per_source.get(source.id, 0.0)
        by_energy = energy / (source.specific_energy * source.usable_depth_of_discharge)
        by_power = (peak_draw or {}).get(source.id, 0.0) / source.max_specific_power
        battery[source.id] = max(by_energy, by_power)
    return EnergySourceMasses(fuel, battery)
