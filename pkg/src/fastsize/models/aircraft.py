"""Aircraft specification models.

This module provides the immutable Pydantic v2 models describing what the user
asks the engine to size:
- EnergySourceSpec: one energy carrier (jet fuel, hydrogen, battery)
- FixedWeights: explicit masses used when flying a fixed aircraft
- AircraftSpec: payload, range, propulsion rating, wing loading, drag polar

All quantities are SI. Fields left as ``None`` are to be filled by the
regression module before sizing.
"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..units import G0

EnergySourceKind = Literal["jet_fuel", "hydrogen", "battery"]
EmptyWeightBasis = Literal["airframe_and_propulsion", "airframe_only"]

REGRESSABLE_FIELDS: tuple[str, ...] = ("empty_weight_fraction", "cd0", "oswald_efficiency")
"""AircraftSpec fields that may be omitted and filled later."""


class EnergySourceSpec(BaseModel):
    """Energy carrier stored on board.

    Attributes:
        id: Id of the architecture source component this entry describes.
        kind: Carrier type.
        specific_energy: Energy content per unit mass, J/kg.
        usable_depth_of_discharge: Usable fraction of battery energy.
        max_specific_power: Deliverable battery power per unit mass, W/kg.

    Example:
        >>> EnergySourceSpec(id="fuel", kind="jet_fuel", specific_energy=43.0e6)
        >>> EnergySourceSpec(
        ...     id="pack",
        ...     kind="battery",
        ...     specific_energy=9.0e5,
        ...     usable_depth_of_discharge=0.8,
        ...     max_specific_power=2000.0,
        ... )
    """

    id: str = Field(..., min_length=1, description="Architecture source component id")
    kind: EnergySourceKind = Field(..., description="Energy carrier type")
    specific_energy: float = Field(..., gt=0, description="Specific energy, J/kg")
    usable_depth_of_discharge: float | None = Field(
        None, gt=0, le=1, description="Usable battery fraction (battery only)"
    )
    max_specific_power: float | None = Field(
        None, gt=0, description="Battery specific power limit, W/kg (battery only)"
    )

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _battery_fields_iff_battery(self) -> EnergySourceSpec:
        has_fields = (
            self.usable_depth_of_discharge is not None,
            self.max_specific_power is not None,
        )
        if self.kind == "battery" and not all(has_fields):
            msg = (
                f"battery source '{self.id}' needs usable_depth_of_discharge "
                "and max_specific_power"
            )
            raise ValueError(msg)
        if self.kind != "battery" and any(has_fields):
            msg = f"{self.kind} source '{self.id}' cannot carry battery-only fields"
            raise ValueError(msg)
        return self

    @property
    def is_battery(self) -> bool:
        """Whether this source stores electrical energy."""
        return self.kind == "battery"

    @property
    def is_consumable(self) -> bool:
        """Whether this source loses mass as it is drawn."""
        return self.kind != "battery"


class FixedWeights(BaseModel):
    """Explicit masses for flying an aircraft without sizing it.

    Attributes:
        mtow: Takeoff mass, kg.
        fuel_mass: Loaded mass per consumable source, kg.
        battery_mass: Installed mass per battery source, kg.
    """

    mtow: float = Field(..., gt=0, description="Takeoff mass, kg")
    fuel_mass: dict[str, float] = Field(default_factory=dict, description="kg per consumable")
    battery_mass: dict[str, float] = Field(default_factory=dict, description="kg per battery")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _non_negative(self) -> FixedWeights:
        for label, masses in (("fuel_mass", self.fuel_mass), ("battery_mass", self.battery_mass)):
            for source_id, mass in masses.items():
                if not math.isfinite(mass) or mass < 0:
                    msg = f"{label}.{source_id} must be a finite mass >= 0, got {mass}"
                    raise ValueError(msg)
        return self


class AircraftSpec(BaseModel):
    """User-declared design inputs of one aircraft.

    Thrust-to-weight and power-to-weight are mutually exclusive ways of
    stating the installed propulsion rating per unit MTOW weight. Wing loading
    and the rating are trusted inputs; the engine never solves for them.

    Attributes:
        name: Text identifier.
        payload_mass: Design payload, kg.
        crew_mass: Crew mass, kg (0 when absent).
        design_range: Design range, m.
        thrust_to_weight: Sea-level static thrust per unit MTOW weight.
        power_to_weight: Installed shaft power per unit MTOW weight, W/N.
        wing_loading: MTOW weight per wing reference area, N/m².
        aspect_ratio: Wing aspect ratio.
        oswald_efficiency: Span efficiency of the drag polar.
        cd0: Parasite drag coefficient.
        empty_weight_fraction: (airframe + propulsion) mass over MTOW.
        empty_weight_basis: Whether the empty-weight fraction includes
            propulsion masses (default) or covers the airframe only.
        architecture_id: Id of the propulsion architecture.
        energy_sources: Energy carriers, one per architecture source.
        max_lift_coefficient: Used only for the stall-speed sanity check.
        weights: Explicit masses for fixed-aircraft flights.
    """

    name: str = Field(..., min_length=1, description="Aircraft identifier")
    payload_mass: float = Field(..., ge=0, description="Payload mass, kg")
    crew_mass: float = Field(0.0, ge=0, description="Crew mass, kg")
    design_range: float = Field(..., gt=0, description="Design range, m")
    thrust_to_weight: float | None = Field(None, ge=0, description="Thrust per MTOW weight")
    power_to_weight: float | None = Field(None, ge=0, description="Power per MTOW weight, W/N")
    wing_loading: float = Field(..., gt=0, description="Wing loading, N/m²")
    aspect_ratio: float = Field(..., gt=0, description="Wing aspect ratio")
    oswald_efficiency: float | None = Field(None, gt=0, le=1, description="Oswald efficiency")
    cd0: float | None = Field(None, gt=0, description="Parasite drag coefficient")
    empty_weight_fraction: float | None = Field(
        None, gt=0, lt=1, description="Empty-weight fraction"
    )
    empty_weight_basis: EmptyWeightBasis = Field(
        "airframe_and_propulsion", description="What the empty-weight fraction covers"
    )
    architecture_id: str = Field(..., min_length=1, description="Propulsion architecture id")
    energy_sources: tuple[EnergySourceSpec, ...] = Field(
        ..., min_length=1, description="Energy carriers"
    )
    max_lift_coefficient: float = Field(..., gt=0, description="Maximum lift coefficient")
    weights: FixedWeights | None = Field(None, description="Explicit masses for fixed flights")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _one_rating(self) -> AircraftSpec:
        if (self.thrust_to_weight is None) == (self.power_to_weight is None):
            msg = "exactly one of thrust_to_weight / power_to_weight must be given"
            raise ValueError(msg)
        ids = [source.id for source in self.energy_sources]
        duplicates = sorted({source_id for source_id in ids if ids.count(source_id) > 1})
        if duplicates:
            msg = f"duplicate energy source ids: {', '.join(duplicates)}"
            raise ValueError(msg)
        return self

    @property
    def payload_and_crew(self) -> float:
        """Payload plus crew mass, kg."""
        return self.payload_mass + self.crew_mass

    @property
    def rating_kind(self) -> Literal["thrust", "power"]:
        """Whether the installed rating is a thrust or a power."""
        return "thrust" if self.thrust_to_weight is not None else "power"

    @property
    def induced_drag_factor(self) -> float:
        """k = 1/(π·AR·e) of the drag polar."""
        if self.oswald_efficiency is None:
            msg = f"aircraft '{self.name}' has no oswald_efficiency"
            raise ValueError(msg)
        return 1.0 / (math.pi * self.aspect_ratio * self.oswald_efficiency)

    def installed_rating(self, mtow: float) -> float:
        """Installed thrust (N) or power (W) at the given takeoff mass."""
        ratio = self.thrust_to_weight if self.thrust_to_weight is not None else self.power_to_weight
        assert ratio is not None  # noqa: S101
        return ratio * mtow * G0

    def wing_area(self, mtow: float) -> float:
        """Wing reference area implied by the wing loading, m²."""
        return mtow * G0 / self.wing_loading

    def source(self, source_id: str) -> EnergySourceSpec:
        """Return the energy source with the given id.

        Raises:
            KeyError: No such source.
        """
        for source in self.energy_sources:
            if source.id == source_id:
                return source
        raise KeyError(source_id)

    def missing_fields(self) -> list[str]:
        """Names of regressable fields still unset, in declaration order."""
        return [name for name in REGRESSABLE_FIELDS if getattr(self, name) is None]

    def updated(self, **changes: object) -> AircraftSpec:
        """Return a validated copy with some fields replaced."""
        return AircraftSpec.model_validate({**self.model_dump(), **changes})
