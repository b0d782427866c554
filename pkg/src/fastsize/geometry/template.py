"""Geometry templates.

A template holds the shape parameters that sizing does not decide: fuselage
fineness, wing taper and sweep, tail volume coefficients and where the
propulsors go. Template documents share the TOML family of the other inputs::

    schema_version = 1
    name = "regional twin"
    wing_taper = 0.55
    wing_sweep = "2 deg"
    placement = "wing_podded"
    stations = [0.32]
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..models.parsing import Document, build_model, convert_fields, read_text
from ..units import Dimension

Placement = Literal["wing_podded", "aft_fuselage"]


class GeometryTemplate(BaseModel):
    """Shape parameters of the wireframe.

    Attributes:
        name: Template label.
        fuselage_fineness: Fuselage length over diameter.
        wing_taper: Tip chord over root chord.
        wing_sweep: Leading-edge sweep, rad.
        wing_apex_fraction: Wing root leading edge, as a fraction of
            fuselage length from the nose.
        horizontal_tail_volume: c_HT = S_HT·l_t / (S·c̄).
        vertical_tail_volume: c_VT = S_VT·l_t / (S·b).
        horizontal_tail_aspect_ratio: Horizontal tail aspect ratio.
        vertical_tail_aspect_ratio: Vertical tail aspect ratio (height²/area).
        horizontal_tail_taper: Horizontal tail taper ratio.
        vertical_tail_taper: Vertical tail taper ratio.
        tail_arm_fraction: Tail arm l_t as a fraction of fuselage length.
        propulsor_radius_fraction: Propulsor marker radius over wing span.
        placement: ``wing_podded`` or ``aft_fuselage``.
        stations: Spanwise stations of podded pairs as fractions of the
            semi-span; evenly spread when omitted.
        centerline: Allow one propulsor on the centerline (nose or tail)
            when the sink count is odd.
    """

    name: str = Field("default", description="Template label")
    fuselage_fineness: float = Field(9.0, gt=1, description="Fuselage length / diameter")
    wing_taper: float = Field(0.4, gt=0, le=1, description="Wing taper ratio")
    wing_sweep: float = Field(
        0.0, ge=-math.pi / 3, le=math.pi / 3, description="Leading-edge sweep, rad"
    )
    wing_apex_fraction: float = Field(0.38, gt=0, lt=1, description="Wing apex / length")
    horizontal_tail_volume: float = Field(0.9, gt=0, description="Horizontal tail volume")
    vertical_tail_volume: float = Field(0.08, gt=0, description="Vertical tail volume")
    horizontal_tail_aspect_ratio: float = Field(4.5, gt=0)
    vertical_tail_aspect_ratio: float = Field(1.5, gt=0)
    horizontal_tail_taper: float = Field(0.5, gt=0, le=1)
    vertical_tail_taper: float = Field(0.6, gt=0, le=1)
    tail_arm_fraction: float = Field(0.45, gt=0, lt=1, description="Tail arm / length")
    propulsor_radius_fraction: float = Field(0.05, gt=0, lt=0.5)
    placement: Placement = Field("wing_podded", description="Propulsor placement rule")
    stations: tuple[float, ...] | None = Field(None, description="Podded pair stations")
    centerline: bool = Field(False, description="Allow a centerline propulsor")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _stations_inside_semispan(self) -> GeometryTemplate:
        for station in self.stations or ():
            if not 0.0 < station < 1.0:
                msg = f"stations must lie strictly inside the semi-span (0, 1), got {station}"
                raise ValueError(msg)
        return self


_TEMPLATE_KEYS: dict[str, tuple[str, Dimension | None]] = {
    "name": ("name", None),
    "fuselage_fineness": ("fuselage_fineness", Dimension.DIMENSIONLESS),
    "wing_taper": ("wing_taper", Dimension.DIMENSIONLESS),
    "wing_sweep": ("wing_sweep", Dimension.ANGLE),
    "wing_apex_fraction": ("wing_apex_fraction", Dimension.DIMENSIONLESS),
    "horizontal_tail_volume": ("horizontal_tail_volume", Dimension.DIMENSIONLESS),
    "vertical_tail_volume": ("vertical_tail_volume", Dimension.DIMENSIONLESS),
    "horizontal_tail_aspect_ratio": ("horizontal_tail_aspect_ratio", Dimension.DIMENSIONLESS),
    "vertical_tail_aspect_ratio": ("vertical_tail_aspect_ratio", Dimension.DIMENSIONLESS),
    "horizontal_tail_taper": ("horizontal_tail_taper", Dimension.DIMENSIONLESS),
    "vertical_tail_taper": ("vertical_tail_taper", Dimension.DIMENSIONLESS),
    "tail_arm_fraction": ("tail_arm_fraction", Dimension.DIMENSIONLESS),
    "propulsor_radius_fraction": ("propulsor_radius_fraction", Dimension.DIMENSIONLESS),
    "placement": ("placement", None),
    "stations": ("stations", None),
    "centerline": ("centerline", None),
}


def parse_template(document: str) -> GeometryTemplate:
    """Parse a geometry template document.

    Raises:
        DocumentParseError: Malformed document or unknown key.
        UnitError: Bad unit on the sweep angle or a dimensionless key.
        ConstraintError: A field is out of range.
    """
    doc = Document(document, "geometry template")
    doc.reject_unknown(doc.data, _TEMPLATE_KEYS, "")
    return build_model(GeometryTemplate, convert_fields(doc.data, _TEMPLATE_KEYS, ""), "")


def load_template(path: Path | str) -> GeometryTemplate:
    """Read and parse a geometry template file."""
    return parse_template(read_text(path))
