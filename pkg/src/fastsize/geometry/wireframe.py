"""Parametric wireframe of a sized aircraft.

Axes: x aft from the nose, y to starboard, z up; metres. Every part is a
list of 3-D polylines. Port-side geometry is generated as the exact mirror
image of starboard geometry, so the wireframe is symmetric about the x-z
plane to the last bit.

Sizing rules:

- Wing: span ``b = √(AR·S)``, root chord ``2S / (b(1 + λ))``, straight
  leading edge swept by the template angle.
- Fuselage: cylinder with a nose cone over the first 15 % and a tail cone
  over the last 25 % of the length; diameter from the fineness ratio.
  Length from a power law on MTOW.
- Tails: volume-coefficient method on the wing's mean aerodynamic chord and
  span with the template tail arm.
- Propulsors: one disc marker per sink, placed by the template rule.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import GeometryError, RegressionError
from ..models import AircraftSpec
from ..powertrain import PropArchitecture
from ..regression import HistoricalDatabase, fit, predict
from ..sizing import SizedAircraft
from .template import GeometryTemplate

NOSE_FRACTION = 0.15
TAIL_FRACTION = 0.25
FUSELAGE_LENGTH_COEFFICIENT = 0.287
FUSELAGE_LENGTH_EXPONENT = 0.43
ASPECT_RATIO_TOLERANCE = 1e-9
CIRCLE_SEGMENTS = 16


@dataclass(frozen=True)
class Wireframe:
    """Named parts, each a list of 3-D polylines.

    Attributes:
        parts: Part name -> polylines, each an (n, 3) array in metres.
        dimensions: Principal dimensions (span, wing_area, aspect_ratio,
            fuselage_length, ...) for annotation.
    """

    parts: dict[str, list[np.ndarray]]
    dimensions: dict[str, float] = field(default_factory=dict)

    def polylines(self) -> list[np.ndarray]:
        """Every polyline, parts in insertion order."""
        return [line for lines in self.parts.values() for line in lines]

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Minimum and maximum corner of the bounding box."""
        points = np.vstack(self.polylines())
        return points.min(axis=0), points.max(axis=0)

    def propulsor_positions(self) -> dict[str, np.ndarray]:
        """Marker centre per propulsor part."""
        return {
            name: (lines[0].min(axis=0) + lines[0].max(axis=0)) / 2.0
            for name, lines in self.parts.items()
            if name.startswith("propulsor:")
        }


def _line(points: Sequence[Sequence[float]]) -> np.ndarray:
    return np.asarray(points, dtype=float)


def _mirror(line: np.ndarray) -> np.ndarray:
    mirrored = line.copy()
    mirrored[:, 1] = -mirrored[:, 1]
    return mirrored


def _symmetric_loop(half: np.ndarray) -> np.ndarray:
    """Close a starboard half-outline (root to root) with its mirror image."""
    port = _mirror(half[-2:0:-1])
    return np.vstack([half, port, half[:1]])


def shoelace_area(outline: np.ndarray) -> float:
    """Planform area of a closed outline projected on the x-y plane."""
    x, y = outline[:, 0], outline[:, 1]
    return 0.5 * abs(float(np.dot(x[:-1], y[1:]) - np.dot(x[1:], y[:-1])))


@dataclass(frozen=True, slots=True)
class Planform:
    """Trapezoidal surface dimensions."""

    span: float
    root_chord: float
    tip_chord: float

    @property
    def mean_aerodynamic_chord(self) -> float:
        """c̄ of the trapezoid."""
        taper = self.tip_chord / self.root_chord
        return 2.0 / 3.0 * self.root_chord * (1 + taper + taper * taper) / (1 + taper)


def planform(area: float, aspect_ratio: float, taper: float) -> Planform:
    """Span and chords of a trapezoidal planform.

    Example:
        >>> planform(100.0, 9.0, 1.0).span
        30.0
    """
    if not (area > 0 and aspect_ratio > 0 and 0 < taper <= 1):
        msg = f"invalid planform: area {area}, aspect ratio {aspect_ratio}, taper {taper}"
        raise GeometryError(msg)
    span = math.sqrt(aspect_ratio * area)
    root = 2.0 * area / (span * (1.0 + taper))
    return Planform(span, root, taper * root)


def fuselage_length(mtow: float, db: HistoricalDatabase | None = None) -> float:
    """Fuselage length from MTOW, m.

    With a database, a power law ``length_m ~ mtow_kg`` is fitted on the
    aircraft table; otherwise ``L = 0.287·MTOW^0.43``.
    """
    if db is not None:
        try:
            model = fit(db, ["mtow_kg"], "length_m", "power_law", table="aircraft")
            return predict(model, [mtow]).mean
        except RegressionError as e:
            msg = f"fuselage length regression failed: {e}"
            raise GeometryError(msg) from e
    return FUSELAGE_LENGTH_COEFFICIENT * mtow**FUSELAGE_LENGTH_EXPONENT


def _wing_outline(
    shape: Planform, sweep: float, apex: Sequence[float], *, vertical: bool = False
) -> np.ndarray:
    """Outline of a swept trapezoid, root leading edge at ``apex``.

    Horizontal surfaces span both sides; a vertical one grows upwards.
    """
    x0, y0, z0 = apex
    reach = shape.span if vertical else shape.span / 2.0
    shift = reach * math.tan(sweep)
    if vertical:
        return _line(
            [
                (x0, y0, z0),
                (x0 + shift, y0, z0 + reach),
                (x0 + shift + shape.tip_chord, y0, z0 + reach),
                (x0 + shape.root_chord, y0, z0),
                (x0, y0, z0),
            ]
        )
    half = _line(
        [
            (x0, 0.0, z0),
            (x0 + shift, reach, z0),
            (x0 + shift + shape.tip_chord, reach, z0),
            (x0 + shape.root_chord, 0.0, z0),
        ]
    )
    return _symmetric_loop(half)


def _half_circle(radius: float) -> list[tuple[float, float]]:
    """(y, z) of a starboard half circle, top to bottom inclusive."""
    half = CIRCLE_SEGMENTS // 2
    points = [
        (radius * math.sin(math.pi * k / half), radius * math.cos(math.pi * k / half))
        for k in range(1, half)
    ]
    return [(0.0, radius), *points, (0.0, -radius)]


def _ring(center: Sequence[float], radius: float) -> np.ndarray:
    """Closed circle in the y-z plane, exactly symmetric about its centre's y."""
    cx, cy, cz = center
    right = [(cx, cy + dy, cz + dz) for dy, dz in _half_circle(radius)]
    left = [(cx, cy - dy, cz + dz) for dy, dz in reversed(_half_circle(radius)[1:-1])]
    return _line([*right, *left, right[0]])


def _fuselage(length: float, diameter: float) -> list[np.ndarray]:
    radius = diameter / 2.0
    nose, tail = NOSE_FRACTION * length, (1.0 - TAIL_FRACTION) * length
    lines = [_ring((nose, 0.0, 0.0), radius), _ring((tail, 0.0, 0.0), radius)]
    for dy, dz in [(0.0, radius), (radius, 0.0), (0.0, -radius)]:
        points = [(0.0, 0.0, 0.0), (nose, dy, dz), (tail, dy, dz), (length, 0.0, 0.0)]
        lines.append(_line(points))
    lines.append(_mirror(lines[3]))
    return lines


def _podded_stations(count: int, template: GeometryTemplate) -> list[float]:
    pairs = count // 2
    if template.stations is not None:
        if len(template.stations) != pairs:
            given = len(template.stations)
            msg = f"template gives {given} station(s) for {pairs} podded pair(s)"
            raise GeometryError(msg)
        return list(template.stations)
    return [0.8 * (i + 1) / (pairs + 1) for i in range(pairs)]


def _propulsor_centers(
    count: int,
    template: GeometryTemplate,
    wing: Planform,
    wing_apex: float,
    length: float,
    diameter: float,
    radius: float,
) -> list[tuple[float, float, float]]:
    """Marker centres, starboard/port pairs first, centreline last."""
    if count == 0:
        return []
    odd = count % 2 == 1
    if odd and count > 1 and not template.centerline:
        msg = (
            f"{count} propulsors cannot be placed symmetrically by '{template.placement}' "
            "without a centerline position; set centerline = true"
        )
        raise GeometryError(msg)

    centers: list[tuple[float, float, float]] = []
    if template.placement == "wing_podded":
        semi = wing.span / 2.0
        for station in _podded_stations(count, template):
            y = station * semi
            x = wing_apex + y * math.tan(template.wing_sweep) - radius
            centers += [(x, y, 0.0), (x, -y, 0.0)]
        if odd:
            centers.append((-radius, 0.0, 0.0))
    else:
        x = (1.0 - TAIL_FRACTION) * length
        y = diameter / 2.0 + 1.2 * radius
        for _ in range(count // 2):
            centers += [(x, y, 0.0), (x, -y, 0.0)]
            x -= 2.5 * radius
        if odd:
            centers.append((length, 0.0, 0.0))
    return centers


def build_wireframe(
    *,
    wing_area: float,
    aspect_ratio: float,
    mtow: float,
    sink_ids: Sequence[str],
    template: GeometryTemplate,
    db: HistoricalDatabase | None = None,
) -> Wireframe:
    """Build a wireframe from principal parameters.

    Args:
        wing_area: Wing reference area, m².
        aspect_ratio: Wing aspect ratio.
        mtow: Maximum takeoff mass, kg (fuselage length regression).
        sink_ids: One propulsor marker per id.
        template: Shape parameters.
        db: Database for the fuselage length power law; the fixed
            regression is used without one.

    Raises:
        GeometryError: Invalid dimensions, a placement rule incompatible with
            the sink count, or a non-finite coordinate.
    """
    wing = planform(wing_area, aspect_ratio, template.wing_taper)
    length = fuselage_length(mtow, db)
    diameter = length / template.fuselage_fineness
    wing_apex = template.wing_apex_fraction * length

    wing_outline = _wing_outline(wing, template.wing_sweep, (wing_apex, 0.0, 0.0))
    implied = wing.span**2 / shoelace_area(wing_outline)
    if abs(implied - aspect_ratio) > ASPECT_RATIO_TOLERANCE * aspect_ratio:
        msg = f"wing outline gives aspect ratio {implied!r}, expected {aspect_ratio!r}"
        raise GeometryError(msg)

    tail_arm = template.tail_arm_fraction * length
    wing_ac = wing_apex + 0.25 * wing.root_chord
    ht_area = template.horizontal_tail_volume * wing.mean_aerodynamic_chord * wing_area / tail_arm
    vt_area = template.vertical_tail_volume * wing.span * wing_area / tail_arm
    ht = planform(ht_area, template.horizontal_tail_aspect_ratio, template.horizontal_tail_taper)
    vt = planform(vt_area, template.vertical_tail_aspect_ratio, template.vertical_tail_taper)
    ht_apex = wing_ac + tail_arm - 0.25 * ht.root_chord
    vt_apex = wing_ac + tail_arm - 0.25 * vt.root_chord

    radius = template.propulsor_radius_fraction * wing.span
    centers = _propulsor_centers(
        len(sink_ids), template, wing, wing_apex, length, diameter, radius
    )
    parts: dict[str, list[np.ndarray]] = {
        "fuselage": _fuselage(length, diameter),
        "wing": [wing_outline],
        "horizontal_tail": [_wing_outline(ht, template.wing_sweep, (ht_apex, 0.0, 0.0))],
        "vertical_tail": [
            _wing_outline(
                vt, template.wing_sweep, (vt_apex, 0.0, diameter / 2.0), vertical=True
            )
        ],
    }
    for sink_id, center in zip(sink_ids, centers, strict=True):
        parts[f"propulsor:{sink_id}"] = [_ring(center, radius)]

    for name, lines in parts.items():
        if not all(np.all(np.isfinite(line)) for line in lines):
            msg = f"non-finite coordinate in part '{name}'"
            raise GeometryError(msg)

    dimensions = {
        "span": wing.span,
        "wing_area": wing_area,
        "aspect_ratio": aspect_ratio,
        "root_chord": wing.root_chord,
        "tip_chord": wing.tip_chord,
        "fuselage_length": length,
        "fuselage_diameter": diameter,
        "horizontal_tail_area": ht_area,
        "vertical_tail_area": vt_area,
        "height": diameter / 2.0 + vt.span,
    }
    return Wireframe(parts, dimensions)


def generate_geometry(
    sized: SizedAircraft,
    template: GeometryTemplate,
    *,
    spec: AircraftSpec | None = None,
    arch: PropArchitecture | None = None,
    db: HistoricalDatabase | None = None,
) -> Wireframe:
    """Wireframe of a sized aircraft.

    Args:
        sized: Converged aircraft (wing area and MTOW).
        template: Shape parameters.
        spec: Specification for the aspect ratio; the embedded one by default.
        arch: Architecture whose sinks get markers; the embedded one by default.
        db: Database for the fuselage length power law.

    Raises:
        GeometryError: See ``build_wireframe``.

    Example:
        >>> wf = generate_geometry(sized, GeometryTemplate())
        >>> sorted(wf.propulsor_positions())
        ['propulsor:prop_left', 'propulsor:prop_right']
    """
    spec = spec or sized.spec
    arch = arch or sized.build_architecture()
    return build_wireframe(
        wing_area=sized.wing_area,
        aspect_ratio=spec.aspect_ratio,
        mtow=sized.mtow,
        sink_ids=arch.sink_ids,
        template=template,
        db=db,
    )
