"""Wireframe export: SVG three-view drawing and OBJ polylines."""

from __future__ import annotations

from pathlib import Path
from typing import Literal

import numpy as np
import svgwrite

from ..exceptions import ExportError
from .wireframe import Wireframe

ExportFormat = Literal["svg_three_view", "obj"]
FORMATS: tuple[ExportFormat, ...] = ("svg_three_view", "obj")
SUFFIX_FORMATS: dict[str, ExportFormat] = {".svg": "svg_three_view", ".obj": "obj"}

VIEW_PX = 320.0
MARGIN_PX = 40.0
LABEL_PX = 36.0

# view name -> (horizontal axis, vertical axis, sign of the vertical axis on screen)
_VIEWS: dict[str, tuple[int, int, float]] = {
    "top": (0, 1, 1.0),
    "side": (0, 2, -1.0),
    "front": (1, 2, -1.0),
}


def _fmt(value: float) -> float:
    return round(float(value), 3)


def _project(
    points: np.ndarray, view: str, cx: float, cy: float, center: np.ndarray, scale: float
) -> list[tuple[float, float]]:
    h_axis, v_axis, v_sign = _VIEWS[view]
    xs = cx + (points[:, h_axis] - center[h_axis]) * scale
    ys = cy + v_sign * (points[:, v_axis] - center[v_axis]) * scale
    return [(_fmt(x), _fmt(y)) for x, y in zip(xs, ys, strict=True)]


def _svg_three_view(wf: Wireframe) -> bytes:
    low, high = wf.bounds()
    extent = float(np.max(high - low))
    if not extent > 0:
        msg = "wireframe has no extent to draw"
        raise ExportError(msg)
    scale = VIEW_PX / extent
    cell = VIEW_PX + 2 * MARGIN_PX
    width, height = cell * len(_VIEWS), cell + LABEL_PX
    center = (low + high) / 2.0

    dwg = svgwrite.Drawing(
        size=(f"{width:g}px", f"{height:g}px"), viewBox=f"0 0 {width:g} {height:g}"
    )
    dwg.add(dwg.rect(insert=(0, 0), size=(width, height), fill="white"))
    for column, view in enumerate(_VIEWS):
        cx = column * cell + cell / 2.0
        cy = LABEL_PX + cell / 2.0

        group = dwg.g(id=f"{view}_view", stroke="black", fill="none", stroke_width=0.8)
        for name, lines in wf.parts.items():
            part = dwg.g(class_=name.split(":", 1)[0])
            for line in lines:
                part.add(dwg.polyline(points=_project(line, view, cx, cy, center, scale)))
            group.add(part)
        group.add(
            dwg.text(
                view.upper(),
                insert=(_fmt(cx), _fmt(LABEL_PX * 0.6)),
                text_anchor="middle",
                font_size=14,
                font_family="sans-serif",
                stroke="none",
                fill="black",
            )
        )
        group.add(_dimension(dwg, view, wf, low, high, cx, cy, scale, center))
        dwg.add(group)
    return str(dwg.tostring()).encode("utf-8")


def _dimension(
    dwg: svgwrite.Drawing,
    view: str,
    wf: Wireframe,
    low: np.ndarray,
    high: np.ndarray,
    cx: float,
    cy: float,
    scale: float,
    center: np.ndarray,
) -> svgwrite.container.Group:
    """Dimension line with its label below the projection."""
    h_axis, v_axis, _ = _VIEWS[view]
    label = {"top": "span", "side": "length", "front": "span"}[view]
    value = wf.dimensions.get(
        "span" if label == "span" else "fuselage_length", float(high[h_axis] - low[h_axis])
    )
    half = value / 2.0 * scale
    baseline = cy + (high[v_axis] - center[v_axis]) * scale + 14.0
    group = dwg.g(class_="dimension", stroke="gray", stroke_width=0.6)
    start, end = (_fmt(cx - half), _fmt(baseline)), (_fmt(cx + half), _fmt(baseline))
    group.add(dwg.line(start=start, end=end))
    group.add(
        dwg.text(
            f"{label} {value:.2f} m",
            insert=(_fmt(cx), _fmt(baseline + 14.0)),
            text_anchor="middle",
            font_size=11,
            font_family="sans-serif",
            stroke="none",
            fill="gray",
        )
    )
    return group


def _obj(wf: Wireframe) -> bytes:
    out = ["# fastsize wireframe"]
    offset = 0
    for name, lines in wf.parts.items():
        out.append(f"o {name}")
        for line in lines:
            out.extend(f"v {x:.9f} {y:.9f} {z:.9f}" for x, y, z in line)
            indices = range(offset + 1, offset + len(line) + 1)
            out.append("l " + " ".join(str(i) for i in indices))
            offset += len(line)
    return ("\n".join(out) + "\n").encode("utf-8")


def export_wireframe(wf: Wireframe, fmt: str) -> bytes:
    """Render a wireframe.

    Args:
        wf: Wireframe.
        fmt: ``svg_three_view`` (top, side and front views at one shared
            scale, with dimension annotations) or ``obj`` (polylines as OBJ
            line elements).

    Returns:
        File content.

    Raises:
        ExportError: Unsupported format, or nothing to draw.
    """
    if fmt == "svg_three_view":
        return _svg_three_view(wf)
    if fmt == "obj":
        return _obj(wf)
    msg = f"unsupported export format '{fmt}' (expected one of {', '.join(FORMATS)})"
    raise ExportError(msg)


def format_for_path(path: Path | str) -> ExportFormat:
    """Export format implied by a file suffix.

    Raises:
        ExportError: Unknown suffix.
    """
    suffix = Path(path).suffix.lower()
    try:
        return SUFFIX_FORMATS[suffix]
    except KeyError:
        msg = f"cannot infer an export format from '{suffix or path}' (use .svg or .obj)"
        raise ExportError(msg) from None


def load_obj(data: bytes) -> Wireframe:
    """Re-import OBJ output as a wireframe (dimensions are not restored).

    Raises:
        ExportError: Malformed content.
    """
    vertices: list[tuple[float, float, float]] = []
    parts: dict[str, list[np.ndarray]] = {}
    current = "default"
    for number, raw in enumerate(data.decode("utf-8").splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        try:
            if tokens[0] == "o":
                current = " ".join(tokens[1:])
                parts.setdefault(current, [])
            elif tokens[0] == "v":
                x, y, z = (float(t) for t in tokens[1:4])
                vertices.append((x, y, z))
            elif tokens[0] == "l":
                indices = [int(t) - 1 for t in tokens[1:]]
                if min(indices) < 0:
                    raise IndexError(min(indices))
                parts.setdefault(current, []).append(np.array([vertices[i] for i in indices]))
        except (ValueError, IndexError) as e:
            msg = f"malformed OBJ at line {number}: {raw.strip()!r}"
            raise ExportError(msg) from e
    return Wireframe(parts)
