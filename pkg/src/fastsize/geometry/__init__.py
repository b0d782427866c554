"""Parametric wireframe geometry of sized aircraft.

Exported:
    - GeometryTemplate, parse_template, load_template
    - Wireframe, build_wireframe, generate_geometry, planform, fuselage_length
    - export_wireframe, format_for_path, load_obj
"""

from .export import FORMATS, export_wireframe, format_for_path, load_obj
from .template import GeometryTemplate, load_template, parse_template
from .wireframe import (
    Planform,
    Wireframe,
    build_wireframe,
    fuselage_length,
    generate_geometry,
    planform,
    shoelace_area,
)

__all__ = [
    "FORMATS",
    "GeometryTemplate",
    "Planform",
    "Wireframe",
    "build_wireframe",
    "export_wireframe",
    "format_for_path",
    "fuselage_length",
    "generate_geometry",
    "load_obj",
    "load_template",
    "parse_template",
    "planform",
    "shoelace_area",
]
