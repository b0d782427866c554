"""Fixed-point aircraft sizing.

Exported:
    - size_aircraft, SizingOptions, SizedAircraft, SizingResult, IterationRecord
    - weight_buildup, energy_source_sizing: the two halves of one iteration
    - format_report, sized_to_json, load_sized, write_iterations_csv
"""

from .driver import (
    IterationRecord,
    SizedAircraft,
    SizingOptions,
    SizingResult,
    size_aircraft,
    stall_speed,
)
from .report import (
    format_report,
    iterations_to_csv,
    load_sized,
    sized_to_json,
    write_iterations_csv,
)
from .weights import (
    EnergySourceMasses,
    WeightBuildup,
    energy_source_sizing,
    takeoff_rating_powers,
    weight_buildup,
)

__all__ = [
    "EnergySourceMasses",
    "IterationRecord",
    "SizedAircraft",
    "SizingOptions",
    "SizingResult",
    "WeightBuildup",
    "energy_source_sizing",
    "format_report",
    "iterations_to_csv",
    "load_sized",
    "size_aircraft",
    "sized_to_json",
    "stall_speed",
    "takeoff_rating_powers",
    "weight_buildup",
    "write_iterations_csv",
]
