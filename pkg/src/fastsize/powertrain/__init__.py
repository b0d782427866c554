"""Propulsion architectures: graph model, power propagation and sizing.

Exported:
    - Component, OperationDefinition, OperationSplit, PropArchitecture
    - build_architecture, build_operation: validated construction
    - propagate_power, reconstruct_sink_outputs, size_components, PowerTable
    - parse/serialize/load helpers for architecture documents
    - check_compatibility: aircraft/architecture/mission agreement
"""

from .architecture import (
    SINK_KINDS,
    SOURCE_KINDS,
    TRANSMITTER_KINDS,
    Component,
    OperationDefinition,
    OperationSplit,
    PropArchitecture,
    build_architecture,
    build_operation,
    role_of,
)
from .compat import check_compatibility
from .documents import (
    architecture_from_document,
    architecture_to_document,
    load_architecture,
    parse_architecture,
    serialize_architecture,
)
from .flow import PowerTable, propagate_power, reconstruct_sink_outputs, size_components

__all__ = [
    "SINK_KINDS",
    "SOURCE_KINDS",
    "TRANSMITTER_KINDS",
    "Component",
    "OperationDefinition",
    "OperationSplit",
    "PowerTable",
    "PropArchitecture",
    "architecture_from_document",
    "architecture_to_document",
    "build_architecture",
    "build_operation",
    "check_compatibility",
    "load_architecture",
    "parse_architecture",
    "propagate_power",
    "reconstruct_sink_outputs",
    "role_of",
    "serialize_architecture",
    "size_components",
]
