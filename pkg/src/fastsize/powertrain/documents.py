"""Architecture documents.

An architecture document lists components, edges and named operations::

    schema_version = 1
    id = "conventional_twin"
    edges = [["fuel", "gt_left"], ["gt_left", "prop_left"]]

    [[components]]
    id = "gt_left"
    kind = "gas_turbine"
    specific_power = "4 kW/kg"

    [operations.cruise.splits]
    gearbox = { gt = 0.7, motor = 0.3 }

Gas-turbine efficiency and specific power may be left out; the regression
step fills them.
"""

from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path
from typing import Any

import tomli_w

from ..exceptions import DocumentParseError
from ..models.parsing import SCHEMA_VERSION, Document, build_model, quantity, read_text
from ..units import Dimension
from .architecture import Component, OperationDefinition, PropArchitecture, build_architecture

_COMPONENT_KEYS = ("id", "kind", "efficiency", "specific_power")
_OPERATION_KEYS = ("splits", "inactive", "thrust_shares")


def parse_architecture(document: str) -> PropArchitecture:
    """Parse an architecture document.

    Raises:
        DocumentParseError: Malformed document, unknown key or bad edge entry.
        UnitError: A quantity carries an unknown or incompatible unit.
        ConstraintError: A component field violates its constraints.
        ArchitectureError: The graph violates an architecture invariant.
        PowerFlowError: An operation split is invalid.
    """
    doc = Document(document, "architecture")
    data = doc.data
    doc.reject_unknown(data, ("id", "components", "edges", "operations"), "")
    architecture_id = doc.require(data, "id", "")

    components = []
    for index, table in enumerate(doc.tables(data, "components", "")):
        where = f"components[{index}]"
        doc.reject_unknown(table, _COMPONENT_KEYS, where)
        fields: dict[str, Any] = {key: table[key] for key in ("id", "kind") if key in table}
        efficiency = quantity(table, "efficiency", Dimension.DIMENSIONLESS, where)
        if efficiency is not None:
            fields["efficiency"] = efficiency
        specific_power = quantity(table, "specific_power", Dimension.SPECIFIC_POWER, where)
        if specific_power is not None:
            fields["specific_power"] = specific_power
        components.append(build_model(Component, fields, where))

    edges: list[tuple[str, str]] = []
    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        msg = "'edges' must be an array of [from, to] pairs"
        raise DocumentParseError(msg, key="edges", line=doc.line_of("edges"))
    for index, edge in enumerate(raw_edges):
        if (
            not isinstance(edge, list)
            or len(edge) != 2
            or not all(isinstance(end, str) for end in edge)
        ):
            msg = f"edges[{index}] must be a [from, to] pair of component ids, got {edge!r}"
            raise DocumentParseError(msg, key=f"edges[{index}]", line=doc.line_of("edges"))
        edges.append((edge[0], edge[1]))

    operations = []
    for operation_id, table in doc.table(data, "operations", "").items():
        where = f"operations.{operation_id}"
        if not isinstance(table, dict):
            msg = f"'{where}' must be a table"
            raise DocumentParseError(msg, key=where, line=doc.line_of(operation_id))
        doc.reject_unknown(table, _OPERATION_KEYS, where)
        operations.append(
            build_model(OperationDefinition, {"id": operation_id, **table}, where)
        )

    return build_architecture(str(architecture_id), components, edges, operations)


def architecture_to_document(arch: PropArchitecture) -> dict[str, Any]:
    """Return the normalized document content of an architecture (SI numbers)."""
    operations: dict[str, Any] = {}
    for definition in arch.definitions:
        table: dict[str, Any] = {}
        if definition.splits:
            table["splits"] = {down: dict(row) for down, row in definition.splits.items()}
        if definition.inactive:
            table["inactive"] = list(definition.inactive)
        if definition.thrust_shares:
            table["thrust_shares"] = dict(definition.thrust_shares)
        operations[definition.id] = table
    return {
        "schema_version": SCHEMA_VERSION,
        "id": arch.id,
        "components": [c.model_dump(exclude_none=True) for c in arch.components],
        "edges": [list(edge) for edge in arch.edges],
        "operations": operations,
    }


def architecture_from_document(data: Mapping[str, Any]) -> PropArchitecture:
    """Rebuild an architecture from decoded document content (e.g. embedded JSON)."""
    return parse_architecture(tomli_w.dumps(dict(data)))


def serialize_architecture(arch: PropArchitecture) -> str:
    """Write an architecture as a normalized TOML document."""
    return tomli_w.dumps(architecture_to_document(arch))


def load_architecture(path: Path | str) -> PropArchitecture:
    """Read and parse an architecture document file."""
    return parse_architecture(read_text(path))
