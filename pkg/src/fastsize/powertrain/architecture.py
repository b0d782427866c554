"""Propulsion architectures as directed graphs.

An architecture is a set of components (energy sources, transmitters, sinks)
connected by power-carrying edges. Two matrices describe it:

- the connection matrix ``B`` (n×n, boolean), ``B[i][j]`` meaning component
  ``i`` feeds component ``j``;
- one split matrix ``Λ`` per named operation (n×n, real, same sparsity as
  ``Bᵀ``), ``Λ[j][i]`` being the fraction of component ``j``'s input demand
  pulled from upstream component ``i``.

The topological order is computed once with Kahn's algorithm, breaking ties by
component id so that the order (and every sweep that follows it) does not
depend on how the components were listed.

Example:
    >>> arch = build_architecture(
    ...     "chain",
    ...     [
    ...         Component(id="fuel", kind="jet_fuel"),
    ...         Component(id="gt", kind="gas_turbine", efficiency=0.35, specific_power=3000.0),
    ...         Component(id="prop", kind="propeller", efficiency=0.8, specific_power=8000.0),
    ...     ],
    ...     [("fuel", "gt"), ("gt", "prop")],
    ... )
    >>> [c.id for c in arch.ordered_components()]
    ['fuel', 'gt', 'prop']
"""

from __future__ import annotations

import heapq
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..exceptions import ArchitectureError, CycleError, PowerFlowError

logger = logging.getLogger(__name__)

ComponentKind = Literal[
    "jet_fuel",
    "hydrogen",
    "battery",
    "gas_turbine",
    "electric_motor",
    "generator",
    "gearbox",
    "electrical_bus",
    "fuel_cell",
    "propeller",
    "fan",
]
Role = Literal["source", "transmitter", "sink"]

SOURCE_KINDS = frozenset({"jet_fuel", "hydrogen", "battery"})
TRANSMITTER_KINDS = frozenset(
    {"gas_turbine", "electric_motor", "generator", "gearbox", "electrical_bus", "fuel_cell"}
)
SINK_KINDS = frozenset({"propeller", "fan"})

OUTPUT_RATED_KINDS = frozenset({"gas_turbine", "fuel_cell"})
"""Transmitters sized on the power they deliver rather than the power they take in."""

SPLIT_TOLERANCE = 1e-12


def role_of(kind: str) -> Role:
    """Return the graph role implied by a component kind."""
    if kind in SOURCE_KINDS:
        return "source"
    if kind in SINK_KINDS:
        return "sink"
    return "transmitter"


class Component(BaseModel):
    """One node of a propulsion architecture.

    Attributes:
        id: Unique component id.
        kind: Concrete component type; the graph role follows from it.
        efficiency: Output power over input power. Sinks fold propulsive
            efficiency in here. Sources carry none.
        specific_power: Rated power per unit mass, W/kg. Sources carry none.
    """

    id: str = Field(..., min_length=1, description="Component id")
    kind: ComponentKind = Field(..., description="Component type")
    efficiency: float | None = Field(None, gt=0, le=1, description="Output/input power")
    specific_power: float | None = Field(None, gt=0, description="Specific power, W/kg")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _sources_carry_no_conversion(self) -> Component:
        if self.role == "source" and (
            self.efficiency is not None or self.specific_power is not None
        ):
            msg = (
                f"source '{self.id}' cannot carry efficiency or specific_power; conversion "
                "losses belong to the transmitter drawing from it"
            )
            raise ValueError(msg)
        return self

    @property
    def role(self) -> Role:
        """Graph role: source, transmitter or sink."""
        return role_of(self.kind)

    @property
    def rated_on_output(self) -> bool:
        """Whether sizing uses output power (else input power)."""
        return self.role == "sink" or self.kind in OUTPUT_RATED_KINDS


class OperationDefinition(BaseModel):
    """Operation split as written in an architecture document.

    Attributes:
        id: Operation id referenced by mission segments.
        splits: Downstream component id -> upstream component id -> fraction.
            A non-source with a single feeder may be omitted (fraction 1).
        inactive: Components switched off in this operation.
        thrust_shares: Fraction of total propulsive power per active sink;
            equal shares when empty.
    """

    id: str = Field(..., min_length=1, description="Operation id")
    splits: dict[str, dict[str, float]] = Field(default_factory=dict, description="Λ rows")
    inactive: tuple[str, ...] = Field(default=(), description="Switched-off components")
    thrust_shares: dict[str, float] = Field(
        default_factory=dict, description="Propulsive power share per sink"
    )

    model_config = ConfigDict(frozen=True, extra="forbid")


@dataclass(frozen=True, eq=False)
class OperationSplit:
    """Resolved operation split of one architecture.

    Attributes:
        id: Operation id.
        split_matrix: Λ, read-only n×n array indexed like the architecture.
        feeders: Per component index, ``(upstream index, fraction)`` pairs with
            non-zero fraction, sorted by upstream id.
        thrust_shares: Propulsive power share per active sink id.
    """

    id: str
    split_matrix: np.ndarray
    feeders: tuple[tuple[tuple[int, float], ...], ...]
    thrust_shares: Mapping[str, float]

    @classmethod
    def from_matrix(
        cls,
        arch: PropArchitecture,
        operation_id: str,
        split_matrix: Sequence[Sequence[float]] | np.ndarray,
        thrust_shares: Mapping[str, float] | None = None,
    ) -> OperationSplit:
        """Wrap a raw split matrix without validating it.

        ``propagate_power`` still checks row sums of active components, so
        this is the way to hand it an arbitrary matrix.
        """
        matrix = np.array(split_matrix, dtype=float)
        n = len(arch.components)
        if matrix.shape != (n, n):
            msg = f"operation '{operation_id}': split matrix must be {n}x{n}, got {matrix.shape}"
            raise PowerFlowError(msg)
        matrix.setflags(write=False)
        feeders = tuple(
            tuple(
                (i, float(matrix[j, i]))
                for i in sorted(range(n), key=lambda k: arch.components[k].id)
                if matrix[j, i] != 0.0
            )
            for j in range(n)
        )
        sinks = [c.id for j, c in enumerate(arch.components) if c.role == "sink" and feeders[j]]
        shares = dict(thrust_shares) if thrust_shares else {s: 1.0 / len(sinks) for s in sinks}
        return cls(operation_id, matrix, feeders, MappingProxyType(shares))

    def is_active(self, index: int) -> bool:
        """Whether the non-source component at ``index`` pulls power."""
        return bool(self.feeders[index])

    def row_sum(self, index: int) -> float:
        """Sum of the split row of component ``index``, in upstream-id order."""
        return math.fsum(fraction for _, fraction in self.feeders[index])


@dataclass(frozen=True, eq=False)
class PropArchitecture:
    """Validated propulsion architecture.

    Build with ``build_architecture``; instances are immutable and safe to
    share between threads.

    Attributes:
        id: Architecture id referenced by aircraft specifications.
        components: Components in document order.
        edges: ``(from id, to id)`` pairs in document order.
        connection_matrix: B, read-only boolean n×n array.
        order: Component indices in canonical topological order.
        operations: Resolved operation splits by id.
        definitions: Operation definitions as given, for re-serialization.
    """

    id: str
    components: tuple[Component, ...]
    edges: tuple[tuple[str, str], ...]
    connection_matrix: np.ndarray
    order: tuple[int, ...]
    operations: Mapping[str, OperationSplit] = field(default_factory=dict)
    definitions: tuple[OperationDefinition, ...] = ()
    index: Mapping[str, int] = field(default_factory=dict)

    def component(self, component_id: str) -> Component:
        """Return a component by id.

        Raises:
            ArchitectureError: Unknown id.
        """
        try:
            return self.components[self.index[component_id]]
        except KeyError:
            msg = f"architecture '{self.id}' has no component '{component_id}'"
            raise ArchitectureError(msg) from None

    def ordered_components(self) -> list[Component]:
        """Components in topological order."""
        return [self.components[i] for i in self.order]

    def ids_with_role(self, role: Role) -> list[str]:
        """Ids of components with the given role, in document order."""
        return [c.id for c in self.components if c.role == role]

    @property
    def source_ids(self) -> list[str]:
        """Energy source ids in document order."""
        return self.ids_with_role("source")

    @property
    def sink_ids(self) -> list[str]:
        """Sink ids in document order."""
        return self.ids_with_role("sink")

    def upstream(self, component_id: str) -> list[str]:
        """Ids feeding ``component_id``."""
        j = self.index[component_id]
        return [c.id for i, c in enumerate(self.components) if self.connection_matrix[i, j]]

    def downstream(self, component_id: str) -> list[str]:
        """Ids fed by ``component_id``."""
        i = self.index[component_id]
        return [c.id for j, c in enumerate(self.components) if self.connection_matrix[i, j]]

    def connected_subgraphs(self) -> list[list[str]]:
        """Group component ids into powertrains that share no edge.

        Groups are ordered by their first component in document order; ids
        within a group keep document order.
        """
        _, labels = connected_components(
            csr_matrix(self.connection_matrix.astype(np.int8)), directed=True, connection="weak"
        )
        groups: dict[int, list[str]] = {}
        for component, label in zip(self.components, labels, strict=True):
            groups.setdefault(int(label), []).append(component.id)
        return list(groups.values())

    def operation(self, operation_id: str) -> OperationSplit:
        """Return an operation split by id.

        Raises:
            ArchitectureError: Unknown operation.
        """
        try:
            return self.operations[operation_id]
        except KeyError:
            known = ", ".join(sorted(self.operations)) or "none"
            msg = f"architecture '{self.id}' has no operation '{operation_id}' (known: {known})"
            raise ArchitectureError(msg) from None

    def with_component_updates(
        self, updates: Mapping[str, Mapping[str, float]]
    ) -> PropArchitecture:
        """Return a rebuilt architecture with some component fields replaced.

        Args:
            updates: Component id -> field name -> new value.
        """
        components = [
            c.model_copy(update=dict(updates[c.id])) if c.id in updates else c
            for c in self.components
        ]
        components = [Component.model_validate(c.model_dump()) for c in components]
        return build_architecture(self.id, components, self.edges, self.definitions)


def _topological_order(ids: Sequence[str], matrix: np.ndarray) -> tuple[list[int], list[int]]:
    """Kahn's algorithm with id-ordered tie breaking.

    Returns:
        The order found and the indices left over (non-empty on a cycle).
    """
    n = len(ids)
    in_degree = [int(matrix[:, j].sum()) for j in range(n)]
    ready = [(ids[j], j) for j in range(n) if in_degree[j] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        _, i = heapq.heappop(ready)
        order.append(i)
        for j in range(n):
            if matrix[i, j]:
                in_degree[j] -= 1
                if in_degree[j] == 0:
                    heapq.heappush(ready, (ids[j], j))
    placed = set(order)
    return order, [j for j in range(n) if j not in placed]


def _find_cycle(ids: Sequence[str], matrix: np.ndarray, remaining: Iterable[int]) -> list[str]:
    """Return one cycle among ``remaining`` nodes, first id repeated at the end."""
    pool = sorted(remaining, key=lambda k: ids[k])
    members = set(pool)
    # Every leftover node has a leftover predecessor; walking predecessors must revisit one.
    node = pool[0]
    path: list[int] = []
    seen: dict[int, int] = {}
    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        node = next(i for i in pool if matrix[i, node] and i in members)
    cycle = path[seen[node] :][::-1]
    return [ids[k] for k in cycle] + [ids[cycle[0]]]


def build_operation(
    arch: PropArchitecture, definition: OperationDefinition
) -> OperationSplit:
    """Resolve an operation definition against an architecture.

    Raises:
        PowerFlowError: Unknown ids, fractions on missing edges, negative
            fractions, rows not summing to one, ambiguous defaults, an active
            component pulling from an inactive one, or bad thrust shares.
    """
    op = definition.id
    n = len(arch.components)
    matrix = np.zeros((n, n))
    inactive = set(definition.inactive)

    for component_id in inactive:
        if component_id not in arch.index:
            msg = f"operation '{op}': unknown inactive component '{component_id}'"
            raise PowerFlowError(msg)

    for downstream_id, row in definition.splits.items():
        if downstream_id not in arch.index:
            msg = f"operation '{op}': unknown component '{downstream_id}'"
            raise PowerFlowError(msg)
        j = arch.index[downstream_id]
        if arch.components[j].role == "source":
            msg = f"operation '{op}': source '{downstream_id}' cannot have a split row"
            raise PowerFlowError(msg)
        if downstream_id in inactive and any(row.values()):
            msg = f"operation '{op}': inactive component '{downstream_id}' has non-zero splits"
            raise PowerFlowError(msg)
        for upstream_id, fraction in row.items():
            i = arch.index.get(upstream_id)
            if i is None or not arch.connection_matrix[i, j]:
                msg = f"operation '{op}': no edge {upstream_id} -> {downstream_id}"
                raise PowerFlowError(msg)
            if not math.isfinite(fraction) or fraction < 0:
                msg = f"operation '{op}': fraction {upstream_id} -> {downstream_id} is {fraction}"
                raise PowerFlowError(msg)
            matrix[j, i] = fraction

    for j, component in enumerate(arch.components):
        if component.role == "source" or component.id in inactive:
            continue
        if component.id not in definition.splits:
            feeders = arch.upstream(component.id)
            if len(feeders) != 1:
                msg = (
                    f"operation '{op}': component '{component.id}' has {len(feeders)} feeders "
                    "and no split row"
                )
                raise PowerFlowError(msg)
            matrix[j, arch.index[feeders[0]]] = 1.0
            continue
        total = math.fsum(matrix[j])
        if total != 0.0 and abs(total - 1.0) > SPLIT_TOLERANCE:
            msg = f"operation '{op}': split row of '{component.id}' sums to {total!r}, not 1"
            raise PowerFlowError(msg)

    for j, component in enumerate(arch.components):
        if not matrix[j].any():
            continue
        for i in np.flatnonzero(matrix[j]):
            upstream = arch.components[int(i)]
            if upstream.role != "source" and not matrix[int(i)].any():
                msg = (
                    f"operation '{op}': active '{component.id}' pulls from inactive "
                    f"'{upstream.id}'"
                )
                raise PowerFlowError(msg)

    active_sinks = [
        c.id for j, c in enumerate(arch.components) if c.role == "sink" and matrix[j].any()
    ]
    shares = dict(definition.thrust_shares)
    if shares:
        unknown = sorted(set(shares) - set(active_sinks))
        if unknown:
            msg = f"operation '{op}': thrust shares for inactive or unknown sinks {unknown}"
            raise PowerFlowError(msg)
        missing = sorted(set(active_sinks) - set(shares))
        if missing:
            msg = f"operation '{op}': active sinks without thrust share {missing}"
            raise PowerFlowError(msg)
        total = math.fsum(shares.values())
        if any(share < 0 for share in shares.values()) or abs(total - 1.0) > 1e-9:
            msg = f"operation '{op}': thrust shares must be >= 0 and sum to 1, got {total!r}"
            raise PowerFlowError(msg)
    elif active_sinks:
        shares = {sink: 1.0 / len(active_sinks) for sink in active_sinks}

    return OperationSplit.from_matrix(arch, op, matrix, shares)


def build_architecture(
    architecture_id: str,
    components: Sequence[Component],
    edges: Iterable[tuple[str, str]],
    operations: Iterable[OperationDefinition] = (),
) -> PropArchitecture:
    """Assemble and validate a propulsion architecture.

    Args:
        architecture_id: Id referenced by aircraft specifications.
        components: Components with unique ids.
        edges: ``(from id, to id)`` power connections.
        operations: Operation definitions to resolve.

    Returns:
        The validated architecture with its topological order cached.

    Raises:
        ArchitectureError: Duplicate ids, unknown edge endpoints, a source with
            an inbound edge, a sink with an outbound edge, a non-source without
            feeders or a sink no source reaches.
        CycleError: The graph has a cycle; the error lists its nodes.
        PowerFlowError: An operation definition is invalid.
    """
    components = tuple(components)
    edges = tuple((str(a), str(b)) for a, b in edges)
    ids = [c.id for c in components]
    index: dict[str, int] = {}
    for i, component_id in enumerate(ids):
        if component_id in index:
            msg = f"architecture '{architecture_id}': duplicate component id '{component_id}'"
            raise ArchitectureError(msg)
        index[component_id] = i

    n = len(components)
    matrix = np.zeros((n, n), dtype=bool)
    for start, end in edges:
        for endpoint in (start, end):
            if endpoint not in index:
                msg = (
                    f"architecture '{architecture_id}': edge {start} -> {end} "
                    f"references unknown '{endpoint}'"
                )
                raise ArchitectureError(msg)
        i, j = index[start], index[end]
        if matrix[i, j]:
            msg = f"architecture '{architecture_id}': duplicate edge {start} -> {end}"
            raise ArchitectureError(msg)
        matrix[i, j] = True

    for start, end in edges:
        if components[index[end]].role == "source":
            msg = (
                f"architecture '{architecture_id}': source '{end}' has inbound edge "
                f"from '{start}'"
            )
            raise ArchitectureError(msg)
        if components[index[start]].role == "sink":
            msg = f"architecture '{architecture_id}': sink '{start}' has outbound edge to '{end}'"
            raise ArchitectureError(msg)

    order, leftover = _topological_order(ids, matrix)
    if leftover:
        cycle = _find_cycle(ids, matrix, leftover)
        msg = f"architecture '{architecture_id}': cycle {' -> '.join(cycle)}"
        raise CycleError(msg, cycle)

    reachable = set()
    for i in order:
        if components[i].role == "source" or any(matrix[k, i] and k in reachable for k in range(n)):
            reachable.add(i)
    for j, component in enumerate(components):
        if component.role == "sink" and j not in reachable:
            msg = (
                f"architecture '{architecture_id}': sink '{component.id}' is not reachable "
                "from any source"
            )
            raise ArchitectureError(msg)
    for j, component in enumerate(components):
        if component.role != "source" and not matrix[:, j].any():
            msg = f"architecture '{architecture_id}': '{component.id}' has no inbound edge"
            raise ArchitectureError(msg)
        if component.role == "transmitter" and not matrix[j].any():
            logger.warning(
                "architecture '%s': transmitter '%s' feeds nothing", architecture_id, component.id
            )
    if not any(c.role == "sink" for c in components):
        msg = f"architecture '{architecture_id}' has no sink"
        raise ArchitectureError(msg)

    matrix.setflags(write=False)
    definitions = tuple(operations)
    arch = PropArchitecture(
        id=architecture_id,
        components=components,
        edges=edges,
        connection_matrix=matrix,
        order=tuple(order),
        definitions=definitions,
        index=MappingProxyType(index),
    )
    resolved: dict[str, OperationSplit] = {}
    for definition in definitions:
        if definition.id in resolved:
            msg = f"architecture '{architecture_id}': duplicate operation '{definition.id}'"
            raise ArchitectureError(msg)
        resolved[definition.id] = build_operation(arch, definition)
    object.__setattr__(arch, "operations", MappingProxyType(resolved))
    return arch
