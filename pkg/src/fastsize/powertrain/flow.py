"""Power propagation and component sizing.

Mission analysis produces the power each sink must deliver. ``propagate_power``
pulls that demand back through the graph in reverse topological order: every
component asks for ``output / efficiency`` at its input and spreads that
request over its feeders according to its split row. Source draws fall out at
the end of the sweep.

The sweep uses plain Python floats in a fixed order, so identical inputs give
bit-identical tables regardless of how the components were listed.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

from ..exceptions import ArchitectureError, PowerFlowError
from .architecture import SPLIT_TOLERANCE, OperationSplit, PropArchitecture


@dataclass(frozen=True)
class PowerTable:
    """Powers of every component at one flight instant, W.

    Attributes:
        output: Power delivered by each component (a source's output is its draw).
        input: Power taken in by each transmitter and sink (0 for sources).
        draw: Power drawn from each energy source.
    """

    output: Mapping[str, float]
    input: Mapping[str, float]
    draw: Mapping[str, float]

    def rating_power(self, arch: PropArchitecture, component_id: str) -> float:
        """Power a component is sized on (draw for sources)."""
        component = arch.component(component_id)
        if component.role == "source":
            return self.draw[component_id]
        return self.output[component_id] if component.rated_on_output else self.input[component_id]

    def rating_powers(self, arch: PropArchitecture) -> dict[str, float]:
        """Rating power of every component, in document order."""
        return {c.id: self.rating_power(arch, c.id) for c in arch.components}


def _check_demands(
    arch: PropArchitecture, op: OperationSplit, sink_demands: Mapping[str, float]
) -> None:
    for sink_id, demand in sink_demands.items():
        if sink_id not in arch.index or arch.component(sink_id).role != "sink":
            msg = f"demand on '{sink_id}', which is not a sink of '{arch.id}'"
            raise PowerFlowError(msg)
        if not math.isfinite(demand) or demand < 0:
            msg = f"demand on sink '{sink_id}' must be finite and >= 0, got {demand!r}"
            raise PowerFlowError(msg)
        if demand > 0 and not op.is_active(arch.index[sink_id]):
            msg = f"demand of {demand:g} W on sink '{sink_id}', inactive in operation '{op.id}'"
            raise PowerFlowError(msg)


def propagate_power(
    arch: PropArchitecture, op: OperationSplit, sink_demands: Mapping[str, float]
) -> PowerTable:
    """Pull sink demands back to the energy sources.

    Args:
        arch: Architecture.
        op: Operation split in force.
        sink_demands: Required output power per sink, W; missing sinks demand 0.

    Returns:
        Output, input and draw of every component.

    Raises:
        PowerFlowError: Negative or non-finite demand, demand on an inactive
            sink, an active split row not summing to one, demand reaching a
            component with no split row, or an unknown efficiency.

    Example:
        >>> table = propagate_power(chain, chain.operation("cruise"), {"prop": 1.0e6})
        >>> round(table.draw["pack"])
        1315789
    """
    _check_demands(arch, op, sink_demands)
    n = len(arch.components)
    for j in range(n):
        if arch.components[j].role != "source" and op.is_active(j):
            total = op.row_sum(j)
            if abs(total - 1.0) > SPLIT_TOLERANCE:
                msg = (
                    f"operation '{op.id}': split row of '{arch.components[j].id}' "
                    f"sums to {total!r}, not 1"
                )
                raise PowerFlowError(msg)

    output = [0.0] * n
    inputs = [0.0] * n
    for sink_id, demand in sink_demands.items():
        output[arch.index[sink_id]] = float(demand)

    for j in reversed(arch.order):
        component = arch.components[j]
        if component.role == "source" or output[j] == 0.0:
            continue
        if not op.is_active(j):
            msg = f"'{component.id}' receives demand but is inactive in operation '{op.id}'"
            raise PowerFlowError(msg)
        if component.efficiency is None:
            msg = f"efficiency of '{component.id}' is unknown; fill it before propagating power"
            raise PowerFlowError(msg)
        inputs[j] = output[j] / component.efficiency
        for i, fraction in op.feeders[j]:
            output[i] += fraction * inputs[j]

    ids = [c.id for c in arch.components]
    return PowerTable(
        output=dict(zip(ids, output, strict=True)),
        input=dict(zip(ids, inputs, strict=True)),
        draw={ids[i]: output[i] for i in range(n) if arch.components[i].role == "source"},
    )


def reconstruct_sink_outputs(
    arch: PropArchitecture, op: OperationSplit, table: PowerTable
) -> dict[str, float]:
    """Push source draws forward and return the power each sink delivers.

    Each component's output is routed to its consumers in proportion to what
    they pulled from it (``Λ[j][i]·input_j``). Only the source draws carry
    power into the sweep, so agreement with the original demands checks
    conservation along every path.

    Args:
        arch: Architecture.
        op: Operation split the table was propagated with.
        table: Table returned by ``propagate_power``.

    Returns:
        Reconstructed output power per sink, W.
    """
    n = len(arch.components)
    ids = [c.id for c in arch.components]
    pulled = [[0.0] * n for _ in range(n)]  # pulled[i][j]: power j asked of i
    for j in range(n):
        for i, fraction in op.feeders[j]:
            pulled[i][j] = fraction * table.input[ids[j]]

    received = [0.0] * n
    forward = [0.0] * n
    for i in arch.order:
        component = arch.components[i]
        if component.role == "source":
            forward[i] = table.draw[ids[i]]
        elif received[i] > 0.0:
            assert component.efficiency is not None  # noqa: S101
            forward[i] = received[i] * component.efficiency
        asked = math.fsum(pulled[i])
        if asked > 0.0:
            for j in range(n):
                if pulled[i][j] > 0.0:
                    received[j] += forward[i] * pulled[i][j] / asked
    return {ids[j]: forward[j] for j in range(n) if arch.components[j].role == "sink"}


def size_components(arch: PropArchitecture, peak_power: Mapping[str, float]) -> dict[str, float]:
    """Size transmitters and sinks on their peak rating power.

    Args:
        arch: Architecture.
        peak_power: Maximum rating power per component over the mission, W.
            Components not listed count as never active.

    Returns:
        Mass per transmitter and sink, kg, in document order. Sources are
        sized by the energy-source step, not here.

    Raises:
        ArchitectureError: A component with non-zero peak power has no
            specific power.

    Example:
        >>> size_components(arch, {"motor": 1.0e6})["motor"]
        200.0
    """
    masses: dict[str, float] = {}
    for component in arch.components:
        if component.role == "source":
            continue
        peak = peak_power.get(component.id, 0.0)
        if peak <= 0.0:
            masses[component.id] = 0.0
            continue
        if component.specific_power is None:
            msg = f"'{component.id}' has peak power {peak:g} W but no specific_power"
            raise ArchitectureError(msg)
        masses[component.id] = peak / component.specific_power
    return masses
