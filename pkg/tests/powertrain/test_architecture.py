"""Tests for propulsion architecture construction.

Tests graph handling including:
- Canonical topological order
- Structural invariants (duplicates, orientation, reachability, cycles)
- Operation split resolution and defaults
"""

import numpy as np
import pytest
from pydantic import ValidationError

from fastsize.exceptions import ArchitectureError, CycleError, PowerFlowError
from fastsize.powertrain import (
    Component,
    OperationDefinition,
    PropArchitecture,
    build_architecture,
    build_operation,
)

FUEL = Component(id="fuel", kind="jet_fuel")
TURBINE = Component(id="gt", kind="gas_turbine", efficiency=0.35, specific_power=5.0e3)
PROP = Component(id="prop", kind="propeller", efficiency=0.8, specific_power=8.0e3)


class TestComponent:
    """Tests for Component."""

    @pytest.mark.unit
    @pytest.mark.parametrize(
        ("kind", "role"),
        [
            ("jet_fuel", "source"),
            ("battery", "source"),
            ("gearbox", "transmitter"),
            ("fan", "sink"),
        ],
    )
    def test_role_from_kind(self, kind: str, role: str) -> None:
        """Test the graph role follows the kind."""
        # Act
        component = Component(id="c", kind=kind)  # type: ignore[arg-type]

        # Assert
        assert component.role == role

    @pytest.mark.unit
    def test_source_carries_no_efficiency(self) -> None:
        """Test a source with an efficiency is rejected."""
        # Act / Assert
        with pytest.raises(ValidationError, match="cannot carry efficiency"):
            Component(id="fuel", kind="jet_fuel", efficiency=0.9)

    @pytest.mark.unit
    def test_rating_side(self) -> None:
        """Test turbines and sinks are rated on output, motors on input."""
        # Arrange
        motor = Component(id="m", kind="electric_motor")

        # Act / Assert
        assert TURBINE.rated_on_output
        assert PROP.rated_on_output
        assert not motor.rated_on_output


class TestBuildArchitecture:
    """Tests for build_architecture."""

    @pytest.mark.unit
    def test_order_independent_of_listing(self, hybrid_arch: PropArchitecture) -> None:
        """Test the canonical order does not depend on document order."""
        # Arrange
        shuffled = build_architecture(
            "hybrid",
            list(reversed(hybrid_arch.components)),
            list(reversed(hybrid_arch.edges)),
        )

        # Act
        first = [c.id for c in hybrid_arch.ordered_components()]
        second = [c.id for c in shuffled.ordered_components()]

        # Assert
        assert first == second == ["fuel", "gt", "pack", "motor", "gearbox", "prop"]

    @pytest.mark.unit
    def test_connection_matrix(self, turboprop_chain: PropArchitecture) -> None:
        """Test the connection matrix marks each edge."""
        # Act
        matrix = turboprop_chain.connection_matrix

        # Assert
        assert matrix.dtype == bool
        assert matrix.sum() == 2
        assert matrix[turboprop_chain.index["fuel"], turboprop_chain.index["gt"]]
        assert turboprop_chain.upstream("prop") == ["gt"]
        assert turboprop_chain.downstream("fuel") == ["gt"]

    @pytest.mark.unit
    def test_duplicate_id(self) -> None:
        """Test component ids must be unique."""
        # Act / Assert
        with pytest.raises(ArchitectureError, match="duplicate component id 'gt'"):
            build_architecture("a", [FUEL, TURBINE, TURBINE, PROP], [("fuel", "gt")])

    @pytest.mark.unit
    def test_unknown_edge_endpoint(self) -> None:
        """Test an edge to a missing component is rejected."""
        # Act / Assert
        with pytest.raises(ArchitectureError, match="references unknown 'motor'"):
            build_architecture("a", [FUEL, TURBINE, PROP], [("fuel", "gt"), ("motor", "prop")])

    @pytest.mark.unit
    def test_source_inbound_edge(self) -> None:
        """Test a source cannot be fed."""
        # Act / Assert
        with pytest.raises(ArchitectureError, match="source 'fuel' has inbound edge"):
            build_architecture(
                "a", [FUEL, TURBINE, PROP], [("fuel", "gt"), ("gt", "fuel"), ("gt", "prop")]
            )

    @pytest.mark.unit
    def test_sink_outbound_edge(self) -> None:
        """Test a sink cannot feed anything."""
        # Arrange
        gearbox = Component(id="gb", kind="gearbox", efficiency=0.98)

        # Act / Assert
        with pytest.raises(ArchitectureError, match="sink 'prop' has outbound edge"):
            build_architecture(
                "a",
                [FUEL, TURBINE, gearbox, PROP],
                [("fuel", "gt"), ("gt", "prop"), ("prop", "gb")],
            )

    @pytest.mark.unit
    def test_cycle_reported(self) -> None:
        """Test a cycle raises CycleError listing its members."""
        # Arrange
        a = Component(id="a", kind="gearbox", efficiency=0.98)
        b = Component(id="b", kind="gearbox", efficiency=0.98)

        # Act / Assert
        with pytest.raises(CycleError) as exc_info:
            build_architecture(
                "loop",
                [FUEL, a, b, PROP],
                [("fuel", "a"), ("a", "b"), ("b", "a"), ("b", "prop")],
            )
        cycle = exc_info.value.cycle
        assert set(cycle) == {"a", "b"}
        assert cycle[0] == cycle[-1]

    @pytest.mark.unit
    def test_unreachable_sink(self) -> None:
        """Test every sink must be reachable from a source."""
        # Arrange
        motor = Component(id="motor", kind="electric_motor", efficiency=0.95)
        fan = Component(id="fan", kind="fan", efficiency=0.85)

        # Act / Assert
        with pytest.raises(ArchitectureError, match="sink 'fan' is not reachable"):
            build_architecture(
                "a",
                [FUEL, TURBINE, PROP, motor, fan],
                [("fuel", "gt"), ("gt", "prop"), ("motor", "fan")],
            )

    @pytest.mark.unit
    def test_no_sink(self) -> None:
        """Test an architecture needs a sink."""
        # Act / Assert
        with pytest.raises(ArchitectureError, match="has no sink"):
            build_architecture("a", [FUEL, TURBINE], [("fuel", "gt")])

    @pytest.mark.unit
    def test_unknown_operation(self, turboprop_chain: PropArchitecture) -> None:
        """Test looking up a missing operation names the known ones."""
        # Act / Assert
        with pytest.raises(ArchitectureError, match=r"no operation 'climb' \(known: cruise\)"):
            turboprop_chain.operation("climb")

    @pytest.mark.unit
    def test_component_updates_rebuild(self, turboprop_chain: PropArchitecture) -> None:
        """Test component updates produce a new validated architecture."""
        # Act
        updated = turboprop_chain.with_component_updates({"gt": {"efficiency": 0.4}})

        # Assert
        assert updated.component("gt").efficiency == 0.4
        assert turboprop_chain.component("gt").efficiency == 0.35
        assert updated.order == turboprop_chain.order
        assert set(updated.operations) == {"cruise"}


class TestBuildOperation:
    """Tests for operation split resolution."""

    @pytest.mark.unit
    def test_single_feeder_default(self, turboprop_chain: PropArchitecture) -> None:
        """Test components with one feeder default to a fraction of one."""
        # Act
        op = turboprop_chain.operation("cruise")

        # Assert
        idx = turboprop_chain.index
        assert op.split_matrix[idx["gt"], idx["fuel"]] == 1.0
        assert op.split_matrix[idx["prop"], idx["gt"]] == 1.0
        assert op.thrust_shares == {"prop": 1.0}

    @pytest.mark.unit
    def test_split_row(self, hybrid_arch: PropArchitecture) -> None:
        """Test an explicit split row lands in the matrix."""
        # Act
        op = hybrid_arch.operation("boost")

        # Assert
        idx = hybrid_arch.index
        row = op.split_matrix[idx["gearbox"]]
        assert row[idx["gt"]] == pytest.approx(0.7)
        assert row[idx["motor"]] == pytest.approx(0.3)
        assert not op.split_matrix.flags.writeable

    @pytest.mark.unit
    def test_inactive_component(self, hybrid_arch: PropArchitecture) -> None:
        """Test an inactive component has an all-zero row."""
        # Act
        op = hybrid_arch.operation("turbine_only")

        # Assert
        assert not np.any(op.split_matrix[hybrid_arch.index["motor"]])
        assert not op.is_active(hybrid_arch.index["motor"])
        assert op.is_active(hybrid_arch.index["gt"])

    @pytest.mark.unit
    def test_row_must_sum_to_one(self, hybrid_arch: PropArchitecture) -> None:
        """Test a split row summing to 0.9 is rejected."""
        # Arrange
        definition = OperationDefinition(id="bad", splits={"gearbox": {"gt": 0.6, "motor": 0.3}})

        # Act / Assert
        with pytest.raises(PowerFlowError, match="split row of 'gearbox' sums to"):
            build_operation(hybrid_arch, definition)

    @pytest.mark.unit
    def test_ambiguous_default(self, hybrid_arch: PropArchitecture) -> None:
        """Test a multi-feeder component needs a split row."""
        # Act / Assert
        with pytest.raises(PowerFlowError, match="2 feeders and no split row"):
            build_operation(hybrid_arch, OperationDefinition(id="bad"))

    @pytest.mark.unit
    def test_pull_from_inactive(self, hybrid_arch: PropArchitecture) -> None:
        """Test an active component cannot pull from an inactive one."""
        # Arrange
        definition = OperationDefinition(
            id="bad", splits={"gearbox": {"gt": 1.0}}, inactive=("gt",)
        )

        # Act / Assert
        with pytest.raises(PowerFlowError, match="pulls from inactive 'gt'"):
            build_operation(hybrid_arch, definition)

    @pytest.mark.unit
    def test_split_on_missing_edge(self, hybrid_arch: PropArchitecture) -> None:
        """Test a fraction without a matching edge is rejected."""
        # Arrange
        definition = OperationDefinition(id="bad", splits={"gearbox": {"pack": 1.0}})

        # Act / Assert
        with pytest.raises(PowerFlowError, match="no edge pack -> gearbox"):
            build_operation(hybrid_arch, definition)

    @pytest.mark.unit
    def test_thrust_shares_must_cover_active_sinks(self) -> None:
        """Test explicit thrust shares must name every active sink."""
        # Arrange
        left = Component(id="prop_left", kind="propeller", efficiency=0.8)
        right = Component(id="prop_right", kind="propeller", efficiency=0.8)
        definition = OperationDefinition(id="lopsided", thrust_shares={"prop_left": 1.0})

        # Act / Assert
        with pytest.raises(PowerFlowError, match="active sinks without thrust share"):
            build_architecture(
                "twin",
                [FUEL, TURBINE, left, right],
                [("fuel", "gt"), ("gt", "prop_left"), ("gt", "prop_right")],
                [definition],
            )


class TestConnectedSubgraphs:
    """Tests for PropArchitecture.connected_subgraphs."""

    @pytest.mark.unit
    def test_shared_gearbox_is_one_powertrain(self, hybrid_arch: PropArchitecture) -> None:
        """Test a gearbox joining turbine and motor makes a single subgraph."""
        # Act
        groups = hybrid_arch.connected_subgraphs()

        # Assert
        assert groups == [[c.id for c in hybrid_arch.components]]

    @pytest.mark.unit
    def test_electrified_freighter_has_two_powertrains(
        self, freighter_arch: PropArchitecture
    ) -> None:
        """Test inboard turbines and outboard motors form separate subgraphs."""
        # Act
        groups = freighter_arch.connected_subgraphs()

        # Assert
        inboard, outboard = groups
        assert inboard == [
            "fuel",
            "gt_inboard_left",
            "gt_inboard_right",
            "prop_inboard_left",
            "prop_inboard_right",
        ]
        assert outboard == [
            "pack",
            "motor_outboard_left",
            "motor_outboard_right",
            "prop_outboard_left",
            "prop_outboard_right",
        ]
        assert freighter_arch.source_ids == ["fuel", "pack"]
        assert len(freighter_arch.sink_ids) == 4
