"""Tests for power propagation and component sizing."""

import pytest
from faker import Faker

from fastsize.exceptions import ArchitectureError, PowerFlowError
from fastsize.powertrain import (
    Component,
    OperationDefinition,
    OperationSplit,
    PropArchitecture,
    build_architecture,
    propagate_power,
    reconstruct_sink_outputs,
    size_components,
)


def _random_hybrid(faker: Faker) -> PropArchitecture:
    """Turbine and motor through one gearbox to two propellers, random data."""

    def efficiency() -> float:
        return faker.pyfloat(min_value=0.25, max_value=0.99)

    share = faker.pyfloat(min_value=0.05, max_value=0.95)
    return build_architecture(
        "random_hybrid",
        [
            Component(id="fuel", kind="jet_fuel"),
            Component(id="pack", kind="battery"),
            Component(id="gt", kind="gas_turbine", efficiency=efficiency()),
            Component(id="motor", kind="electric_motor", efficiency=efficiency()),
            Component(id="gearbox", kind="gearbox", efficiency=efficiency()),
            Component(id="prop_left", kind="propeller", efficiency=efficiency()),
            Component(id="prop_right", kind="propeller", efficiency=efficiency()),
        ],
        [
            ("fuel", "gt"),
            ("pack", "motor"),
            ("gt", "gearbox"),
            ("motor", "gearbox"),
            ("gearbox", "prop_left"),
            ("gearbox", "prop_right"),
        ],
        [
            OperationDefinition(
                id="mixed", splits={"gearbox": {"gt": share, "motor": 1.0 - share}}
            )
        ],
    )


class TestPropagatePower:
    """Tests for propagate_power."""

    @pytest.mark.unit
    def test_chain_draw(self, turboprop_chain: PropArchitecture) -> None:
        """Test a chain draws demand over the product of efficiencies."""
        # Act
        table = propagate_power(turboprop_chain, turboprop_chain.operation("cruise"), {"prop": 1e6})

        # Assert
        assert table.draw == {"fuel": pytest.approx(1e6 / (0.8 * 0.35), rel=1e-12)}
        assert table.input["prop"] == pytest.approx(1.25e6)
        assert table.output["gt"] == pytest.approx(1.25e6)
        assert table.input["fuel"] == 0.0

    @pytest.mark.unit
    def test_hybrid_split(self, hybrid_arch: PropArchitecture) -> None:
        """Test the gearbox demand is shared by its split row."""
        # Arrange
        gearbox_input = 1e6 / 0.8 / 0.98

        # Act
        table = propagate_power(hybrid_arch, hybrid_arch.operation("boost"), {"prop": 1e6})

        # Assert
        assert table.output["gt"] == pytest.approx(0.7 * gearbox_input)
        assert table.output["motor"] == pytest.approx(0.3 * gearbox_input)
        assert table.draw["fuel"] == pytest.approx(0.7 * gearbox_input / 0.3)
        assert table.draw["pack"] == pytest.approx(0.3 * gearbox_input / 0.95)

    @pytest.mark.unit
    def test_rating_powers(self, hybrid_arch: PropArchitecture) -> None:
        """Test turbines are rated on output and motors on input."""
        # Arrange
        table = propagate_power(hybrid_arch, hybrid_arch.operation("boost"), {"prop": 1e6})

        # Act
        ratings = table.rating_powers(hybrid_arch)

        # Assert
        assert ratings["gt"] == table.output["gt"]
        assert ratings["motor"] == table.input["motor"]
        assert ratings["prop"] == pytest.approx(1e6)
        assert ratings["pack"] == table.draw["pack"]

    @pytest.mark.unit
    def test_inactive_path_draws_nothing(self, hybrid_arch: PropArchitecture) -> None:
        """Test the battery is idle when the motor is switched off."""
        # Act
        table = propagate_power(hybrid_arch, hybrid_arch.operation("turbine_only"), {"prop": 1e6})

        # Assert
        assert table.draw["pack"] == 0.0
        assert table.input["motor"] == 0.0
        assert table.draw["fuel"] == pytest.approx(1e6 / (0.8 * 0.98 * 0.3))

    @pytest.mark.unit
    def test_listing_order_does_not_change_result(self, hybrid_arch: PropArchitecture) -> None:
        """Test a reordered document gives a bit-identical table."""
        # Arrange
        shuffled = build_architecture(
            "hybrid",
            list(reversed(hybrid_arch.components)),
            list(reversed(hybrid_arch.edges)),
            hybrid_arch.definitions,
        )

        # Act
        first = propagate_power(hybrid_arch, hybrid_arch.operation("boost"), {"prop": 7.3e5})
        second = propagate_power(shuffled, shuffled.operation("boost"), {"prop": 7.3e5})

        # Assert
        assert first.draw == second.draw
        assert first.rating_powers(hybrid_arch) == second.rating_powers(shuffled)

    @pytest.mark.unit
    def test_demand_on_non_sink(self, turboprop_chain: PropArchitecture) -> None:
        """Test demands may only be placed on sinks."""
        # Act / Assert
        with pytest.raises(PowerFlowError, match="not a sink"):
            propagate_power(turboprop_chain, turboprop_chain.operation("cruise"), {"gt": 1e5})

    @pytest.mark.unit
    def test_negative_demand(self, turboprop_chain: PropArchitecture) -> None:
        """Test negative demands are rejected."""
        # Act / Assert
        with pytest.raises(PowerFlowError, match="finite and >= 0"):
            propagate_power(turboprop_chain, turboprop_chain.operation("cruise"), {"prop": -1.0})

    @pytest.mark.unit
    def test_demand_on_inactive_sink(self) -> None:
        """Test a switched-off sink cannot take demand."""
        # Arrange
        arch = build_architecture(
            "twin",
            [
                Component(id="fuel", kind="jet_fuel"),
                Component(id="gt", kind="gas_turbine", efficiency=0.3),
                Component(id="left", kind="propeller", efficiency=0.8),
                Component(id="right", kind="propeller", efficiency=0.8),
            ],
            [("fuel", "gt"), ("gt", "left"), ("gt", "right")],
            [OperationDefinition(id="one_out", inactive=("right",))],
        )

        # Act / Assert
        with pytest.raises(PowerFlowError, match="inactive in operation 'one_out'"):
            propagate_power(arch, arch.operation("one_out"), {"left": 1e5, "right": 1e5})

    @pytest.mark.unit
    def test_unknown_efficiency(self, regional_arch: PropArchitecture) -> None:
        """Test an unfilled turbine efficiency stops the sweep."""
        # Act / Assert
        with pytest.raises(PowerFlowError, match="efficiency of 'gt_left' is unknown"):
            propagate_power(
                regional_arch, regional_arch.operation("all_engines"), {"prop_left": 1e6}
            )

    @pytest.mark.unit
    def test_raw_matrix_row_sum_checked(self, hybrid_arch: PropArchitecture) -> None:
        """Test an unvalidated split matrix with a bad row is caught."""
        # Arrange
        matrix = hybrid_arch.operation("boost").split_matrix.copy()
        matrix[hybrid_arch.index["gearbox"], hybrid_arch.index["gt"]] = 0.5
        op = OperationSplit.from_matrix(hybrid_arch, "raw", matrix)

        # Act / Assert
        with pytest.raises(PowerFlowError, match="split row of 'gearbox'"):
            propagate_power(hybrid_arch, op, {"prop": 1e6})


class TestElectrifiedFreighterFlow:
    """Tests for power propagation through the two freighter powertrains."""

    @pytest.mark.unit
    def test_thrust_shares_split_the_draw(self, freighter_arch: PropArchitecture) -> None:
        """Test fuel feeds the inboard propellers and the battery the outboard ones."""
        # Arrange
        op = freighter_arch.operation("all_engines")
        demands = {sink_id: share * 1.0e6 for sink_id, share in op.thrust_shares.items()}

        # Act
        table = propagate_power(freighter_arch, op, demands)

        # Assert
        assert demands["prop_inboard_left"] == pytest.approx(4.0e5)
        assert demands["prop_outboard_right"] == pytest.approx(1.0e5)
        assert table.output["gt_inboard_left"] == pytest.approx(5.0e5)
        assert table.draw["fuel"] == pytest.approx(2 * 5.0e5 / 0.35, rel=1e-12)
        assert table.draw["pack"] == pytest.approx(2 * 1.25e5 / 0.95, rel=1e-12)
        assert reconstruct_sink_outputs(freighter_arch, op, table) == {
            sink_id: pytest.approx(demand, rel=1e-9) for sink_id, demand in demands.items()
        }

    @pytest.mark.unit
    def test_inboard_only_leaves_battery_idle(self, freighter_arch: PropArchitecture) -> None:
        """Test switching the motors off moves the whole demand onto fuel."""
        # Arrange
        op = freighter_arch.operation("inboard_only")

        # Act
        table = propagate_power(
            freighter_arch, op, {"prop_inboard_left": 4.0e5, "prop_inboard_right": 4.0e5}
        )

        # Assert
        assert dict(op.thrust_shares) == {"prop_inboard_left": 0.5, "prop_inboard_right": 0.5}
        assert table.draw["pack"] == 0.0
        assert table.input["motor_outboard_left"] == 0.0
        assert table.draw["fuel"] == pytest.approx(2 * 5.0e5 / 0.35)

    @pytest.mark.unit
    def test_outboard_demand_rejected_when_motors_off(
        self, freighter_arch: PropArchitecture
    ) -> None:
        """Test an outboard propeller cannot take demand in the turbine-only operation."""
        # Act / Assert
        with pytest.raises(PowerFlowError, match="inactive in operation 'inboard_only'"):
            propagate_power(
                freighter_arch,
                freighter_arch.operation("inboard_only"),
                {"prop_outboard_left": 1.0e5},
            )


class TestReconstructSinkOutputs:
    """Tests for the forward conservation check."""

    @pytest.mark.unit
    def test_chain(self, turboprop_chain: PropArchitecture) -> None:
        """Test the chain delivers exactly the demand."""
        # Arrange
        op = turboprop_chain.operation("cruise")
        table = propagate_power(turboprop_chain, op, {"prop": 2.5e6})

        # Act
        outputs = reconstruct_sink_outputs(turboprop_chain, op, table)

        # Assert
        assert outputs == {"prop": pytest.approx(2.5e6, rel=1e-12)}

    @pytest.mark.unit
    @pytest.mark.slow
    @pytest.mark.timeout(30)
    def test_random_architectures_conserve_power(self, faker: Faker) -> None:
        """Test forward reconstruction recovers every sink demand."""
        for _ in range(1000):
            # Arrange
            arch = _random_hybrid(faker)
            op = arch.operation("mixed")
            demands = {
                "prop_left": faker.pyfloat(min_value=0.0, max_value=3e6),
                "prop_right": faker.pyfloat(min_value=1e3, max_value=3e6),
            }

            # Act
            table = propagate_power(arch, op, demands)
            outputs = reconstruct_sink_outputs(arch, op, table)

            # Assert
            for sink_id, demand in demands.items():
                assert outputs[sink_id] == pytest.approx(demand, rel=1e-9, abs=1e-6)


class TestSizeComponents:
    """Tests for size_components."""

    @pytest.mark.unit
    def test_mass_from_peak(self, hybrid_arch: PropArchitecture) -> None:
        """Test mass is peak rating power over specific power."""
        # Act
        masses = size_components(hybrid_arch, {"motor": 1e6, "prop": 2e6})

        # Assert
        assert masses["motor"] == pytest.approx(200.0)
        assert masses["prop"] == pytest.approx(250.0)
        assert masses["gt"] == 0.0
        assert "fuel" not in masses
        assert "pack" not in masses

    @pytest.mark.unit
    def test_missing_specific_power(self, regional_arch: PropArchitecture) -> None:
        """Test a powered component without specific power cannot be sized."""
        # Act / Assert
        with pytest.raises(ArchitectureError, match="'gt_left' has peak power"):
            size_components(regional_arch, {"gt_left": 1e6})
