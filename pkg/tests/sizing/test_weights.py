"""Tests for the weight build-up and energy-source sizing."""

from collections.abc import Callable

import pytest

from fastsize.exceptions import InfeasibleDecompositionError
from fastsize.models import AircraftSpec
from fastsize.powertrain import PropArchitecture
from fastsize.sizing import energy_source_sizing, takeoff_rating_powers, weight_buildup
from fastsize.units import G0

BATTERY = {
    "id": "pack",
    "kind": "battery",
    "specific_energy": 9.0e5,
    "usable_depth_of_discharge": 0.8,
    "max_specific_power": 1000.0,
}


class TestWeightBuildup:
    """Tests for weight_buildup."""

    @pytest.mark.unit
    def test_wing_area_from_loading(
        self, make_spec: Callable[..., AircraftSpec], turboprop_chain: PropArchitecture
    ) -> None:
        """Test the wing area is MTOW weight over wing loading."""
        # Arrange
        spec = make_spec(wing_loading=5000.0)

        # Act
        buildup = weight_buildup(50_000.0, spec, turboprop_chain, {})

        # Assert
        assert buildup.wing_area == pytest.approx(98.07, abs=0.01)
        assert buildup.installed_rating == pytest.approx(20.0 * 50_000.0 * G0)
        assert buildup.rating_kind == "power"

    @pytest.mark.unit
    def test_propulsion_carved_from_empty_weight(
        self, make_spec: Callable[..., AircraftSpec], turboprop_chain: PropArchitecture
    ) -> None:
        """Test airframe plus propulsion equals the empty-weight allowance."""
        # Arrange
        spec = make_spec()

        # Act
        buildup = weight_buildup(20_000.0, spec, turboprop_chain, {"gt": 1e6, "prop": 8e5})

        # Assert
        assert buildup.propulsion_masses == {
            "gt": pytest.approx(200.0),
            "prop": pytest.approx(100.0),
        }
        assert buildup.airframe_mass + buildup.propulsion_mass == pytest.approx(11_000.0)

    @pytest.mark.unit
    def test_airframe_only_basis(
        self, make_spec: Callable[..., AircraftSpec], turboprop_chain: PropArchitecture
    ) -> None:
        """Test an airframe-only fraction puts propulsion on top."""
        # Arrange
        spec = make_spec(empty_weight_basis="airframe_only")

        # Act
        buildup = weight_buildup(20_000.0, spec, turboprop_chain, {"gt": 1e6})

        # Assert
        assert buildup.airframe_mass == pytest.approx(11_000.0)
        assert buildup.propulsion_mass == pytest.approx(200.0)

    @pytest.mark.unit
    def test_installed_rating_sizes_components(
        self, make_spec: Callable[..., AircraftSpec], turboprop_chain: PropArchitecture
    ) -> None:
        """Test components are sized on at least their share of the installed rating."""
        # Arrange
        spec = make_spec()
        op = turboprop_chain.operation("cruise")
        rating = spec.installed_rating(20_000.0)

        # Act
        buildup = weight_buildup(
            20_000.0,
            spec,
            turboprop_chain,
            {"gt": 1e5},
            takeoff_operation=op,
            takeoff_speed=60.0,
        )

        # Assert
        assert buildup.sizing_powers["gt"] == pytest.approx(rating)
        assert buildup.propulsion_masses["gt"] == pytest.approx(rating / 5.0e3)
        assert buildup.propulsion_masses["prop"] == pytest.approx(0.8 * rating / 8.0e3)

    @pytest.mark.unit
    def test_takeoff_rating_powers(
        self, make_spec: Callable[..., AircraftSpec], hybrid_arch: PropArchitecture
    ) -> None:
        """Test the installed rating is apportioned by the operation split."""
        # Arrange
        spec = make_spec(architecture_id="hybrid")
        rating = spec.installed_rating(10_000.0)

        # Act
        powers = takeoff_rating_powers(
            spec, hybrid_arch, hybrid_arch.operation("boost"), 10_000.0, 60.0
        )

        # Assert
        assert powers["prop"] == pytest.approx(0.8 * rating)
        assert powers["gt"] == pytest.approx(0.7 * rating / 0.98)
        assert powers["motor"] == pytest.approx(0.3 * rating / 0.98 / 0.95)

    @pytest.mark.unit
    def test_infeasible_decomposition(
        self, make_spec: Callable[..., AircraftSpec], turboprop_chain: PropArchitecture
    ) -> None:
        """Test propulsion heavier than the empty-weight allowance is rejected."""
        # Arrange
        spec = make_spec()

        # Act / Assert
        with pytest.raises(InfeasibleDecompositionError, match="infeasible decomposition"):
            weight_buildup(10_000.0, spec, turboprop_chain, {"gt": 5.0e7})


class TestEnergySourceSizing:
    """Tests for energy_source_sizing."""

    @pytest.mark.unit
    def test_fuel_is_mass_burned(self, make_spec: Callable[..., AircraftSpec]) -> None:
        """Test consumables carry exactly the mass burned."""
        # Act
        sized = energy_source_sizing(make_spec(), {"fuel": 4.3e10}, {"fuel": 1000.0})

        # Assert
        assert sized.fuel_mass == {"fuel": 1000.0}
        assert sized.battery_mass == {}
        assert sized.total == 1000.0

    @pytest.mark.unit
    def test_battery_energy_bound(self, make_spec: Callable[..., AircraftSpec]) -> None:
        """Test 7.2 GJ at 250 Wh/kg and 80 % depth of discharge needs 10 t."""
        # Arrange
        spec = make_spec(energy_sources=[BATTERY])

        # Act
        sized = energy_source_sizing(spec, {"pack": 7.2e9}, {})

        # Assert
        assert sized.battery_mass["pack"] == pytest.approx(10_000.0)

    @pytest.mark.unit
    def test_battery_power_bound(self, make_spec: Callable[..., AircraftSpec]) -> None:
        """Test a high peak draw raises the pack above its energy mass."""
        # Arrange
        spec = make_spec(energy_sources=[BATTERY])

        # Act
        sized = energy_source_sizing(spec, {"pack": 7.2e9}, {}, {"pack": 2.0e7})

        # Assert
        assert sized.battery_mass["pack"] == pytest.approx(20_000.0)
