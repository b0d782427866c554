"""Tests for architecture documents and cross-document checks."""

from collections.abc import Callable
from pathlib import Path

import pytest

from fastsize.exceptions import ConstraintError, DocumentParseError
from fastsize.models import AircraftSpec, MissionProfile
from fastsize.powertrain import (
    PropArchitecture,
    architecture_from_document,
    architecture_to_document,
    check_compatibility,
    load_architecture,
    parse_architecture,
    serialize_architecture,
)

SMALL = """
schema_version = 1
id = "chain"
edges = [["fuel", "gt"], ["gt", "prop"]]

[[components]]
id = "fuel"
kind = "jet_fuel"

[[components]]
id = "gt"
kind = "gas_turbine"
efficiency = 0.35
specific_power = "5 kW/kg"

[[components]]
id = "prop"
kind = "propeller"
efficiency = 0.8
specific_power = "8 kW/kg"

[operations.cruise]
"""


class TestParseArchitecture:
    """Tests for architecture documents."""

    @pytest.mark.unit
    def test_units_normalized(self) -> None:
        """Test specific power is converted to W/kg."""
        # Act
        arch = parse_architecture(SMALL)

        # Assert
        assert arch.component("gt").specific_power == pytest.approx(5000.0)
        assert arch.edges == (("fuel", "gt"), ("gt", "prop"))
        assert set(arch.operations) == {"cruise"}

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "name",
        [
            "conventional_twin",
            "parallel_hybrid",
            "battery_electric",
            "quad_turbofan",
            "freighter_figure1",
            "hydrogen_fuel_cell",
        ],
    )
    def test_bundled_examples_load(self, name: str, examples_dir: Path) -> None:
        """Test every bundled architecture is valid."""
        # Act
        arch = load_architecture(examples_dir / f"{name}.arch.toml")

        # Assert
        assert arch.id == name
        assert arch.sink_ids
        assert arch.operations

    @pytest.mark.unit
    def test_unknown_component_key(self) -> None:
        """Test unknown component keys are rejected."""
        # Arrange
        text = SMALL.replace('kind = "gas_turbine"', 'kind = "gas_turbine"\nmass = 300')

        # Act / Assert
        with pytest.raises(DocumentParseError, match=r"unknown key 'components\[1\]\.mass'"):
            parse_architecture(text)

    @pytest.mark.unit
    def test_bad_edge(self) -> None:
        """Test an edge must be a pair of ids."""
        # Arrange
        text = SMALL.replace('["gt", "prop"]', '["gt"]')

        # Act / Assert
        with pytest.raises(DocumentParseError, match=r"edges\[1\] must be a \[from, to\] pair"):
            parse_architecture(text)

    @pytest.mark.unit
    def test_serialize_round_trip(
        self, examples_dir: Path, write_doc: Callable[[str, str], Path]
    ) -> None:
        """Test a serialized architecture loads back unchanged."""
        # Arrange
        arch = load_architecture(examples_dir / "parallel_hybrid.arch.toml")

        # Act
        again = load_architecture(write_doc("again.arch.toml", serialize_architecture(arch)))

        # Assert
        assert again.components == arch.components
        assert again.edges == arch.edges
        assert again.definitions == arch.definitions
        assert again.order == arch.order

    @pytest.mark.unit
    def test_document_mapping_round_trip(self, hybrid_arch: PropArchitecture) -> None:
        """Test the embedded document form rebuilds the architecture."""
        # Act
        again = architecture_from_document(architecture_to_document(hybrid_arch))

        # Assert
        assert again.components == hybrid_arch.components
        assert again.definitions == hybrid_arch.definitions


class TestCheckCompatibility:
    """Tests for check_compatibility."""

    @pytest.mark.unit
    def test_examples_agree(
        self,
        regional_spec: AircraftSpec,
        regional_arch: PropArchitecture,
        regional_profile: MissionProfile,
    ) -> None:
        """Test the regional example documents are consistent."""
        # Act / Assert
        check_compatibility(regional_spec, regional_arch, regional_profile)

    @pytest.mark.unit
    def test_architecture_id_mismatch(
        self, regional_spec: AircraftSpec, turboprop_chain: PropArchitecture
    ) -> None:
        """Test the specification must name the architecture."""
        # Act / Assert
        with pytest.raises(ConstraintError, match="expects architecture") as exc_info:
            check_compatibility(regional_spec, turboprop_chain)
        assert exc_info.value.invariant == "architecture_id"

    @pytest.mark.unit
    def test_source_kind_mismatch(
        self, make_spec: Callable[..., AircraftSpec], turboprop_chain: PropArchitecture
    ) -> None:
        """Test energy source kinds must agree across documents."""
        # Arrange
        spec = make_spec(
            energy_sources=[{"id": "fuel", "kind": "hydrogen", "specific_energy": 120e6}]
        )

        # Act / Assert
        with pytest.raises(ConstraintError, match="is hydrogen in the aircraft") as exc_info:
            check_compatibility(spec, turboprop_chain)
        assert exc_info.value.invariant == "energy_sources"

    @pytest.mark.unit
    def test_missing_source(
        self, make_spec: Callable[..., AircraftSpec], turboprop_chain: PropArchitecture
    ) -> None:
        """Test every architecture source needs an energy source entry."""
        # Arrange
        spec = make_spec(
            energy_sources=[{"id": "tank", "kind": "jet_fuel", "specific_energy": 43e6}]
        )

        # Act / Assert
        with pytest.raises(ConstraintError, match="'fuel' has no entry"):
            check_compatibility(spec, turboprop_chain)

    @pytest.mark.unit
    def test_unknown_operation(
        self,
        make_spec: Callable[..., AircraftSpec],
        turboprop_chain: PropArchitecture,
        regional_profile: MissionProfile,
    ) -> None:
        """Test mission operations must exist in the architecture."""
        # Act / Assert
        with pytest.raises(ConstraintError, match="segment 0: operation 'all_engines'") as exc_info:
            check_compatibility(make_spec(), turboprop_chain, regional_profile)
        assert exc_info.value.invariant == "operation_id"
