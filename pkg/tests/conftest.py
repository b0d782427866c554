"""Shared pytest fixtures for fastsize tests.

This module provides the fixtures used across the suite: seeded fake data,
the bundled database and example documents, small hand-built architectures
and specifications, and a helper that writes documents into a temporary
directory.
"""

from collections.abc import Callable
from pathlib import Path
from types import SimpleNamespace
from typing import Any

import pytest
from faker import Faker
from pytest_mock import MockerFixture

from fastsize.cache import ModelCache
from fastsize.config import bundled_data_dir, bundled_examples_dir
from fastsize.mission import FlightVehicle
from fastsize.models import AircraftSpec, MissionProfile, load_mission, load_spec, parse_mission
from fastsize.powertrain import (
    Component,
    OperationDefinition,
    PropArchitecture,
    build_architecture,
    load_architecture,
)
from fastsize.regression import HistoricalDatabase, load_database
from fastsize.sizing import SizedAircraft, size_aircraft

CRUISE_MISSION = """
schema_version = 1
name = "sea-level cruise"

[[segments]]
kind = "cruise"
altitude = "0 m"
tas = "100 m/s"
distance = "1000 km"
operation = "cruise"
"""


@pytest.fixture
def faker_seed() -> int:
    """Provide deterministic seed for Faker.

    Returns:
        int: Seed value for reproducible test data.
    """
    return 12345


@pytest.fixture
def faker(faker_seed: int) -> Faker:
    """Provide Faker instance with deterministic seed.

    Args:
        faker_seed: Seed for reproducible data generation.

    Returns:
        Faker: Configured Faker instance.
    """
    fake = Faker()
    Faker.seed(faker_seed)
    return fake


@pytest.fixture
def examples_dir() -> Path:
    """Directory of the bundled example documents."""
    return bundled_examples_dir()


@pytest.fixture(scope="session")
def bundled_db() -> HistoricalDatabase:
    """Bundled historical database, loaded once per session."""
    return load_database(bundled_data_dir())


@pytest.fixture
def model_cache() -> ModelCache:
    """Fresh model cache so tests do not share fitted models."""
    return ModelCache(max_entries=16)


@pytest.fixture
def regional_spec(examples_dir: Path) -> AircraftSpec:
    """Regional turboprop example specification."""
    return load_spec(examples_dir / "regional_turboprop.aircraft.toml")


@pytest.fixture
def regional_profile(examples_dir: Path) -> MissionProfile:
    """Regional turboprop design mission."""
    return load_mission(examples_dir / "regional_turboprop.mission.toml")


@pytest.fixture
def regional_arch(examples_dir: Path) -> PropArchitecture:
    """Conventional twin turboprop architecture."""
    return load_architecture(examples_dir / "conventional_twin.arch.toml")


@pytest.fixture
def freighter_arch(examples_dir: Path) -> PropArchitecture:
    """Electrified freighter with its gas turbines completed."""
    arch = load_architecture(examples_dir / "freighter_figure1.arch.toml")
    turbine = {"efficiency": 0.35, "specific_power": 5.0e3}
    return arch.with_component_updates({"gt_inboard_left": turbine, "gt_inboard_right": turbine})


@pytest.fixture
def turboprop_chain() -> PropArchitecture:
    """Fuel -> gas turbine -> propeller, with every component fully specified."""
    return build_architecture(
        "chain",
        [
            Component(id="fuel", kind="jet_fuel"),
            Component(id="gt", kind="gas_turbine", efficiency=0.35, specific_power=5.0e3),
            Component(id="prop", kind="propeller", efficiency=0.8, specific_power=8.0e3),
        ],
        [("fuel", "gt"), ("gt", "prop")],
        [OperationDefinition(id="cruise")],
    )


@pytest.fixture
def battery_chain() -> PropArchitecture:
    """Battery -> electric motor -> propeller."""
    return build_architecture(
        "electric_chain",
        [
            Component(id="pack", kind="battery"),
            Component(id="motor", kind="electric_motor", efficiency=0.95, specific_power=5.0e3),
            Component(id="prop", kind="propeller", efficiency=0.8, specific_power=8.0e3),
        ],
        [("pack", "motor"), ("motor", "prop")],
        [OperationDefinition(id="cruise")],
    )


@pytest.fixture
def hybrid_arch() -> PropArchitecture:
    """One gas turbine and one motor driving a propeller through a gearbox."""
    return build_architecture(
        "hybrid",
        [
            Component(id="fuel", kind="jet_fuel"),
            Component(id="pack", kind="battery"),
            Component(id="gt", kind="gas_turbine", efficiency=0.3, specific_power=4.0e3),
            Component(id="motor", kind="electric_motor", efficiency=0.95, specific_power=5.0e3),
            Component(id="gearbox", kind="gearbox", efficiency=0.98, specific_power=20.0e3),
            Component(id="prop", kind="propeller", efficiency=0.8, specific_power=8.0e3),
        ],
        [
            ("fuel", "gt"),
            ("pack", "motor"),
            ("gt", "gearbox"),
            ("motor", "gearbox"),
            ("gearbox", "prop"),
        ],
        [
            OperationDefinition(id="boost", splits={"gearbox": {"gt": 0.7, "motor": 0.3}}),
            OperationDefinition(
                id="turbine_only", splits={"gearbox": {"gt": 1.0}}, inactive=("motor",)
            ),
        ],
    )


@pytest.fixture
def make_spec() -> Callable[..., AircraftSpec]:
    """Build a fully specified turboprop specification.

    The defaults put the sea-level cruise at 100 m/s close to the best
    lift-to-drag ratio, so L/D barely changes as fuel burns off.

    Returns:
        Factory accepting field overrides.
    """

    def _make(**overrides: Any) -> AircraftSpec:
        fields: dict[str, Any] = {
            "name": "test aircraft",
            "payload_mass": 4000.0,
            "crew_mass": 0.0,
            "design_range": 1.0e6,
            "power_to_weight": 20.0,
            "wing_loading": 4594.0,
            "aspect_ratio": 9.95,
            "oswald_efficiency": 0.8,
            "cd0": 0.02,
            "max_lift_coefficient": 2.0,
            "empty_weight_fraction": 0.55,
            "architecture_id": "chain",
            "energy_sources": [{"id": "fuel", "kind": "jet_fuel", "specific_energy": 43.0e6}],
        }
        fields.update(overrides)
        return AircraftSpec.model_validate(fields)

    return _make


@pytest.fixture
def cruise_profile() -> MissionProfile:
    """Single sea-level cruise of 1000 km at 100 m/s on operation ``cruise``."""
    return parse_mission(CRUISE_MISSION)


@pytest.fixture
def write_doc(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write a text document into the test's temporary directory.

    Returns:
        Callable taking a file name and content, returning the path.
    """

    def _write(name: str, content: str) -> Path:
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def sized(
    mocker: MockerFixture,
    make_spec: Callable[..., AircraftSpec],
    turboprop_chain: PropArchitecture,
    cruise_profile: MissionProfile,
    bundled_db: HistoricalDatabase,
) -> SizedAircraft:
    """Aircraft sized against a stub mission burning 30 % of MTOW."""

    def fly(vehicle: FlightVehicle, *args: Any, **kwargs: Any) -> SimpleNamespace:
        return SimpleNamespace(
            peak_power={},
            energy_per_source={"fuel": 0.3 * vehicle.mtow * 43.0e6},
            fuel_per_source={"fuel": 0.3 * vehicle.mtow},
        )

    mocker.patch("fastsize.sizing.driver.fly_mission", side_effect=fly)
    spec = make_spec(payload_mass=10_000.0, empty_weight_fraction=0.5)
    return size_aircraft(spec, cruise_profile, turboprop_chain, bundled_db).aircraft
