"""Tests for loading the historical database."""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from fastsize.exceptions import DatabaseError, InsufficientDataError
from fastsize.regression import HistoricalDatabase, load_database, training_arrays

AIRCRAFT_HEADER = "name,type,mtow_kg,empty_mass_kg,payload_kg,range_m\n"


class TestLoadDatabase:
    """Tests for load_database."""

    @pytest.mark.unit
    def test_bundled_tables(self, bundled_db: HistoricalDatabase) -> None:
        """Test both bundled tables load with the derived fraction."""
        # Act
        aircraft = bundled_db.table("aircraft")
        engines = bundled_db.table("engines")

        # Assert
        assert len(aircraft) >= 25
        assert len(engines) >= 20
        fractions = aircraft["empty_weight_fraction"].dropna()
        assert ((fractions > 0.3) & (fractions < 0.8)).all()
        assert set(aircraft["type"]) == {"turboprop", "turbofan"}

    @pytest.mark.unit
    def test_single_file_table_inferred(self, write_doc: Callable[[str, str], Path]) -> None:
        """Test a single CSV is assigned to its table by key column."""
        # Arrange
        path = write_doc("fleet.csv", AIRCRAFT_HEADER + "A,turboprop,10000,6000,2000,1000000\n")

        # Act
        db = load_database(path)

        # Assert
        assert list(db.tables) == ["aircraft"]
        assert db.table("aircraft")["empty_weight_fraction"].iloc[0] == pytest.approx(0.6)

    @pytest.mark.unit
    def test_negative_value_names_row(self, write_doc: Callable[[str, str], Path]) -> None:
        """Test a negative cell is rejected with its row and column."""
        # Arrange
        path = write_doc(
            "fleet.csv",
            AIRCRAFT_HEADER
            + "A,turboprop,10000,6000,2000,1000000\nB,turboprop,12000,-1,2500,900000\n",
        )

        # Act / Assert
        with pytest.raises(DatabaseError, match="row 2") as exc_info:
            load_database(path)
        assert exc_info.value.row == 2
        assert exc_info.value.column == "empty_mass_kg"

    @pytest.mark.unit
    def test_non_numeric_value(self, write_doc: Callable[[str, str], Path]) -> None:
        """Test a non-numeric cell is rejected."""
        # Arrange
        path = write_doc("fleet.csv", AIRCRAFT_HEADER + "A,turboprop,heavy,6000,2000,1000000\n")

        # Act / Assert
        with pytest.raises(DatabaseError, match="non-numeric value 'heavy'"):
            load_database(path)

    @pytest.mark.unit
    def test_unknown_column(self, write_doc: Callable[[str, str], Path]) -> None:
        """Test columns outside the schema are rejected."""
        # Arrange
        path = write_doc("fleet.csv", "name,mtow_kg,colour\nA,10000,red\n")

        # Act / Assert
        with pytest.raises(DatabaseError, match="unknown column 'colour'"):
            load_database(path)

    @pytest.mark.unit
    def test_header_only(self, write_doc: Callable[[str, str], Path]) -> None:
        """Test a file without records is rejected."""
        # Arrange
        path = write_doc("fleet.csv", AIRCRAFT_HEADER)

        # Act / Assert
        with pytest.raises(DatabaseError, match="no records"):
            load_database(path)

    @pytest.mark.unit
    def test_rows_without_key_dropped(self, write_doc: Callable[[str, str], Path]) -> None:
        """Test rows lacking the key column are dropped and counted."""
        # Arrange
        path = write_doc(
            "fleet.csv",
            AIRCRAFT_HEADER
            + "A,turboprop,10000,6000,2000,1000000\nB,turboprop,,5000,1500,800000\n",
        )

        # Act
        db = load_database(path)

        # Assert
        assert len(db.table("aircraft")) == 1
        assert db.dropped == {"aircraft": 1}

    @pytest.mark.unit
    def test_missing_path(self, tmp_path: Path) -> None:
        """Test a missing path is a database error."""
        # Act / Assert
        with pytest.raises(DatabaseError, match="database not found"):
            load_database(tmp_path / "nowhere")

    @pytest.mark.unit
    def test_empty_directory(self, tmp_path: Path) -> None:
        """Test a directory without table files is rejected."""
        # Act / Assert
        with pytest.raises(DatabaseError, match="no aircraft.csv or engines.csv"):
            load_database(tmp_path)

    @pytest.mark.unit
    def test_fingerprint_tracks_content(self, write_doc: Callable[[str, str], Path]) -> None:
        """Test editing a file changes the fingerprint."""
        # Arrange
        row = "A,turboprop,10000,6000,2000,1000000\n"
        first = load_database(write_doc("fleet.csv", AIRCRAFT_HEADER + row))

        # Act
        edited = AIRCRAFT_HEADER + row.replace("6000", "6100")
        second = load_database(write_doc("fleet.csv", edited))

        # Assert
        assert first.fingerprint != second.fingerprint


class TestTrainingArrays:
    """Tests for training_arrays."""

    @pytest.mark.unit
    def test_positive_rows_only(self, bundled_db: HistoricalDatabase) -> None:
        """Test the extracted rows are complete and positive."""
        # Act
        X, y = training_arrays(bundled_db, ["rated_power_w"], "dry_mass_kg")

        # Assert
        assert X.shape == (len(y), 1)
        assert np.all(X > 0)
        assert np.all(y > 0)

    @pytest.mark.unit
    def test_filter_by_type(self, bundled_db: HistoricalDatabase) -> None:
        """Test the type filter keeps only matching rows."""
        # Act
        X_all, _ = training_arrays(bundled_db, ["payload_kg"], "mtow_kg", table="aircraft")
        X_tp, _ = training_arrays(
            bundled_db, ["payload_kg"], "mtow_kg", table="aircraft", where={"type": "turboprop"}
        )

        # Assert
        assert 3 <= len(X_tp) < len(X_all)

    @pytest.mark.unit
    def test_insufficient_rows(self, bundled_db: HistoricalDatabase) -> None:
        """Test a filter with no matching rows raises."""
        # Act / Assert
        with pytest.raises(InsufficientDataError, match="insufficient data: 0 usable row"):
            training_arrays(
                bundled_db, ["payload_kg"], "mtow_kg", table="aircraft", where={"type": "glider"}
            )

    @pytest.mark.unit
    def test_unknown_column(self, bundled_db: HistoricalDatabase) -> None:
        """Test an unknown column is a database error."""
        # Act / Assert
        with pytest.raises(DatabaseError):
            training_arrays(bundled_db, ["payload_kg"], "colour", table="aircraft")
