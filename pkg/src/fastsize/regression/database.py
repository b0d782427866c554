"""Historical aircraft and engine database.

Two tables ship with the package, ``aircraft.csv`` and ``engines.csv``. Column
names are snake_case with a unit suffix (``mtow_kg``, ``rated_power_w``),
values are SI, and an empty cell means "not known". ``name`` and ``type`` are
text; every other column is numeric.

Values are approximate public figures, sufficient for conceptual regressions
and nothing more.
"""

from __future__ import annotations

import hashlib
import io
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from ..exceptions import DatabaseError, InsufficientDataError

logger = logging.getLogger(__name__)

TEXT_COLUMNS = frozenset({"name", "type"})


@dataclass(frozen=True, slots=True)
class ColumnInfo:
    """Unit and meaning of one database column."""

    unit: str
    description: str


SCHEMA: Mapping[str, Mapping[str, ColumnInfo]] = {
    "aircraft": {
        "name": ColumnInfo("", "Aircraft type designation"),
        "type": ColumnInfo("", "Class: turboprop, turbofan, piston or electric"),
        "mtow_kg": ColumnInfo("kg", "Maximum takeoff mass"),
        "empty_mass_kg": ColumnInfo("kg", "Operating empty mass"),
        "payload_kg": ColumnInfo("kg", "Design payload"),
        "range_m": ColumnInfo("m", "Range at design payload"),
        "wing_area_m2": ColumnInfo("m²", "Wing reference area"),
        "wingspan_m": ColumnInfo("m", "Wing span"),
        "length_m": ColumnInfo("m", "Overall length"),
        "installed_power_w": ColumnInfo("W", "Total installed shaft power"),
        "installed_thrust_n": ColumnInfo("N", "Total installed static thrust"),
        "cruise_speed_ms": ColumnInfo("m/s", "Typical cruise true airspeed"),
    },
    "engines": {
        "name": ColumnInfo("", "Engine designation"),
        "type": ColumnInfo("", "Class: turboprop, turboshaft or turbofan"),
        "rated_power_w": ColumnInfo("W", "Takeoff shaft power rating"),
        "rated_thrust_n": ColumnInfo("N", "Takeoff static thrust rating"),
        "dry_mass_kg": ColumnInfo("kg", "Dry engine mass"),
        "psfc_kgpj": ColumnInfo("kg/J", "Power-specific fuel consumption at rating"),
    },
}

KEY_COLUMNS: Mapping[str, tuple[str, ...]] = {
    "aircraft": ("mtow_kg",),
    "engines": ("rated_power_w", "rated_thrust_n"),
}
"""A row is kept when at least one of its table's key columns is present."""

DERIVED: Mapping[str, Mapping[str, ColumnInfo]] = {
    "aircraft": {
        "empty_weight_fraction": ColumnInfo("", "empty_mass_kg / mtow_kg"),
    },
}


@dataclass(eq=False)
class HistoricalDatabase:
    """Loaded database tables.

    Attributes:
        tables: One DataFrame per table, numeric columns as float (NaN when
            missing), text columns as str.
        fingerprint: sha256 of the source bytes; part of every cache key.
        dropped: Rows dropped per table for lack of a key column.
        source: Where the tables were read from.
    """

    tables: dict[str, pd.DataFrame]
    fingerprint: str
    dropped: dict[str, int] = field(default_factory=dict)
    source: str = ""

    def table(self, name: str) -> pd.DataFrame:
        """Return one table.

        Raises:
            DatabaseError: The table was not loaded.
        """
        try:
            return self.tables[name]
        except KeyError:
            msg = f"database has no '{name}' table (loaded: {', '.join(sorted(self.tables))})"
            raise DatabaseError(msg) from None

    def column_info(self, table: str, column: str) -> ColumnInfo:
        """Unit and description of a column (derived columns included)."""
        info = {**SCHEMA.get(table, {}), **DERIVED.get(table, {})}
        try:
            return info[column]
        except KeyError:
            msg = f"table '{table}' has no column '{column}'"
            raise DatabaseError(msg, column=column) from None

    def table_of(self, columns: Iterable[str]) -> str:
        """Name of the single loaded table holding all ``columns``.

        Raises:
            DatabaseError: No loaded table, or more than one, has them all.
        """
        wanted = set(columns)
        matches = [name for name, frame in self.tables.items() if wanted <= set(frame.columns)]
        if len(matches) != 1:
            where = "no table" if not matches else f"tables {', '.join(sorted(matches))}"
            msg = f"{where} hold columns {', '.join(sorted(wanted))}; name the table"
            raise DatabaseError(msg)
        return matches[0]

    def usable_rows(
        self,
        table: str,
        columns: Sequence[str],
        *,
        where: Mapping[str, str] | None = None,
    ) -> pd.DataFrame:
        """Rows with every column present and strictly positive.

        Args:
            table: Table name.
            columns: Numeric columns required.
            where: Exact-match filter on text columns, e.g. ``{"type": "turboprop"}``.

        Raises:
            DatabaseError: Unknown table or column.
        """
        frame = self.table(table)
        for column in [*columns, *(where or {})]:
            if column not in frame.columns:
                msg = f"table '{table}' has no column '{column}'"
                raise DatabaseError(msg, column=column)
        mask = np.ones(len(frame), dtype=bool)
        for column, value in (where or {}).items():
            mask &= (frame[column] == value).to_numpy()
        for column in columns:
            values = frame[column].to_numpy(dtype=float)
            mask &= np.isfinite(values) & (values > 0)
        return frame.loc[mask, list(columns)]


def _infer_table(columns: Sequence[str], path: Path) -> str:
    for name in ("aircraft", "engines"):
        if any(key in columns for key in KEY_COLUMNS[name]):
            return name
    msg = f"{path}: cannot tell which table this is (no {', '.join(KEY_COLUMNS)} key column)"
    raise DatabaseError(msg)


def _read_table(path: Path, raw: bytes, table: str | None = None) -> tuple[str, pd.DataFrame, int]:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        msg = f"{path}: not UTF-8 ({e})"
        raise DatabaseError(msg) from e
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        msg = f"{path}: no records"
        raise DatabaseError(msg) from None
    except pd.errors.ParserError as e:
        msg = f"{path}: malformed CSV ({e})"
        raise DatabaseError(msg) from e
    if frame.empty:
        msg = f"{path}: no records"
        raise DatabaseError(msg)

    name = table or _infer_table(list(frame.columns), path)
    schema = SCHEMA[name]
    for column in frame.columns:
        if column not in schema:
            msg = f"{path}: unknown column '{column}' in {name} table"
            raise DatabaseError(msg, column=column)

    out = pd.DataFrame(index=frame.index)
    for column in frame.columns:
        cells = frame[column].str.strip()
        if column in TEXT_COLUMNS:
            out[column] = cells
            continue
        numeric = pd.to_numeric(cells.replace("", np.nan), errors="coerce")
        bad = numeric.isna() & (cells != "")
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0]) + 1
            value = cells[bad].iloc[0]
            msg = f"{path}: non-numeric value {value!r} in column '{column}', row {row}"
            raise DatabaseError(msg, row=row, column=column)
        negative = numeric < 0
        if negative.any():
            row = int(np.flatnonzero(negative.to_numpy())[0]) + 1
            msg = f"{path}: negative value in column '{column}', row {row}"
            raise DatabaseError(msg, row=row, column=column)
        out[column] = numeric.astype(float)

    keys = [key for key in KEY_COLUMNS[name] if key in out.columns]
    if not keys:
        msg = f"{path}: {name} table lacks key column {' or '.join(KEY_COLUMNS[name])}"
        raise DatabaseError(msg)
    keep = out[keys].notna().any(axis=1)
    dropped = int((~keep).sum())
    if dropped:
        logger.warning("%s: dropped %d row(s) without %s", path, dropped, " or ".join(keys))
    out = out.loc[keep].reset_index(drop=True)
    if name == "aircraft" and {"empty_mass_kg", "mtow_kg"} <= set(out.columns):
        out["empty_weight_fraction"] = out["empty_mass_kg"] / out["mtow_kg"]
    return name, out, dropped


def load_database(path: Path | str) -> HistoricalDatabase:
    """Load a database directory or a single table CSV.

    A directory must hold ``aircraft.csv`` and/or ``engines.csv``. A single
    file is assigned to a table by its key columns.

    Args:
        path: Directory or CSV file.

    Returns:
        Loaded tables with a content fingerprint.

    Raises:
        DatabaseError: Missing file, no records, malformed CSV, unknown
            column, non-numeric cell or negative value (row number named).

    Example:
        >>> db = load_database(bundled_data_dir())
        >>> len(db.table("aircraft")) >= 25
        True
    """
    root = Path(path)
    if root.is_dir():
        candidates = [(name, root / f"{name}.csv") for name in SCHEMA]
        files: list[tuple[str | None, Path]] = [(n, f) for n, f in candidates if f.is_file()]
        if not files:
            msg = f"{root}: no aircraft.csv or engines.csv"
            raise DatabaseError(msg)
    elif root.is_file():
        files = [(None, root)]
    else:
        msg = f"database not found: {root}"
        raise DatabaseError(msg)

    digest = hashlib.sha256()
    tables: dict[str, pd.DataFrame] = {}
    dropped: dict[str, int] = {}
    for table, file in files:
        raw = file.read_bytes()
        digest.update(file.name.encode())
        digest.update(raw)
        name, frame, count = _read_table(file, raw, table)
        tables[name] = frame
        dropped[name] = count
    logger.debug(
        "loaded database %s: %s",
        root,
        ", ".join(f"{name}={len(frame)}" for name, frame in tables.items()),
    )
    return HistoricalDatabase(tables, digest.hexdigest(), dropped, str(root))


def training_arrays(
    db: HistoricalDatabase,
    inputs: Sequence[str],
    output: str,
    *,
    table: str | None = None,
    where: Mapping[str, str] | None = None,
    minimum: int = 3,
) -> tuple[np.ndarray, np.ndarray]:
    """Extract positive training rows as ``(X, y)`` arrays.

    Raises:
        InsufficientDataError: Fewer than ``minimum`` usable rows.
        DatabaseError: Unknown table or column.
    """
    columns = [*inputs, output]
    name = table or db.table_of(columns)
    rows = db.usable_rows(name, columns, where=where)
    if len(rows) < minimum:
        condition = f" where {where}" if where else ""
        msg = (
            f"insufficient data: {len(rows)} usable row(s) in '{name}'{condition} "
            f"for {output} ~ {', '.join(inputs)} (need {minimum})"
        )
        raise InsufficientDataError(msg)
    return rows[list(inputs)].to_numpy(dtype=float), rows[output].to_numpy(dtype=float)
