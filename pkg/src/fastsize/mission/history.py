"""Mission history records and CSV exchange.

A history is the time-ordered list of samples taken at the end of every
integration step. The CSV layout is fixed: the state and force columns first,
then one ``p_<component>_w`` column per component (rating power; draw for
sources) and one ``e_<source>_j`` column per source (cumulative energy drawn).
Values are written with 9 significant digits.
"""

from __future__ import annotations

import io
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from ..exceptions import InputError, MissionError

STATE_COLUMNS: tuple[str, ...] = (
    "time_s",
    "distance_m",
    "altitude_m",
    "tas_ms",
    "mass_kg",
    "cl",
    "drag_n",
    "thrust_n",
    "gamma_rad",
)

FLOAT_FORMAT = "%.9g"


@dataclass(frozen=True, slots=True)
class MissionSample:
    """State and forces at the end of one integration step.

    ``cl``, ``drag``, ``thrust``, ``gamma`` and the powers are those applied
    over the step; ``energy`` is cumulative per source.
    """

    time: float
    distance: float
    altitude: float
    tas: float
    mass: float
    cl: float
    drag: float
    thrust: float
    gamma: float
    power: tuple[float, ...]
    energy: tuple[float, ...]
    segment_index: int = -1

    def row(self) -> list[float]:
        """Values in CSV column order."""
        return [
            self.time,
            self.distance,
            self.altitude,
            self.tas,
            self.mass,
            self.cl,
            self.drag,
            self.thrust,
            self.gamma,
            *self.power,
            *self.energy,
        ]


@dataclass
class MissionHistory:
    """Ordered samples of one flight.

    Attributes:
        component_ids: Components whose powers are recorded, in order.
        source_ids: Sources whose cumulative energies are recorded, in order.
        samples: Samples in time order.
    """

    component_ids: tuple[str, ...]
    source_ids: tuple[str, ...]
    samples: list[MissionSample] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def columns(self) -> list[str]:
        """CSV column names in order."""
        return [
            *STATE_COLUMNS,
            *(f"p_{component_id}_w" for component_id in self.component_ids),
            *(f"e_{source_id}_j" for source_id in self.source_ids),
        ]

    def to_frame(self) -> pd.DataFrame:
        """Return the history as a DataFrame with the CSV columns."""
        data = np.array([sample.row() for sample in self.samples], dtype=float)
        columns = self.columns
        return pd.DataFrame(data.reshape(len(self.samples), len(columns)), columns=columns)

    def column(self, name: str) -> np.ndarray:
        """Return one CSV column as an array."""
        position = self.columns.index(name)
        return np.array([sample.row()[position] for sample in self.samples], dtype=float)

    def check_invariants(self) -> None:
        """Assert time, mass and energy monotonicity.

        Raises:
            MissionError: Time not strictly increasing, mass increasing or a
                cumulative energy decreasing between consecutive samples.
        """
        for previous, sample in zip(self.samples, self.samples[1:], strict=False):
            if not sample.time > previous.time:
                msg = f"history time not strictly increasing at t={sample.time:g} s"
                raise MissionError(msg, segment_index=sample.segment_index)
            if sample.mass > previous.mass:
                msg = f"history mass increases at t={sample.time:g} s"
                raise MissionError(msg, segment_index=sample.segment_index)
            for source_id, before, after in zip(
                self.source_ids, previous.energy, sample.energy, strict=True
            ):
                if after < before:
                    msg = f"cumulative energy of '{source_id}' decreases at t={sample.time:g} s"
                    raise MissionError(msg, segment_index=sample.segment_index)


def history_to_csv(history: MissionHistory) -> str:
    """Render a history as CSV text."""
    buffer = io.StringIO()
    history.to_frame().to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def write_history_csv(history: MissionHistory, path: Path | str) -> None:
    """Write a history CSV file."""
    Path(path).write_text(history_to_csv(history), encoding="utf-8", newline="")


def _split_columns(columns: Sequence[str]) -> tuple[list[str], list[str]]:
    if list(columns[: len(STATE_COLUMNS)]) != list(STATE_COLUMNS):
        msg = f"history CSV must start with columns {', '.join(STATE_COLUMNS)}"
        raise InputError(msg)
    components: list[str] = []
    sources: list[str] = []
    for name in columns[len(STATE_COLUMNS) :]:
        if name.startswith("p_") and name.endswith("_w") and not sources:
            components.append(name[2:-2])
        elif name.startswith("e_") and name.endswith("_j"):
            sources.append(name[2:-2])
        else:
            msg = f"unexpected history column '{name}'"
            raise InputError(msg)
    return components, sources


def read_history_csv(path: Path | str) -> MissionHistory:
    """Read a history CSV file written by ``write_history_csv``.

    Raises:
        InputError: The file cannot be read or has an unexpected layout.
    """
    try:
        frame = pd.read_csv(path, dtype=float)
    except (OSError, ValueError, pd.errors.ParserError) as e:
        msg = f"cannot read history {path}: {e}"
        raise InputError(msg) from e
    components, sources = _split_columns(list(frame.columns))
    n_state, n_power = len(STATE_COLUMNS), len(components)
    samples = [
        MissionSample(
            *(float(value) for value in row[:n_state]),
            power=tuple(float(value) for value in row[n_state : n_state + n_power]),
            energy=tuple(float(value) for value in row[n_state + n_power :]),
        )
        for row in frame.to_numpy(dtype=float)
    ]
    return MissionHistory(tuple(components), tuple(sources), samples)
