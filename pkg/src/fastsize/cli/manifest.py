"""Run manifests.

Every successful command leaves a ``manifest.json`` next to its outputs: the
inputs with their content hashes, the tool version, the options in effect,
start and finish times and the files written. Hashes are taken when the
manifest is written, so a later edit of an input shows up as a mismatch.
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterable, Mapping
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from .. import __version__
from ..exceptions import InputError

UTC = timezone.utc


def sha256_of(path: Path | str) -> str:
    """Hex sha256 of a file's content.

    Raises:
        InputError: The file cannot be read.
    """
    digest = hashlib.sha256()
    try:
        with Path(path).open("rb") as handle:
            for chunk in iter(lambda: handle.read(1 << 16), b""):
                digest.update(chunk)
    except OSError as e:
        msg = f"cannot hash {path}: {e}"
        raise InputError(msg) from e
    return digest.hexdigest()


def utc_now() -> datetime:
    """Current time, UTC."""
    return datetime.now(UTC)


class InputRecord(BaseModel):
    """One input file and its content hash."""

    role: str = Field(..., description="What the file is (aircraft, mission, ...)")
    path: str = Field(..., description="Path as given on the command line")
    sha256: str = Field(..., min_length=64, max_length=64, description="Content hash")

    model_config = ConfigDict(frozen=True)


class RunManifest(BaseModel):
    """Provenance of one command run.

    Attributes:
        command: Subcommand name.
        version: fastsize version.
        inputs: Input files with content hashes.
        options: Options in effect.
        started_at: Start time, UTC.
        finished_at: Finish time, UTC.
        outputs: Files written, relative to the output directory.
    """

    command: str = Field(..., description="Subcommand name")
    version: str = Field(__version__, description="fastsize version")
    inputs: list[InputRecord] = Field(default_factory=list)
    options: dict[str, Any] = Field(default_factory=dict)
    started_at: datetime
    finished_at: datetime
    outputs: list[str] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    def verify_inputs(self) -> list[str]:
        """Inputs whose current content no longer matches the recorded hash."""
        return [
            record.path
            for record in self.inputs
            if not Path(record.path).is_file() or sha256_of(record.path) != record.sha256
        ]


def build_manifest(
    command: str,
    inputs: Mapping[str, Path | str | None],
    options: Mapping[str, Any],
    outputs: Iterable[str],
    started_at: datetime,
) -> RunManifest:
    """Assemble a manifest; ``None`` inputs are skipped."""
    records = [
        InputRecord(role=role, path=str(path), sha256=sha256_of(path))
        for role, path in inputs.items()
        if path is not None
    ]
    return RunManifest(
        command=command,
        inputs=records,
        options={key: _jsonable(value) for key, value in options.items()},
        started_at=started_at,
        finished_at=utc_now(),
        outputs=sorted(outputs),
    )


def _jsonable(value: object) -> object:
    if isinstance(value, Path):
        return str(value)
    return value


def write_manifest(manifest: RunManifest, path: Path | str) -> None:
    """Write a manifest as JSON."""
    Path(path).write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
