"""Fixtures for command-line tests."""

from pathlib import Path

import pytest

from fastsize.mission import MissionHistory, MissionSample, write_history_csv


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Run from an empty directory with no database override."""
    monkeypatch.delenv("FASTSIZE_DB", raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def history_csv(tmp_path: Path) -> Path:
    """Short climbing history over one fuel tank, written as CSV."""
    samples = [
        MissionSample(
            time=10.0 * i,
            distance=1000.0 * i,
            altitude=50.0 * i,
            tas=100.0,
            mass=10_000.0 - i,
            cl=0.6,
            drag=9.0e3,
            thrust=1.1e4,
            gamma=0.05,
            power=(1.1e6, 1.1e6),
            energy=(4.3e7 * i,),
        )
        for i in range(5)
    ]
    path = tmp_path / "history.csv"
    write_history_csv(MissionHistory(("fuel", "prop"), ("fuel",), samples), path)
    return path
