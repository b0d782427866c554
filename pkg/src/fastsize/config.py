"""Runtime configuration.

The engine is configured almost entirely through its input documents and
command-line flags. The only environment variable honored is
``FASTSIZE_DB``, pointing at a historical database directory (holding
``aircraft.csv`` and ``engines.csv``) or a single CSV file. A ``.env`` file in
the working directory is read first.

Example:
    >>> settings = Settings.from_env()
    >>> settings.database_path.name
    'data'
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from dotenv import find_dotenv, load_dotenv
from pydantic import BaseModel, ConfigDict, Field

DB_ENV_VAR = "FASTSIZE_DB"


def bundled_data_dir() -> Path:
    """Return the directory holding the bundled database and examples."""
    return Path(str(resources.files("fastsize") / "data"))


def bundled_examples_dir() -> Path:
    """Return the directory holding the bundled example documents."""
    return bundled_data_dir() / "examples"


class Settings(BaseModel):
    """Resolved runtime settings.

    Attributes:
        database_path: Database directory or CSV file used for regressions.
        database_overridden: True when ``FASTSIZE_DB`` supplied the path.
    """

    database_path: Path = Field(..., description="Historical database directory or CSV file")
    database_overridden: bool = Field(
        default=False, description="Whether FASTSIZE_DB overrode the bundled database"
    )

    model_config = ConfigDict(frozen=True)

    @classmethod
    def from_env(cls, *, load_env_file: bool = True) -> Settings:
        """Build settings from the environment.

        Args:
            load_env_file: Read a ``.env`` file before looking up variables.

        Returns:
            Settings with the database path resolved.
        """
        if load_env_file:
            load_dotenv(find_dotenv(usecwd=True))
        override = os.getenv(DB_ENV_VAR)
        if override:
            return cls(database_path=Path(override).expanduser(), database_overridden=True)
        return cls(database_path=bundled_data_dir())
