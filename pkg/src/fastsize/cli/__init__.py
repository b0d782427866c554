"""Command-line front end.

Subcommands: ``size``, ``fly``, ``predict``, ``plot`` and ``viz``. Run
``fastsize --help`` for the flag reference.
"""

from .app import ExitCode, build_parser, exit_code_for, main
from .manifest import RunManifest, build_manifest, sha256_of
from .plotting import render_history_svg

__all__ = [
    "ExitCode",
    "RunManifest",
    "build_manifest",
    "build_parser",
    "exit_code_for",
    "main",
    "render_history_svg",
    "sha256_of",
]
