"""Exception hierarchy for the fastsize sizing engine.

Every error raised on purpose by the engine derives from ``FastSizeError``, so
callers can catch one type at the boundary. The families follow the package
layout and drive the exit codes of the command-line front end.

Exception Hierarchy:
    FastSizeError (base)
    ├── InputError (documents, units, invariants)
    │   ├── DocumentParseError (malformed document, unknown key)
    │   ├── UnitError (unknown or incompatible unit suffix)
    │   └── ConstraintError (a type invariant does not hold)
    ├── RegressionError (historical data and regressions)
    │   ├── DatabaseError (malformed CSV, bad cell, negative value)
    │   ├── InsufficientDataError (too few usable rows)
    │   └── SingularSystemError (collinear inputs, unfactorable kernel)
    ├── ArchitectureError (propulsion graph)
    │   └── CycleError (graph is not acyclic)
    ├── PowerFlowError (invalid split or demand during propagation)
    ├── MissionError (flight infeasibility)
    │   ├── StallError
    │   ├── FuelExhaustedError
    │   └── BatteryDepletedError
    ├── SizingError (fixed-point driver)
    │   ├── NonConvergenceError
    │   ├── DivergenceError
    │   └── InfeasibleDecompositionError
    └── GeometryError
        └── ExportError

Usage:
    >>> from fastsize.exceptions import FuelExhaustedError
    >>> try:
    ...     result = fly_mission(vehicle, profile, architecture)
    ... except FuelExhaustedError as e:
    ...     print(f"Out of {e.source_id} in segment {e.segment_index}")
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any


class FastSizeError(Exception):
    """Base exception for all fastsize errors.

    Example:
        >>> try:
        ...     size_aircraft(spec, profile, architecture, database)
        ... except FastSizeError as e:
        ...     report(e)
    """


# ---------------------------------------------------------------------------
# Input documents
# ---------------------------------------------------------------------------


class InputError(FastSizeError):
    """Input document could not be turned into a valid domain object."""


class DocumentParseError(InputError):
    """Document is malformed or contains an unknown key.

    Args:
        message: Human-readable description.
        key: Offending key, if known.
        line: 1-based line number in the document, if known.

    Attributes:
        key: Offending key, or None.
        line: Line number, or None.
    """

    def __init__(self, message: str, key: str | None = None, line: int | None = None) -> None:
        """Initialize with message and optional key/line context."""
        super().__init__(message)
        self.key = key
        self.line = line


class UnitError(InputError):
    """Quantity carries an unknown unit or one of the wrong dimension.

    Args:
        message: Human-readable description.
        key: Key whose value could not be converted.
    """

    def __init__(self, message: str, key: str) -> None:
        """Initialize with the offending key."""
        super().__init__(message)
        self.key = key


class ConstraintError(InputError):
    """A type invariant does not hold.

    Args:
        message: Description naming the failed invariant.
        invariant: Short identifier of the invariant, if available.
    """

    def __init__(self, message: str, invariant: str | None = None) -> None:
        """Initialize with the failed invariant."""
        super().__init__(message)
        self.invariant = invariant


# ---------------------------------------------------------------------------
# Regression
# ---------------------------------------------------------------------------


class RegressionError(FastSizeError):
    """Regression could not be built or evaluated."""


class DatabaseError(RegressionError):
    """Historical database file is malformed.

    Args:
        message: Human-readable description.
        row: 1-based data row number (header excluded), if known.
        column: Offending column, if known.
    """

    def __init__(
        self,
        message: str,
        row: int | None = None,
        column: str | None = None,
    ) -> None:
        """Initialize with row/column context."""
        super().__init__(message)
        self.row = row
        self.column = column


class InsufficientDataError(RegressionError):
    """Fewer usable rows than the regression needs."""


class SingularSystemError(RegressionError):
    """Normal equations or kernel system cannot be solved."""


# ---------------------------------------------------------------------------
# Powertrain
# ---------------------------------------------------------------------------


class ArchitectureError(FastSizeError):
    """Propulsion architecture violates a graph invariant."""


class CycleError(ArchitectureError):
    """Connection graph contains a cycle.

    Args:
        message: Human-readable description.
        cycle: Component ids along the cycle, first id repeated at the end.
    """

    def __init__(self, message: str, cycle: Sequence[str]) -> None:
        """Initialize with the cycle's node list."""
        super().__init__(message)
        self.cycle = tuple(cycle)


class PowerFlowError(FastSizeError):
    """Power propagation received an invalid split or demand."""


# ---------------------------------------------------------------------------
# Mission
# ---------------------------------------------------------------------------


class MissionError(FastSizeError):
    """Mission cannot be flown as specified.

    Args:
        message: Human-readable description.
        segment_index: 0-based index of the failing segment in flight order
            (design segments first, then reserves), if known.
        source_id: Energy source involved, if any.
    """

    def __init__(
        self,
        message: str,
        segment_index: int | None = None,
        source_id: str | None = None,
    ) -> None:
        """Initialize with segment and source context."""
        super().__init__(message)
        self.segment_index = segment_index
        self.source_id = source_id

    def at_segment(self, index: int) -> MissionError:
        """Return a copy of this error annotated with a segment index."""
        msg = f"segment {index}: {self}"
        return type(self)(msg, segment_index=index, source_id=self.source_id)


class StallError(MissionError):
    """Required lift coefficient exceeds the maximum lift coefficient."""


class FuelExhaustedError(MissionError):
    """A consumable source ran dry."""


class BatteryDepletedError(MissionError):
    """A battery fell below its usable depth-of-discharge floor."""


# ---------------------------------------------------------------------------
# Sizing
# ---------------------------------------------------------------------------


class SizingError(FastSizeError):
    """Fixed-point sizing failed."""


class NonConvergenceError(SizingError):
    """MTOW did not converge within the iteration budget.

    Args:
        message: Human-readable description.
        iterations: Iteration log gathered before giving up.
    """

    def __init__(self, message: str, iterations: Sequence[Any] = ()) -> None:
        """Initialize with the iteration log."""
        super().__init__(message)
        self.iterations = list(iterations)


class DivergenceError(NonConvergenceError):
    """MTOW blew up (NaN or more than ten times the initial guess)."""


class InfeasibleDecompositionError(SizingError):
    """Propulsion masses exceed the empty-weight allowance."""


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------


class GeometryError(FastSizeError):
    """Wireframe cannot be generated from the given template."""


class ExportError(GeometryError):
    """Wireframe cannot be exported in the requested format."""
