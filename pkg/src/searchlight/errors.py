"""Exceptions and warnings raised throughout the library."""

from __future__ import annotations

import typing as t

__all__ = (
    "SearchlightError",
    "ValidationError",
    "SpaceMismatchError",
    "ConvergenceError",
    "ScenarioError",
    "UnknownReferenceError",
    "TruthOutsideSupportWarning",
)


class SearchlightError(Exception):
    """Base class for all errors raised by this library."""


class ValidationError(SearchlightError, ValueError):
    """One or more domain invariants were violated.

    Attributes:
        report: The [`ValidationReport`][searchlight.domain.ValidationReport] which
                lists every violation.
    """

    def __init__(self, report: t.Any):
        self.report = report
        super().__init__("; ".join(report.violations) or "invalid scenario")


class SpaceMismatchError(SearchlightError, ValueError):
    """Two values which must share a search space do not."""


class ConvergenceError(SearchlightError, ArithmeticError):
    """A numeric root-finder failed to reach its tolerance.

    Attributes:
        bracket: The last `(low, high)` bracket examined.
        iterations: The number of iterations performed.
        residual: The residual at the best point found.
    """

    def __init__(
        self,
        msg: str,
        *,
        bracket: tuple[float, float],
        iterations: int,
        residual: float,
    ):
        self.bracket = bracket
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"{msg} (bracket={bracket!r}, iterations={iterations}, residual={residual:.3e})"
        )


class ScenarioError(SearchlightError, ValueError):
    """A scenario file could not be parsed or is structurally invalid.

    Attributes:
        path: The dotted key path at which the problem was found.
        line: The line of a JSON parse error, if any.
        column: The column of a JSON parse error, if any.
    """

    def __init__(
        self,
        msg: str,
        *,
        path: str = "",
        line: int | None = None,
        column: int | None = None,
    ):
        self.path = path
        self.line = line
        self.column = column
        where = f" at {path!r}" if path else ""
        if line is not None:
            where += f" (line {line}, column {column})"
        super().__init__(f"{msg}{where}")


class UnknownReferenceError(SearchlightError, KeyError):
    """A closed-form reference or bundled scenario was requested by an unknown id."""


class TruthOutsideSupportWarning(UserWarning):
    """The ground-truth location carries zero prior mass."""
