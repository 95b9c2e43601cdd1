"""Constants and tolerance defaults used throughout the library."""

from __future__ import annotations

import dataclasses
import typing as t

from searchlight.py import compat

__all__ = (
    "DEFAULT_ENCODING",
    "PKG_NAME",
    "OUTPUT_DIR_ENV",
    "DEFAULT_OUTPUT_DIR",
    "DEFAULT_CURVE_SAMPLES",
    "DEFAULT_TRUNCATION",
    "CSV_SIGNIFICANT_DIGITS",
    "RNG_ALGORITHM",
    "MONTE_CARLO_CHUNK",
    "SCENARIO_VERSION",
    "Tolerances",
    "DEFAULT_TOLERANCES",
)


DEFAULT_ENCODING: t.Final[str] = "utf-8"
PKG_NAME: t.Final[str] = __name__.split(".", maxsplit=1)[0]
OUTPUT_DIR_ENV: t.Final[str] = "SEARCHLIGHT_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR: t.Final[str] = "searchlight-out"
DEFAULT_CURVE_SAMPLES: t.Final[int] = 400
DEFAULT_TRUNCATION: t.Final[float] = 6.0
"""Unbounded supports are truncated at this many standard deviations."""
CSV_SIGNIFICANT_DIGITS: t.Final[int] = 17
RNG_ALGORITHM: t.Final[str] = "Philox"
MONTE_CARLO_CHUNK: t.Final[int] = 1 << 16
SCENARIO_VERSION: t.Final[int] = 1


@dataclasses.dataclass(frozen=True, slots=True)
class Tolerances:
    """Every numeric tolerance used by the library, in one place.

    Relative tolerances are scaled as documented on each field. Override individual
    fields with [`replace`][searchlight.constants.Tolerances.replace].
    """

    mass: float = 1e-9
    """Total prior probability must equal 1 within this."""
    mixture_weights: float = 1e-12
    """Mixture weights must sum to 1 within this."""
    budget: float = 1e-9
    """Allocated cost must equal the budget within `budget * max(1, K)`."""
    kkt: float = 1e-8
    """Funded marginal rates must equal λ* within `kkt * λ*`."""
    solve: float = 1e-12
    """Relative target for `Q(λ*) = K` in the bisection solver."""
    max_iterations: int = 200
    inverse: float = 1e-9
    """`deriv_inverse(deriv(y))` must reproduce `y` within this."""
    finite_difference: float = 1e-6
    """Relative agreement of analytic derivatives with a centered difference."""
    feasibility: float = 1e-9
    """Plan cost must equal `E(t)` within `feasibility * max(1, E(t))`."""

    def replace(self, **overrides: t.Any) -> compat.Self:
        """Return a copy of these tolerances with the given fields overridden."""
        return dataclasses.replace(self, **overrides)


DEFAULT_TOLERANCES: t.Final[Tolerances] = Tolerances()
