"""Detection functions d(x, y): the probability of detecting a target at `x` given effort `y`.

All methods are vectorized: `x` is an array of cell points as returned by
[`points`][searchlight.domain.spaces.GridSpace.points] and `y` broadcasts against it.

Examples: Typical Usage
    >>> import numpy as np
    >>> from searchlight.domain import detection
    >>> model = detection.ExponentialRate(rate=2.0)
    >>> float(model.value(np.array([1.0]), 0.0)[0])
    0.0
    >>> float(model.deriv(np.array([1.0]), 0.0)[0])
    2.0
"""

from __future__ import annotations

import abc
import dataclasses
import typing as t

import numpy as np

from searchlight import errors

__all__ = (
    "DetectionModel",
    "ExponentialRate",
    "GeneralRegular",
    "RateT",
    "saturating",
)

RateT: t.TypeAlias = (
    "float | tuple[float, ...] | t.Literal['coordinate'] | t.Callable[[np.ndarray], np.ndarray]"
)
"""A constant rate, one rate per discrete cell, the coordinate itself, or a callable."""


class DetectionModel(abc.ABC):
    """Common interface for regular detection functions."""

    __slots__ = ()

    @abc.abstractmethod
    def value(self, x: np.ndarray, y: np.ndarray | float) -> np.ndarray:
        """d(x, y)."""

    @abc.abstractmethod
    def deriv(self, x: np.ndarray, y: np.ndarray | float) -> np.ndarray:
        """∂d/∂y evaluated at (x, y)."""

    @abc.abstractmethod
    def deriv_inverse(self, x: np.ndarray, level: np.ndarray | float) -> np.ndarray:
        """The effort y ≥ 0 with ∂d/∂y(x, y) = `level`; 0 if `level` ≥ ∂d/∂y(x, 0)."""

    def is_homogeneous(self) -> bool:
        return False


@dataclasses.dataclass(frozen=True, slots=True)
class ExponentialRate(DetectionModel):
    """The exponential detection law `d(x, y) = 1 − exp(−α(x)·y)`.

    Attributes:
        rate: α as a positive constant, a tuple with one rate per discrete cell,
            the string `"coordinate"` (α(x) = x, for discrete labels or 1-D grids),
            or a callable mapping an array of points to an array of rates.
    """

    rate: RateT = 1.0

    def __post_init__(self):
        rate = self.rate
        if isinstance(rate, (list, tuple, np.ndarray)):
            rate = tuple(float(r) for r in rate)
        elif isinstance(rate, (int, float, np.number)):
            rate = float(rate)
        elif rate != "coordinate" and not callable(rate):
            raise ValueError(f"{rate!r} is not a supported detection rate")
        object.__setattr__(self, "rate", rate)

    def alpha(self, x: np.ndarray) -> np.ndarray:
        """α(x) for every point in `x`."""
        x = np.asarray(x, dtype=float)
        rate = self.rate
        if isinstance(rate, float):
            return np.full(x.shape[:1] or (1,), rate)
        if isinstance(rate, tuple):
            labels = np.rint(x).astype(int) - 1
            return np.asarray(rate, dtype=float)[labels]
        if rate == "coordinate":
            if x.ndim != 1:
                raise ValueError("A coordinate rate needs one-dimensional points")
            return x.copy()
        return np.broadcast_to(
            np.asarray(rate(x), dtype=float), x.shape[:1] or (1,)
        ).copy()

    def value(self, x, y):
        return -np.expm1(-self.alpha(x) * y)

    def deriv(self, x, y):
        a = self.alpha(x)
        return a * np.exp(-a * y)

    def deriv_inverse(self, x, level):
        a = self.alpha(x)
        with np.errstate(divide="ignore"):
            y = np.log(a / np.asarray(level, dtype=float)) / a
        return np.maximum(y, 0.0)

    def is_homogeneous(self) -> bool:
        return isinstance(self.rate, float)


@dataclasses.dataclass(frozen=True, slots=True, eq=False)
class GeneralRegular(DetectionModel):
    """A detection function given by its value and effort-derivative.

    When `deriv_inverse` is omitted, it is computed by bisection on `y`, costing
    O(log(1/tolerance)) derivative evaluations per call.
    """

    value_fn: t.Callable[[np.ndarray, np.ndarray], np.ndarray]
    deriv_fn: t.Callable[[np.ndarray, np.ndarray], np.ndarray]
    deriv_inverse_fn: t.Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    homogeneous: bool = False
    name: str = "general"
    max_iterations: int = 200
    parameters: t.Mapping[str, float] = dataclasses.field(default_factory=dict)

    def value(self, x, y):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(self.value_fn(x, np.asarray(y, dtype=float)), x.shape[:1])

    def deriv(self, x, y):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(self.deriv_fn(x, np.asarray(y, dtype=float)), x.shape[:1])

    def deriv_inverse(self, x, level):
        x = np.asarray(x, dtype=float)
        level = np.broadcast_to(np.asarray(level, dtype=float), x.shape[:1])
        if self.deriv_inverse_fn is not None:
            return np.maximum(self.deriv_inverse_fn(x, level), 0.0)
        return self._bisect_inverse(x, level)

    def is_homogeneous(self) -> bool:
        return self.homogeneous

    def _bisect_inverse(self, x: np.ndarray, level: np.ndarray) -> np.ndarray:
        active = self.deriv(x, 0.0) > level
        lo = np.zeros_like(level)
        hi = np.ones_like(level)
        # Grow the bracket until ∂d/∂y(hi) ≤ level on every active point.
        for _ in range(self.max_iterations):
            short = active & (self.deriv(x, hi) > level)
            if not short.any():
                break
            lo = np.where(short, hi, lo)
            hi = np.where(short, 2.0 * hi, hi)
        else:
            raise errors.ConvergenceError(
                f"{self.name}: derivative never falls to the requested level",
                bracket=(float(lo.min()), float(hi.max())),
                iterations=self.max_iterations,
                residual=float(np.max(self.deriv(x, hi) - level)),
            )
        for _ in range(self.max_iterations):
            mid = 0.5 * (lo + hi)
            above = self.deriv(x, mid) > level
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
            if np.all(hi - lo <= 1e-15 * np.maximum(1.0, hi)):
                break
        return np.where(active, 0.5 * (lo + hi), 0.0)


def saturating(ceiling: float, rate: float) -> GeneralRegular:
    """The non-saturating law `d(x, y) = c·(1 − exp(−α·y))` with `0 < c ≤ 1`.

    Detection never exceeds `c`, however much effort is spent.
    """
    if not 0 < ceiling <= 1:
        raise ValueError(f"{ceiling!r} is not a detection ceiling in (0, 1]")
    if not rate > 0:
        raise ValueError(f"{rate!r} is not a positive rate")
    c, a = float(ceiling), float(rate)

    def value(x, y):
        return -c * np.expm1(-a * y)

    def deriv(x, y):
        return c * a * np.exp(-a * y)

    def deriv_inverse(x, level):
        with np.errstate(divide="ignore"):
            return np.log(c * a / level) / a

    return GeneralRegular(
        value_fn=value,
        deriv_fn=deriv,
        deriv_inverse_fn=deriv_inverse,
        homogeneous=True,
        name="saturating",
        parameters={"ceiling": c, "rate": a},
    )
