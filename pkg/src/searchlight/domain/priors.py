"""Target distributions over a possibility area.

Every prior lives on a [`SearchSpace`][searchlight.domain.spaces.SearchSpace]. Discrete
priors carry their probabilities directly; continuous priors are sampled at the grid's
cell centers (midpoint quadrature) and renormalized over the grid, which truncates
unbounded supports at the grid boundary.

Examples: Typical Usage
    >>> from searchlight.domain import priors, spaces
    >>> pmf = priors.DiscretePmf(weights=(0.5, 0.5))
    >>> priors.masses(pmf).tolist()
    [0.5, 0.5]
    >>> grid = spaces.truncated_grid(sigma=2.0, resolution=0.5)
    >>> gaussian = priors.Gaussian2D(sigma=2.0, space=grid)
    >>> round(float(priors.masses(gaussian).sum()), 12)
    1.0
"""

from __future__ import annotations

import dataclasses
import logging
import math
import typing as t

import numpy as np

from searchlight import errors
from searchlight.domain import spaces
from searchlight.py import compat

__all__ = (
    "DiscretePmf",
    "Gaussian2D",
    "UniformDisc",
    "UniformInterval",
    "GridDensity",
    "Mixture",
    "Prior",
    "masses",
    "density",
    "raw_mass",
    "probability_at",
)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, slots=True)
class DiscretePmf:
    """A probability per cell of a [`DiscreteSpace`][searchlight.domain.spaces.DiscreteSpace].

    The weights are stored as given; use
    [`validate`][searchlight.domain.validation.validate] to check they sum to 1.
    """

    weights: tuple[float, ...]
    space: spaces.DiscreteSpace = None  # type: ignore[assignment]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if self.space is None:
            object.__setattr__(self, "space", spaces.DiscreteSpace(len(weights)))
        if not isinstance(self.space, spaces.DiscreteSpace):
            raise errors.SpaceMismatchError(
                f"A pmf needs a discrete space, got {self.space!r}"
            )
        if len(weights) != self.space.cell_count:
            raise errors.SpaceMismatchError(
                f"{len(weights)} weights given for {self.space.cell_count} cells"
            )


@dataclasses.dataclass(frozen=True, slots=True)
class Gaussian2D:
    """A zero-mean circular bivariate normal with standard deviation `sigma`."""

    sigma: float
    space: spaces.GridSpace

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"{self.sigma!r} is not a positive standard deviation")
        _require_grid(self, dimension=2)
        object.__setattr__(self, "sigma", float(self.sigma))


@dataclasses.dataclass(frozen=True, slots=True)
class UniformDisc:
    """A uniform distribution on the disc of `radius` around the origin."""

    radius: float
    space: spaces.GridSpace

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"{self.radius!r} is not a positive radius")
        _require_grid(self, dimension=2)
        object.__setattr__(self, "radius", float(self.radius))


@dataclasses.dataclass(frozen=True, slots=True)
class UniformInterval:
    """A uniform distribution on `[a, b]` over a one-dimensional grid."""

    a: float
    b: float
    space: spaces.GridSpace

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"Interval bounds {self.a!r} < {self.b!r} are not ordered")
        _require_grid(self, dimension=1)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))


@dataclasses.dataclass(frozen=True, slots=True)
class GridDensity:
    """An explicit density value per grid cell, in row-major order."""

    values: tuple[float, ...]
    space: spaces.GridSpace

    def __post_init__(self):
        values = tuple(float(v) for v in np.ravel(self.values))
        object.__setattr__(self, "values", values)
        if not isinstance(self.space, spaces.GridSpace):
            raise errors.SpaceMismatchError(
                f"A grid density needs a grid space, got {self.space!r}"
            )
        if len(values) != self.space.size:
            raise errors.SpaceMismatchError(
                f"{len(values)} density values given for {self.space.size} cells"
            )


@dataclasses.dataclass(frozen=True, slots=True)
class Mixture:
    """A weighted mixture of priors sharing one space."""

    components: tuple[Prior, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        components = tuple(self.components)
        weights = tuple(float(w) for w in self.weights)
        if not components:
            raise ValueError("A mixture needs at least one component")
        if len(components) != len(weights):
            raise ValueError(
                f"{len(weights)} weights given for {len(components)} components"
            )
        first = components[0].space
        for component in components[1:]:
            if component.space != first:
                raise errors.SpaceMismatchError(
                    "Mixture components live on different spaces: "
                    f"{first!r} and {component.space!r}"
                )
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "weights", weights)

    @property
    def space(self) -> spaces.SearchSpace:
        return self.components[0].space


Prior: t.TypeAlias = (
    "DiscretePmf | Gaussian2D | UniformDisc | UniformInterval | GridDensity | Mixture"
)
"""Type alias for any target distribution."""


def masses(prior: Prior) -> np.ndarray:
    """The probability mass of every cell, as a read-only array.

    Parametric priors are renormalized over their grid. Discrete and explicit grid
    priors are returned as given so that invalid inputs remain visible.
    """
    return _masses(prior)


def density(prior: Prior) -> np.ndarray:
    """π(x) per cell: the mass in the discrete case, the mass over cell volume on grids."""
    return _density(prior)


def raw_mass(prior: Prior) -> float:
    """Total probability captured by the space before any renormalization."""
    handler = _RAW[type(prior)]
    return float(np.sum(handler(prior)))


def probability_at(prior: Prior, location: spaces.Location) -> float:
    """π(x₀): the mass (discrete) or density (grid) of the cell containing `location`."""
    index = prior.space.locate(location)
    return float(density(prior)[index])


@compat.cache
def _masses(prior: Prior) -> np.ndarray:
    try:
        handler = _RAW[type(prior)]
    except KeyError:
        raise TypeError(f"{prior!r} is not a supported prior") from None
    raw = np.asarray(handler(prior), dtype=float)
    if type(prior) in _NORMALIZED:
        total = raw.sum()
        if not total > 0:
            raise ValueError(f"{prior!r} places no mass on its grid")
        if abs(total - 1.0) > 1e-12:
            logger.debug("Renormalizing %r: grid mass %.12g", prior, total)
        raw = raw / total
    raw.flags.writeable = False
    return raw


@compat.cache
def _density(prior: Prior) -> np.ndarray:
    values = masses(prior) / prior.space.cell_volume
    values.flags.writeable = False
    return values


def _pmf_masses(prior: DiscretePmf) -> np.ndarray:
    return np.asarray(prior.weights, dtype=float)


def _gaussian_masses(prior: Gaussian2D) -> np.ndarray:
    r2 = prior.space.radii() ** 2
    scale = 2.0 * prior.sigma**2
    return np.exp(-r2 / scale) / (math.pi * scale) * prior.space.cell_volume


def _disc_masses(prior: UniformDisc) -> np.ndarray:
    inside = prior.space.radii() <= prior.radius * (1 + 1e-12)
    return inside * (prior.space.cell_volume / (math.pi * prior.radius**2))


def _interval_masses(prior: UniformInterval) -> np.ndarray:
    points = prior.space.points()
    inside = (points >= prior.a) & (points <= prior.b)
    return inside * (prior.space.cell_volume / (prior.b - prior.a))


def _grid_masses(prior: GridDensity) -> np.ndarray:
    return np.asarray(prior.values, dtype=float) * prior.space.cell_volume


def _mixture_masses(prior: Mixture) -> np.ndarray:
    total = np.zeros(prior.space.size)
    for weight, component in zip(prior.weights, prior.components):
        total += weight * masses(component)
    return total


def _require_grid(prior: t.Any, *, dimension: int) -> None:
    space = prior.space
    if not isinstance(space, spaces.GridSpace) or space.dimension != dimension:
        raise errors.SpaceMismatchError(
            f"{type(prior).__name__} needs a {dimension}-D grid space, got {space!r}"
        )


_RAW: dict[type, t.Callable[[t.Any], np.ndarray]] = {
    DiscretePmf: _pmf_masses,
    Gaussian2D: _gaussian_masses,
    UniformDisc: _disc_masses,
    UniformInterval: _interval_masses,
    GridDensity: _grid_masses,
    Mixture: _mixture_masses,
}
_NORMALIZED: frozenset[type] = frozenset({Gaussian2D, UniformDisc, UniformInterval})
