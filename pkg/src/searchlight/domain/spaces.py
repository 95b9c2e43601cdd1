"""Possibility areas: discrete cell sets and uniformly gridded continuous regions.

Examples: Typical Usage
    >>> from searchlight.domain import spaces
    >>> cells = spaces.DiscreteSpace(cell_count=2)
    >>> cells.locate(1)
    0
    >>> grid = spaces.GridSpace.centered(half_width=1.0, resolution=0.5, dimension=2)
    >>> grid.shape
    (5, 5)
    >>> grid.locate((0.0, 0.0))
    12
"""

from __future__ import annotations

import dataclasses
import math
import typing as t

import numpy as np

from searchlight.py import compat

__all__ = (
    "DiscreteSpace",
    "GridSpace",
    "SearchSpace",
    "Location",
    "truncated_grid",
)


@dataclasses.dataclass(frozen=True, slots=True)
class DiscreteSpace:
    """A finite set of cells labelled `1..cell_count`."""

    cell_count: int

    def __post_init__(self):
        if int(self.cell_count) != self.cell_count or self.cell_count < 1:
            raise ValueError(f"{self.cell_count!r} is not a positive cell count")
        object.__setattr__(self, "cell_count", int(self.cell_count))

    @property
    def size(self) -> int:
        return self.cell_count

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cell_count,)

    @property
    def cell_volume(self) -> float:
        return 1.0

    def points(self) -> np.ndarray:
        """The cell labels `1..m` as a float array, one entry per cell."""
        return _discrete_points(self)

    def contains(self, location: Location) -> bool:
        return (
            isinstance(location, (int, np.integer))
            and 1 <= int(location) <= self.cell_count
        )

    def locate(self, location: Location) -> int:
        """Map a cell label to its zero-based index.

        Raises:
            ValueError: If `location` is not a label in this space.
        """
        if not self.contains(location):
            raise ValueError(f"{location!r} is not a cell of {self!r}")
        return int(location) - 1


@dataclasses.dataclass(frozen=True, slots=True)
class GridSpace:
    """A uniformly gridded box in one or two dimensions.

    Cells are enumerated in row-major order (the last axis varies fastest). Effort
    stored over a grid is a density, so the cost of an allocation is the sum of its
    densities times [`cell_volume`][searchlight.domain.spaces.GridSpace.cell_volume].
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    resolution: float

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        h = float(self.resolution)
        if len(lower) not in (1, 2) or len(lower) != len(upper):
            raise ValueError(
                f"Grid bounds {lower!r}, {upper!r} must both have dimension 1 or 2"
            )
        if not (h > 0 and math.isfinite(h)):
            raise ValueError(f"{h!r} is not a positive resolution")
        for lo, hi in zip(lower, upper):
            if not lo < hi:
                raise ValueError(f"Grid bounds {lo!r} < {hi!r} are not strictly ordered")
            span = (hi - lo) / h
            if abs(span - round(span)) > 1e-6 * max(1.0, span):
                raise ValueError(
                    f"Grid axis [{lo!r}, {hi!r}] is not a whole number of cells of size {h!r}"
                )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "resolution", h)

    @classmethod
    def centered(
        cls, half_width: float, resolution: float, dimension: int = 2
    ) -> compat.Self:
        """Build a symmetric grid with the origin at the center of a cell.

        The half width is rounded up to the nearest `(n + 1/2)·h`.
        """
        n = max(0, math.ceil(half_width / resolution - 0.5))
        bound = (n + 0.5) * resolution
        return cls(
            lower=(-bound,) * dimension,
            upper=(bound,) * dimension,
            resolution=resolution,
        )

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(
            round((hi - lo) / self.resolution) for lo, hi in zip(self.lower, self.upper)
        )

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    @property
    def cell_volume(self) -> float:
        return self.resolution**self.dimension

    def points(self) -> np.ndarray:
        """Cell centers, shape `(size,)` in 1-D and `(size, 2)` in 2-D."""
        return _grid_points(self)

    def radii(self) -> np.ndarray:
        """Distance of each cell center from the origin."""
        return _grid_radii(self)

    def contains(self, location: Location) -> bool:
        coords = np.atleast_1d(np.asarray(location, dtype=float))
        if coords.shape != (self.dimension,):
            return False
        return all(lo <= c <= hi for c, lo, hi in zip(coords, self.lower, self.upper))

    def locate(self, location: Location) -> int:
        """Map a coordinate to the flat index of the cell which contains it.

        Points on a shared cell edge belong to the cell above; the upper bound itself
        belongs to the last cell.

        Raises:
            ValueError: If `location` lies outside the grid.
        """
        if not self.contains(location):
            raise ValueError(f"{location!r} is not inside {self!r}")
        coords = np.atleast_1d(np.asarray(location, dtype=float))
        index = tuple(
            min(n - 1, int(math.floor((c - lo) / self.resolution)))
            for c, lo, n in zip(coords, self.lower, self.shape)
        )
        return int(np.ravel_multi_index(index, self.shape))


SearchSpace: t.TypeAlias = "DiscreteSpace | GridSpace"
"""Type alias for any possibility area."""
Location: t.TypeAlias = "int | tuple[float, ...] | float"
"""A cell label (discrete) or a coordinate (grid)."""


def truncated_grid(
    sigma: float,
    resolution: float,
    *,
    truncation: float = 6.0,
    dimension: int = 2,
) -> GridSpace:
    """A centered grid covering `truncation` standard deviations of a circular Gaussian."""
    return GridSpace.centered(
        half_width=truncation * sigma, resolution=resolution, dimension=dimension
    )


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@compat.cache
def _discrete_points(space: DiscreteSpace) -> np.ndarray:
    return _readonly(np.arange(1, space.cell_count + 1, dtype=float))


@compat.cache
def _grid_points(space: GridSpace) -> np.ndarray:
    axes = [
        lo + (np.arange(n, dtype=float) + 0.5) * space.resolution
        for lo, n in zip(space.lower, space.shape)
    ]
    if space.dimension == 1:
        return _readonly(axes[0])
    mesh = np.meshgrid(*axes, indexing="ij")
    return _readonly(np.stack([m.ravel() for m in mesh], axis=-1))


@compat.cache
def _grid_radii(space: GridSpace) -> np.ndarray:
    points = space.points()
    if space.dimension == 1:
        return _readonly(np.abs(points))
    return _readonly(np.hypot(points[:, 0], points[:, 1]))
