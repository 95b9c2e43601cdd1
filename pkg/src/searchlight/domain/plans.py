"""Allocations, search plans and the ground truth they are judged against.

An [`Allocation`][searchlight.domain.plans.Allocation] is a snapshot of effort over a
space. A [`SearchPlan`][searchlight.domain.plans.SearchPlan] maps time to allocations,
either through a callable ([`ParametricPlan`][searchlight.domain.plans.ParametricPlan])
or by interpolating between stored snapshots
([`SampledPlan`][searchlight.domain.plans.SampledPlan]).
"""

from __future__ import annotations

import abc
import dataclasses
import math
import typing as t
import warnings

import numpy as np
from more_itertools import pairwise

from searchlight import errors
from searchlight.domain import priors, schedules, spaces
from searchlight.py import compat

__all__ = (
    "Allocation",
    "GroundTruth",
    "SearchPlan",
    "ParametricPlan",
    "SampledPlan",
    "resolve_truth",
)


@dataclasses.dataclass(frozen=True, slots=True, eq=False)
class Allocation:
    """Effort per cell (discrete) or effort density per cell (grid).

    Attributes:
        space: The space this allocation covers.
        effort: Non-negative effort per cell, read-only.
        total: The cost of the allocation: the effort sum, times the cell volume on grids.
    """

    space: spaces.SearchSpace
    effort: np.ndarray
    total: float

    def __post_init__(self):
        effort = np.array(self.effort, dtype=float).reshape(-1)
        if effort.size != self.space.size:
            raise errors.SpaceMismatchError(
                f"{effort.size} effort values given for {self.space.size} cells"
            )
        if np.any(effort < 0) or not np.all(np.isfinite(effort)):
            raise ValueError("Effort must be finite and non-negative everywhere")
        cost = float(effort.sum()) * self.space.cell_volume
        total = float(self.total)
        if abs(cost - total) > 1e-9 * max(1.0, abs(total)):
            raise ValueError(f"Allocation cost {cost!r} does not match total {total!r}")
        effort.flags.writeable = False
        object.__setattr__(self, "effort", effort)
        object.__setattr__(self, "total", total)

    @classmethod
    def from_effort(
        cls, space: spaces.SearchSpace, effort: t.Iterable[float] | np.ndarray
    ) -> compat.Self:
        effort = np.asarray(effort, dtype=float)
        return cls(
            space=space, effort=effort, total=float(effort.sum()) * space.cell_volume
        )

    @classmethod
    def zeros(cls, space: spaces.SearchSpace) -> compat.Self:
        return cls(space=space, effort=np.zeros(space.size), total=0.0)

    @classmethod
    def concentrated(
        cls, space: spaces.SearchSpace, index: int, budget: float
    ) -> compat.Self:
        """All of `budget` on the cell at `index`."""
        effort = np.zeros(space.size)
        effort[index] = budget / space.cell_volume
        return cls(space=space, effort=effort, total=budget)

    @property
    def cost(self) -> float:
        return float(self.effort.sum()) * self.space.cell_volume

    def scaled(self, factor: float) -> Allocation:
        return Allocation.from_effort(self.space, self.effort * factor)

    def combine(self, other: Allocation, weight: float) -> Allocation:
        """`weight·self + (1 − weight)·other`."""
        if other.space != self.space:
            raise errors.SpaceMismatchError(
                f"Cannot combine allocations on {self.space!r} and {other.space!r}"
            )
        return Allocation(
            space=self.space,
            effort=weight * self.effort + (1 - weight) * other.effort,
            total=weight * self.total + (1 - weight) * other.total,
        )


@dataclasses.dataclass(frozen=True, slots=True)
class GroundTruth:
    """The actual location x₀ of the target: a cell label, or a coordinate tuple."""

    location: spaces.Location

    def __post_init__(self):
        location = self.location
        if isinstance(location, (list, tuple, np.ndarray)):
            location = tuple(float(c) for c in location)
        object.__setattr__(self, "location", location)

    def index(self, space: spaces.SearchSpace) -> int:
        """The flat index of the cell containing x₀.

        Raises:
            ValueError: If x₀ lies outside `space`.
        """
        location = self.location
        if isinstance(space, spaces.GridSpace) and not isinstance(location, tuple):
            location = (float(location),)
        return space.locate(location)


def resolve_truth(truth: GroundTruth, prior: priors.Prior) -> int:
    """Locate `truth` on the prior's space, warning when the prior excludes it.

    Raises:
        ValueError: If x₀ lies outside the space.
    """
    index = truth.index(prior.space)
    if priors.masses(prior)[index] <= 0:
        warnings.warn(
            f"Ground truth {truth.location!r} has zero prior probability",
            errors.TruthOutsideSupportWarning,
            stacklevel=2,
        )
    return index


class SearchPlan(abc.ABC):
    """A time-indexed family of allocations t ↦ φ(·, t).

    Attributes:
        family: A short identifier for how the plan was built.
        space: The space every allocation of this plan covers.
        schedule: The effort schedule the plan was built against.
        feasible: Whether the plan spends exactly E(t) at every t.
    """

    family: str
    space: spaces.SearchSpace
    schedule: schedules.EffortSchedule
    feasible: bool

    __slots__ = ()

    @abc.abstractmethod
    def at(self, time: float) -> Allocation:
        """The allocation φ(·, t)."""

    @property
    def horizon(self) -> float:
        """The last time at which this plan is defined."""
        return math.inf

    def times(self) -> np.ndarray | None:
        """The stored sample times, if any."""
        return None


@dataclasses.dataclass(frozen=True, slots=True, eq=False)
class ParametricPlan(SearchPlan):
    """A plan computed on demand from a callable."""

    family: str
    space: spaces.SearchSpace
    schedule: schedules.EffortSchedule
    allocate: t.Callable[[float], Allocation]
    feasible: bool = True
    parameters: t.Mapping[str, t.Any] = dataclasses.field(default_factory=dict)

    def at(self, time: float) -> Allocation:
        if time < 0:
            raise ValueError(f"Plans are defined for t ≥ 0, got {time!r}")
        return self.allocate(float(time))


@dataclasses.dataclass(frozen=True, slots=True, eq=False)
class SampledPlan(SearchPlan):
    """A plan stored as allocations at increasing sample times.

    Between samples the allocation is linearly interpolated, which keeps both
    feasibility (for a linear schedule between samples) and monotonicity.
    """

    family: str
    space: spaces.SearchSpace
    schedule: schedules.EffortSchedule
    t_grid: np.ndarray
    allocations: tuple[Allocation, ...]
    feasible: bool = True
    parameters: t.Mapping[str, t.Any] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        t_grid = np.array(self.t_grid, dtype=float).reshape(-1)
        allocations = tuple(self.allocations)
        if t_grid.size == 0 or t_grid.size != len(allocations):
            raise ValueError(
                f"{len(allocations)} allocations given for {t_grid.size} sample times"
            )
        if np.any(np.diff(t_grid) <= 0):
            raise ValueError("Sample times must be strictly increasing")
        for allocation in allocations:
            if allocation.space != self.space:
                raise errors.SpaceMismatchError(
                    f"Allocation on {allocation.space!r} in a plan on {self.space!r}"
                )
        t_grid.flags.writeable = False
        object.__setattr__(self, "t_grid", t_grid)
        object.__setattr__(self, "allocations", allocations)

    @property
    def horizon(self) -> float:
        return float(self.t_grid[-1])

    def times(self) -> np.ndarray:
        return self.t_grid

    def at(self, time: float) -> Allocation:
        time = float(time)
        grid = self.t_grid
        if not grid[0] - 1e-12 <= time <= grid[-1] + 1e-12:
            raise ValueError(
                f"t={time!r} is outside the sampled range [{grid[0]!r}, {grid[-1]!r}]"
            )
        hi = int(np.searchsorted(grid, time, side="left"))
        if hi < grid.size and math.isclose(grid[hi], time, rel_tol=0, abs_tol=1e-12):
            return self.allocations[hi]
        if hi == 0:
            return self.allocations[0]
        if hi == grid.size:
            return self.allocations[-1]
        lo = hi - 1
        weight = (grid[hi] - time) / (grid[hi] - grid[lo])
        return self.allocations[lo].combine(self.allocations[hi], weight)

    def is_monotone(self, tolerance: float = 1e-12) -> bool:
        """Whether φ(x, ·) is non-decreasing between every pair of samples."""
        return all(
            np.all(b.effort >= a.effort - tolerance * np.maximum(1.0, a.effort))
            for a, b in pairwise(self.allocations)
        )

    def scaled(self, factor: float) -> SampledPlan:
        """This plan with every allocation multiplied by `factor`; no longer feasible."""
        return SampledPlan(
            family=f"{self.family}*{factor:g}",
            space=self.space,
            schedule=self.schedule,
            t_grid=self.t_grid,
            allocations=tuple(a.scaled(factor) for a in self.allocations),
            feasible=factor == 1,
            parameters=self.parameters,
        )
