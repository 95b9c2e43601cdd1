"""Named feasible plans which compete with, or break, the uniformly optimal plan.

Each plan is built from a formula over the possibility area. Plans over grids are
sampled at cell centers and rescaled so their grid cost equals E(t) exactly.
"""

from __future__ import annotations

import logging
import math
import typing as t

import numpy as np

from searchlight import errors
from searchlight.domain import plans, priors, schedules, spaces

__all__ = (
    "named_plan",
    "NAMED_PLANS",
    "two_cell_shifted",
    "shifted_gaussian",
    "vanishing_center",
)

logger = logging.getLogger(__name__)

LN4: t.Final[float] = math.log(4.0)

PlanFactoryT: t.TypeAlias = t.Callable[..., plans.ParametricPlan]
NAMED_PLANS: dict[str, PlanFactoryT] = {}


def _named(name: str) -> t.Callable[[PlanFactoryT], PlanFactoryT]:
    def decorator(func: PlanFactoryT) -> PlanFactoryT:
        NAMED_PLANS[name] = func
        return func

    return decorator


def named_plan(
    name: str,
    prior: priors.Prior,
    schedule: schedules.EffortSchedule,
    **params: float,
) -> plans.ParametricPlan:
    """Build the named plan on the prior's space.

    Raises:
        UnknownReferenceError: If `name` is not a known plan.
    """
    try:
        factory = NAMED_PLANS[name]
    except KeyError:
        raise errors.UnknownReferenceError(
            f"No plan named {name!r}; known: {tuple(sorted(NAMED_PLANS))}"
        ) from None
    return factory(prior.space, schedule, **params)


@_named("example5_alternative")
def two_cell_shifted(
    space: spaces.SearchSpace,
    schedule: schedules.EffortSchedule,
    *,
    shift: float = LN4,
) -> plans.ParametricPlan:
    """Fund cell 1 alone up to E(t) = `shift`, then keep it `shift` ahead of cell 2."""
    if not isinstance(space, spaces.DiscreteSpace) or space.cell_count != 2:
        raise errors.SpaceMismatchError(f"{space!r} is not a two-cell space")

    def allocate(time: float) -> plans.Allocation:
        effort = schedule(time)
        if effort <= shift:
            return plans.Allocation.from_effort(space, [effort, 0.0])
        return plans.Allocation.from_effort(
            space, [(effort + shift) / 2, (effort - shift) / 2]
        )

    return plans.ParametricPlan(
        family="example5_alternative",
        space=space,
        schedule=schedule,
        allocate=allocate,
        parameters={"shift": shift},
    )


@_named("example6_alternative")
def shifted_gaussian(
    space: spaces.SearchSpace,
    schedule: schedules.EffortSchedule,
    *,
    sigma: float = 1.0,
) -> plans.ParametricPlan:
    """The optimal plan for a circular Gaussian of spread `sigma`, used on any prior.

    Its density is max(0, √(E/(πσ²)) − r²/(2σ²)).
    """
    _require_plane(space)
    radii2 = space.radii() ** 2

    def allocate(time: float) -> plans.Allocation:
        effort = schedule(time)
        level = math.sqrt(effort / (math.pi * sigma**2))
        return _rescaled(space, np.maximum(0.0, level - radii2 / (2 * sigma**2)), effort)

    return plans.ParametricPlan(
        family="example6_alternative",
        space=space,
        schedule=schedule,
        allocate=allocate,
        parameters={"sigma": sigma},
    )


@_named("counterexample6")
def vanishing_center(
    space: spaces.SearchSpace,
    schedule: schedules.EffortSchedule,
    *,
    sigma: float = 2.0,
) -> plans.ParametricPlan:
    """A feasible plan whose true detection probability at the origin tends to 0.

    The disc r ≤ R(t), R² = 2σ√(E/π), gets density e^{−t} (less if E(t) cannot cover
    it); the rest of the budget is spread evenly over the annulus R < r ≤ R̃ with
    R̃² = R² + (E − I)/π, or over every cell beyond R once that annulus leaves the grid.
    """
    _require_plane(space)
    radii = space.radii()
    volume = space.cell_volume

    def allocate(time: float) -> plans.Allocation:
        effort = schedule(time)
        if effort <= 0:
            return plans.Allocation.zeros(space)
        inner_r2 = 2 * sigma * math.sqrt(effort / math.pi)
        inner = radii**2 <= inner_r2
        inner_area = np.count_nonzero(inner) * volume
        level = math.exp(-time)
        if inner_area * level > effort:
            level = effort / inner_area
        remaining = effort - inner_area * level
        density = np.where(inner, level, 0.0)
        outer_r2 = inner_r2 + remaining / math.pi
        ring = ~inner & (radii**2 <= outer_r2)
        if not ring.any() or np.max(radii) <= math.sqrt(outer_r2):
            ring = ~inner
        if remaining > 0 and ring.any():
            density[ring] = remaining / (np.count_nonzero(ring) * volume)
        return _rescaled(space, density, effort)

    return plans.ParametricPlan(
        family="counterexample6",
        space=space,
        schedule=schedule,
        allocate=allocate,
        parameters={"sigma": sigma},
    )


def _require_plane(space: spaces.SearchSpace) -> None:
    if not isinstance(space, spaces.GridSpace) or space.dimension != 2:
        raise errors.SpaceMismatchError(f"{space!r} is not a two-dimensional grid")


def _rescaled(
    space: spaces.GridSpace, density: np.ndarray, effort: float
) -> plans.Allocation:
    cost = float(density.sum()) * space.cell_volume
    if cost <= 0:
        return plans.Allocation.zeros(space)
    return plans.Allocation(space=space, effort=density * (effort / cost), total=effort)
