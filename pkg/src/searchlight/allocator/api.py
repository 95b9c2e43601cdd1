"""Uniformly optimal allocations and plans, and the clairvoyant baseline."""

from __future__ import annotations

import logging
import typing as t

import numpy as np

from searchlight import constants, errors
from searchlight.allocator import routines
from searchlight.domain import detection, plans, priors, schedules, spaces

__all__ = (
    "marginal_rate",
    "marginal_rate_inverse",
    "aggregate_allocation",
    "solve_lambda",
    "optimal_allocation",
    "optimal_plan",
    "clairvoyant_plan",
)

logger = logging.getLogger(__name__)


def marginal_rate(
    prior: priors.Prior,
    det: detection.DetectionModel,
    x: spaces.Location,
    y: float,
) -> float:
    """q_x(y) = π(x)·∂d/∂y(x, y), which is 0 wherever π(x) = 0.

    Examples:
        >>> from searchlight import allocator, domain
        >>> prior = domain.DiscretePmf(weights=(0.5, 0.5))
        >>> allocator.marginal_rate(prior, domain.ExponentialRate(1.0), 1, 0.0)
        0.5

    Raises:
        ValueError: If `y` is negative or `x` is not in the prior's space.
    """
    if not y >= 0:
        raise ValueError(f"Effort must be non-negative, got {y!r}")
    index, point = _cell(prior.space, x)
    pi = float(priors.density(prior)[index])
    if pi == 0:
        return 0.0
    return pi * float(det.deriv(point, y)[0])


def marginal_rate_inverse(
    prior: priors.Prior,
    det: detection.DetectionModel,
    x: spaces.Location,
    lam: float,
) -> float:
    """q_x⁻¹(λ): the effort at which q_x falls to λ, or 0 when λ ≥ q_x(0).

    Raises:
        ValueError: If `lam` is not positive or `x` is not in the prior's space.
    """
    if not lam > 0:
        raise ValueError(f"λ must be positive, got {lam!r}")
    index, point = _cell(prior.space, x)
    pi = float(priors.density(prior)[index])
    if pi == 0 or lam >= pi * float(det.deriv(point, 0.0)[0]):
        return 0.0
    return float(det.deriv_inverse(point, lam / pi)[0])


def aggregate_allocation(
    prior: priors.Prior,
    det: detection.DetectionModel,
    lam: float,
    *,
    method: routines.MethodT = "auto",
) -> float:
    """Q(λ): the total effort water-filling spends at multiplier λ.

    Raises:
        ValueError: If `lam` is not positive.
    """
    return routines.water_filling(prior, det, method=method).aggregate(lam)


def solve_lambda(
    prior: priors.Prior,
    det: detection.DetectionModel,
    budget: float,
    *,
    method: routines.MethodT = "auto",
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> routines.LagrangeSolution:
    """Invert Q at `budget` and return the multiplier with its allocation.

    Args:
        prior: The target distribution.
        det: The detection model.
        budget: The total effort K ≥ 0.
        method: The solver to use; see
            [`water_filling`][searchlight.allocator.routines.water_filling].
        tolerances: Numeric tolerances.

    Raises:
        ValueError: If the budget is negative or the prior is degenerate.
        ConvergenceError: If the bisection solver fails.
    """
    solver = routines.water_filling(prior, det, method=method, tolerances=tolerances)
    return solver.solve(budget)


def optimal_allocation(
    prior: priors.Prior,
    det: detection.DetectionModel,
    budget: float,
    *,
    method: routines.MethodT = "auto",
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> plans.Allocation:
    """The allocation of `budget` maximizing the subjective detection probability."""
    return solve_lambda(
        prior, det, budget, method=method, tolerances=tolerances
    ).allocation


def optimal_plan(
    prior: priors.Prior,
    det: detection.DetectionModel,
    schedule: schedules.EffortSchedule,
    t_grid: t.Sequence[float] | np.ndarray | None = None,
    *,
    method: routines.MethodT = "auto",
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> plans.SearchPlan:
    """The uniformly optimal plan t ↦ q_x⁻¹(Q⁻¹(E(t))).

    Without `t_grid` the plan is solved on demand at any t. With `t_grid`, the plan is
    solved once per sample time and stored.

    Raises:
        ValueError: If `t_grid` is not strictly increasing from 0.
        ConvergenceError: If a solve fails; the message names the offending t.
    """
    solver = routines.water_filling(prior, det, method=method, tolerances=tolerances)
    parameters = {"prior": prior, "detection": det, "method": solver.method}

    def allocate(time: float) -> plans.Allocation:
        return _solve_at(solver, schedule, time).allocation

    if t_grid is None:
        return plans.ParametricPlan(
            family="optimal",
            space=prior.space,
            schedule=schedule,
            allocate=allocate,
            parameters=parameters,
        )
    grid = np.asarray(t_grid, dtype=float)
    if grid.size == 0 or grid[0] != 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("t_grid must be strictly increasing and start at 0")
    logger.debug("Sampling the optimal plan at %d times", grid.size)
    return plans.SampledPlan(
        family="optimal",
        space=prior.space,
        schedule=schedule,
        t_grid=grid,
        allocations=tuple(allocate(float(time)) for time in grid),
        parameters=parameters,
    )


def clairvoyant_plan(
    truth: plans.GroundTruth,
    schedule: schedules.EffortSchedule,
    *,
    space: spaces.SearchSpace,
) -> plans.ParametricPlan:
    """The baseline ψ which spends all of E(t) on the true location x₀.

    Raises:
        ValueError: If x₀ lies outside `space`.
    """
    index = truth.index(space)

    def allocate(time: float) -> plans.Allocation:
        return plans.Allocation.concentrated(space, index, schedule(time))

    return plans.ParametricPlan(
        family="clairvoyant",
        space=space,
        schedule=schedule,
        allocate=allocate,
        parameters={"truth": truth},
    )


def _solve_at(
    solver: routines.AbstractWaterFilling,
    schedule: schedules.EffortSchedule,
    time: float,
) -> routines.LagrangeSolution:
    try:
        return solver.solve(schedule(time))
    except errors.ConvergenceError as e:
        raise errors.ConvergenceError(
            f"Optimal allocation at t={time!r} failed",
            bracket=e.bracket,
            iterations=e.iterations,
            residual=e.residual,
        ) from e


def _cell(space: spaces.SearchSpace, x: spaces.Location) -> tuple[int, np.ndarray]:
    index = plans.GroundTruth(x).index(space)
    return index, space.points()[index : index + 1]
