"""Composite priors, composite plans, and the comparison of the two strategies.

When several analysts hold inconsistent target distributions, a planner can either
merge the distributions into one composite prior and plan optimally for it, or plan
optimally for each distribution and mix the resulting plans with the same weights.
[`compare_strategies`][searchlight.composite.compare_strategies] runs both and
reports their detection curves side by side.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
import math
import typing as t

import numpy as np

from searchlight import allocator, constants, errors, evaluator
from searchlight.domain import detection, plans, priors, schedules, validation

__all__ = (
    "StrategyComparison",
    "mixture_prior",
    "moment_matched_gaussian",
    "composite_plan",
    "compare_strategies",
)

logger = logging.getLogger(__name__)


def mixture_prior(
    components: t.Sequence[priors.Prior],
    weights: t.Sequence[float],
    *,
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> priors.Prior:
    """The exact weighted mixture of `components`.

    A weight of exactly 1 returns that component unchanged.

    Raises:
        ValidationError: If the weights are negative or do not sum to 1.
        SpaceMismatchError: If the components live on different spaces.
    """
    weights = tuple(float(w) for w in weights)
    violations = []
    if len(weights) != len(components):
        violations.append(f"{len(weights)} weights given for {len(components)} components")
    if any(w < 0 for w in weights):
        violations.append(f"negative mixture weight in {weights!r}")
    total = math.fsum(weights)
    if abs(total - 1.0) > tolerances.mixture_weights:
        violations.append(f"mixture weights sum to {total:.12g} ≠ 1")
    if violations:
        raise errors.ValidationError(
            validation.ValidationReport(violations=tuple(violations))
        )
    mixture = priors.Mixture(components=tuple(components), weights=weights)
    for weight, component in zip(weights, components):
        if weight == 1.0:
            return component
    return mixture


def moment_matched_gaussian(
    components: t.Sequence[priors.Gaussian2D],
    weights: t.Sequence[float],
) -> priors.Gaussian2D:
    """The circular Gaussian with the mixture's second moment, σ² = Σ wᵢσᵢ².

    This is not the mixture itself: a mixture of Gaussians with different spreads is
    not Gaussian. It is the approximation used to plan for a merged prior in closed form.

    Raises:
        TypeError: If a component is not a `Gaussian2D`.
        SpaceMismatchError: If the components live on different spaces.
    """
    for component in components:
        if not isinstance(component, priors.Gaussian2D):
            raise TypeError(f"{component!r} is not a Gaussian2D")
    space = components[0].space
    if any(c.space != space for c in components):
        raise errors.SpaceMismatchError("Gaussian components live on different spaces")
    variance = math.fsum(w * c.sigma**2 for w, c in zip(weights, components))
    return priors.Gaussian2D(sigma=math.sqrt(variance), space=space)


def composite_plan(
    plan_list: t.Sequence[plans.SearchPlan],
    weights: t.Sequence[float],
) -> plans.SearchPlan:
    """The pointwise convex combination Σ wᵢ·φᵢ of feasible plans.

    Parametric plans combine into a parametric plan. If any plan is sampled, the
    result is sampled on the union of the sample times inside the common range,
    interpolating each plan linearly; the interpolated sample count is recorded in
    the plan's parameters.

    Raises:
        ValueError: If the plans were built for different schedules or the weights
            do not form a convex combination.
        SpaceMismatchError: If the plans live on different spaces.
    """
    plan_list = tuple(plan_list)
    weights = tuple(float(w) for w in weights)
    if len(plan_list) != len(weights) or not plan_list:
        raise ValueError(f"{len(weights)} weights given for {len(plan_list)} plans")
    if any(w < 0 for w in weights) or abs(math.fsum(weights) - 1.0) > 1e-12:
        raise ValueError(f"Weights {weights!r} are not a convex combination")
    first = plan_list[0]
    for plan in plan_list[1:]:
        if plan.schedule != first.schedule:
            raise ValueError(
                f"Plans follow different schedules: {first.schedule!r} and {plan.schedule!r}"
            )
        if plan.space != first.space:
            raise errors.SpaceMismatchError("Plans live on different spaces")
    for weight, plan in zip(weights, plan_list):
        if weight == 1.0:
            return plan

    def allocate(time: float) -> plans.Allocation:
        allocations = [plan.at(time) for plan in plan_list]
        effort = sum(w * a.effort for w, a in zip(weights, allocations))
        total = math.fsum(w * a.total for w, a in zip(weights, allocations))
        return plans.Allocation(space=first.space, effort=effort, total=total)

    feasible = all(plan.feasible for plan in plan_list)
    parameters: dict[str, t.Any] = {
        "weights": weights,
        "components": tuple(p.family for p in plan_list),
    }
    sampled = [plan.times() for plan in plan_list if plan.times() is not None]
    if not sampled:
        return plans.ParametricPlan(
            family="composite",
            space=first.space,
            schedule=first.schedule,
            allocate=allocate,
            feasible=feasible,
            parameters=parameters,
        )
    start = max(float(times[0]) for times in sampled)
    stop = min(float(times[-1]) for times in sampled)
    union = np.unique(np.concatenate(sampled))
    union = union[(union >= start) & (union <= stop)]
    shared = set(sampled[0].tolist()).intersection(*(s.tolist() for s in sampled[1:]))
    parameters["interpolated_samples"] = int(sum(v not in shared for v in union.tolist()))
    return plans.SampledPlan(
        family="composite",
        space=first.space,
        schedule=first.schedule,
        t_grid=union,
        allocations=tuple(allocate(time) for time in union.tolist()),
        feasible=feasible,
        parameters=parameters,
    )


@dataclasses.dataclass(frozen=True, slots=True, eq=False)
class StrategyComparison:
    """Detection curves of φ* (planned for the composite prior) and φ_c (the composite plan).

    Attributes:
        prior: The composite prior φ* was planned for and P is evaluated under.
        optimal: Subjective and true curves of φ*.
        composite: Subjective and true curves of φ_c.
        difference: P#[φ_c] − P#[φ*] at every sample time.
        moment_matched: Whether the composite prior was moment-matched rather than exact.
    """

    t_grid: np.ndarray
    prior: priors.Prior
    optimal: tuple[evaluator.DetectionCurve, evaluator.DetectionCurve]
    composite: tuple[evaluator.DetectionCurve, evaluator.DetectionCurve]
    difference: np.ndarray
    moment_matched: bool


def compare_strategies(
    components: t.Sequence[priors.Prior],
    weights: t.Sequence[float],
    det: detection.DetectionModel,
    schedule: schedules.EffortSchedule,
    truth: plans.GroundTruth,
    t_grid: t.Sequence[float] | np.ndarray,
    *,
    moment_matched: bool = False,
    workers: int = 1,
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> StrategyComparison:
    """Plan optimally for the composite prior, and compose per-component optimal plans.

    Args:
        components: The inconsistent target distributions.
        weights: Their weights.
        det: The detection model.
        schedule: The effort schedule.
        truth: The actual target location.
        t_grid: Sample times.
        moment_matched: Replace an all-Gaussian mixture with its moment-matched Gaussian.
        workers: Evaluate the two strategies concurrently when greater than 1.
        tolerances: Numeric tolerances.
    """
    grid = np.array(t_grid, dtype=float)
    if moment_matched and all(isinstance(c, priors.Gaussian2D) for c in components):
        merged = moment_matched_gaussian(components, weights)
        logger.info("Composite prior moment-matched to σ=%.6g", merged.sigma)
    else:
        merged = mixture_prior(components, weights, tolerances=tolerances)

    def optimal() -> tuple[evaluator.DetectionCurve, evaluator.DetectionCurve]:
        plan = allocator.optimal_plan(merged, det, schedule, tolerances=tolerances)
        return evaluator.detection_curves(plan, merged, truth, det, grid)

    def composed() -> tuple[evaluator.DetectionCurve, evaluator.DetectionCurve]:
        parts = [
            allocator.optimal_plan(c, det, schedule, tolerances=tolerances)
            for c in components
        ]
        plan = composite_plan(parts, weights)
        return evaluator.detection_curves(plan, merged, truth, det, grid)

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=2) as pool:
            first, second = pool.submit(optimal), pool.submit(composed)
            optimal_curves, composite_curves = first.result(), second.result()
    else:
        optimal_curves, composite_curves = optimal(), composed()
    grid.flags.writeable = False
    return StrategyComparison(
        t_grid=grid,
        prior=merged,
        optimal=optimal_curves,
        composite=composite_curves,
        difference=composite_curves[1].values - optimal_curves[1].values,
        moment_matched=moment_matched,
    )
