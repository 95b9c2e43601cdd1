"""Subjective and true detection probabilities, detection curves and mean times.

Examples: Typical Usage
    >>> from searchlight import allocator, domain, evaluator
    >>> prior = domain.DiscretePmf(weights=(0.5, 0.5))
    >>> det = domain.ExponentialRate(1.0)
    >>> plan = allocator.optimal_plan(prior, det, domain.Linear(1.0))
    >>> round(evaluator.mean_time_subjective(plan, prior, det).value, 6)
    2.0
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import logging
import math
import typing as t

import numpy as np
from scipy import integrate

from searchlight import constants, errors
from searchlight.domain import detection, plans, priors, schedules

__all__ = (
    "DetectionCurve",
    "HorizonPolicy",
    "MeanTime",
    "FeasibilityReport",
    "subjective_detection_prob",
    "true_detection_prob",
    "detection_curves",
    "mean_time_subjective",
    "mean_time_true",
    "feasibility_check",
)

logger = logging.getLogger(__name__)

KindT: t.TypeAlias = t.Literal["subjective", "true"]


@dataclasses.dataclass(frozen=True, slots=True, eq=False)
class DetectionCurve:
    """A detection probability sampled over time."""

    t_grid: np.ndarray
    values: np.ndarray
    kind: KindT

    def is_nondecreasing(self, tolerance: float = 1e-12) -> bool:
        return bool(np.all(np.diff(self.values) >= -tolerance))


@dataclasses.dataclass(frozen=True, slots=True)
class HorizonPolicy:
    """How far mean-time integrals are pushed before extrapolating or giving up.

    Attributes:
        survival: Stop extending the horizon once 1 − P falls below this.
        divergence: Flag divergence if 1 − P is still at least this at `cap`.
        cap: The hard limit on the horizon.
        initial: The first horizon tried; it doubles from here.
    """

    survival: float = 1e-8
    divergence: float = 1e-3
    cap: float = 1e6
    initial: float = 1.0
    epsabs: float = 1e-11
    epsrel: float = 1e-10
    limit: int = 200


@dataclasses.dataclass(frozen=True, slots=True)
class MeanTime:
    """An expected time to detection.

    Attributes:
        value: The mean time, or `inf` when divergent.
        divergent: Whether 1 − P failed to decay by the horizon cap.
        horizon: The horizon up to which the integral was computed.
        tail: The extrapolated contribution beyond the horizon.
    """

    value: float
    divergent: bool
    horizon: float
    tail: float


@dataclasses.dataclass(frozen=True, slots=True)
class FeasibilityReport:
    """Whether a plan spends exactly E(t) at every sampled t."""

    passed: bool
    max_residual: float
    worst_time: float
    samples: int

    def __bool__(self) -> bool:
        return self.passed


def subjective_detection_prob(
    prior: priors.Prior,
    det: detection.DetectionModel,
    alloc: plans.Allocation,
) -> float:
    """P[f] = Σ π(x)·d(x, f(x)), by midpoint quadrature on grids.

    Raises:
        SpaceMismatchError: If the allocation and prior live on different spaces.
    """
    _check_space(prior.space, alloc.space)
    mass = priors.masses(prior)
    live = mass > 0
    points = alloc.space.points()[live]
    value = float(np.sum(mass[live] * det.value(points, alloc.effort[live])))
    return min(1.0, max(0.0, value))


def true_detection_prob(
    truth: plans.GroundTruth,
    det: detection.DetectionModel,
    alloc: plans.Allocation,
) -> float:
    """P#[f] = d(x₀, f(x₀)); on grids f(x₀) is the density of the cell holding x₀.

    Raises:
        ValueError: If x₀ lies outside the allocation's space.
    """
    index = truth.index(alloc.space)
    point = alloc.space.points()[index : index + 1]
    value = float(det.value(point, alloc.effort[index : index + 1])[0])
    return min(1.0, max(0.0, value))


def detection_curves(
    plan: plans.SearchPlan,
    prior: priors.Prior,
    truth: plans.GroundTruth,
    det: detection.DetectionModel,
    t_grid: t.Sequence[float] | np.ndarray,
    *,
    workers: int = 1,
) -> tuple[DetectionCurve, DetectionCurve]:
    """Evaluate P and P# of `plan` at every sample time.

    Sample times may be evaluated on `workers` threads; the output order never
    depends on the number of workers.
    """
    grid = np.array(t_grid, dtype=float)
    _check_space(prior.space, plan.space)

    def evaluate(time: float) -> tuple[float, float]:
        alloc = plan.at(time)
        return (
            subjective_detection_prob(prior, det, alloc),
            true_detection_prob(truth, det, alloc),
        )

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(evaluate, grid.tolist()))
    else:
        pairs = [evaluate(time) for time in grid.tolist()]
    values = np.asarray(pairs, dtype=float).reshape(-1, 2)
    grid.flags.writeable = False
    return (
        DetectionCurve(t_grid=grid, values=values[:, 0], kind="subjective"),
        DetectionCurve(t_grid=grid, values=values[:, 1], kind="true"),
    )


def mean_time_subjective(
    plan: plans.SearchPlan,
    prior: priors.Prior,
    det: detection.DetectionModel,
    policy: HorizonPolicy = HorizonPolicy(),
) -> MeanTime:
    """μ = ∫₀^∞ (1 − P[φ(·, t)]) dt."""

    def survival(time: float) -> float:
        return 1.0 - subjective_detection_prob(prior, det, plan.at(time))

    return _mean_time(survival, plan, policy)


def mean_time_true(
    plan: plans.SearchPlan,
    truth: plans.GroundTruth,
    det: detection.DetectionModel,
    policy: HorizonPolicy = HorizonPolicy(),
) -> MeanTime:
    """μ# = ∫₀^∞ (1 − P#[φ(·, t)]) dt."""

    def survival(time: float) -> float:
        return 1.0 - true_detection_prob(truth, det, plan.at(time))

    return _mean_time(survival, plan, policy)


def feasibility_check(
    plan: plans.SearchPlan,
    schedule: schedules.EffortSchedule,
    t_grid: t.Sequence[float] | np.ndarray | None = None,
    *,
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> FeasibilityReport:
    """Check that the plan's cost equals E(t) at every sampled t.

    Args:
        plan: The plan to check.
        schedule: The effort schedule it must honor.
        t_grid: Sample times; defaults to the plan's own samples.
        tolerances: Supplies the relative feasibility tolerance.

    Raises:
        ValueError: If no sample times are available.
    """
    grid = plan.times() if t_grid is None else np.asarray(t_grid, dtype=float)
    if grid is None:
        raise ValueError(f"A {plan.family!r} plan has no samples; pass t_grid")
    residuals = np.asarray([plan.at(time).total - schedule(time) for time in grid.tolist()])
    budgets = np.maximum(1.0, np.abs(schedule(grid)))
    worst = int(np.argmax(np.abs(residuals)))
    passed = bool(np.all(np.abs(residuals) <= tolerances.feasibility * budgets))
    return FeasibilityReport(
        passed=passed,
        max_residual=float(np.abs(residuals[worst])),
        worst_time=float(grid[worst]),
        samples=int(grid.size),
    )


def _mean_time(
    survival: t.Callable[[float], float],
    plan: plans.SearchPlan,
    policy: HorizonPolicy,
) -> MeanTime:
    cap = min(policy.cap, plan.horizon)
    horizon = min(policy.initial, cap)
    edges = [0.0, horizon]
    while survival(horizon) >= policy.survival and horizon < cap:
        horizon = min(2.0 * horizon, cap)
        edges.append(horizon)
    remaining = survival(horizon)
    logger.debug("Mean-time horizon %r with survival %.3e", horizon, remaining)
    if remaining >= policy.divergence:
        return MeanTime(value=math.inf, divergent=True, horizon=horizon, tail=math.inf)
    body = 0.0
    for a, b in zip(edges, edges[1:]):
        part, _ = integrate.quad(
            survival, a, b, epsabs=policy.epsabs, epsrel=policy.epsrel, limit=policy.limit
        )
        body += part
    tail = 0.0
    if remaining > 0:
        earlier = survival(0.9 * horizon)
        if earlier > remaining:
            decay = math.log(earlier / remaining) / (0.1 * horizon)
            tail = remaining / decay
    return MeanTime(value=body + tail, divergent=False, horizon=horizon, tail=tail)


def _check_space(expected, actual) -> None:
    if actual != expected:
        raise errors.SpaceMismatchError(
            f"Allocation on {actual!r} evaluated against a prior on {expected!r}"
        )
