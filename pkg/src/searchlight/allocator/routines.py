"""Water-filling solvers: the concrete strategies behind the allocator API.

Every solver equalizes the prior-weighted marginal rates q_x(y) = π(x)·∂d/∂y(x, y)
across funded cells at a common multiplier λ, and leaves a cell unfunded when
q_x(0) ≤ λ. The multiplier is found from Q(λ) = Σ q_x⁻¹(λ) = K.

Solvers work on log λ throughout: large budgets push λ below the smallest
positive float long before the allocation itself becomes extreme.
"""

from __future__ import annotations

import abc
import dataclasses
import logging
import math
import typing as t

import numpy as np

from searchlight import constants, errors
from searchlight.domain import detection, plans, priors
from searchlight.py import compat

__all__ = (
    "LagrangeSolution",
    "AbstractWaterFilling",
    "ExponentialWaterFilling",
    "BisectionWaterFilling",
    "bisect_log",
    "water_filling",
)

logger = logging.getLogger(__name__)

MethodT: t.TypeAlias = t.Literal["auto", "exact", "bisection"]


@dataclasses.dataclass(frozen=True, slots=True)
class LagrangeSolution:
    """The outcome of one water-filling solve.

    Attributes:
        lambda_star: The multiplier λ*; may underflow to 0 for very large budgets.
        log_lambda: ln λ*, always finite.
        allocation: The optimal allocation q_x⁻¹(λ*).
        kkt_spread: max |q_x(φ(x)) − λ*| over funded cells.
        budget_residual: Allocated cost minus the budget.
        complementary_slack: max(q_x(0) − λ*, 0) over unfunded supported cells.
        iterations: Root-finding iterations spent (0 for the exact solver).
        method: Which solver produced this solution.
    """

    lambda_star: float
    log_lambda: float
    allocation: plans.Allocation
    kkt_spread: float
    budget_residual: float
    complementary_slack: float
    iterations: int
    method: str


class AbstractWaterFilling(abc.ABC):
    """Common state and diagnostics for water-filling over one (prior, detection) pair.

    Attributes:
        prior: The target distribution.
        detection: The detection model.
        density: π(x) per cell.
        points: The cell points passed to the detection model.
        support: Mask of cells with π(x) > 0.
        log_peak: ln q_x(0) on the support (−∞ elsewhere).
    """

    __slots__ = (
        "prior",
        "detection",
        "tolerances",
        "space",
        "density",
        "points",
        "support",
        "log_peak",
    )

    method: t.ClassVar[str] = "abstract"

    def __init__(
        self,
        prior: priors.Prior,
        det: detection.DetectionModel,
        *,
        tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
    ):
        self.prior = prior
        self.detection = det
        self.tolerances = tolerances
        self.space = prior.space
        self.density = priors.density(prior)
        self.points = self.space.points()
        self.support = self.density > 0
        if not self.support.any():
            raise ValueError(f"{prior!r} is degenerate: every cell has zero mass")
        peak = self.density * det.deriv(self.points, 0.0)
        with np.errstate(divide="ignore"):
            self.log_peak = np.where(self.support, np.log(peak), -np.inf)

    def __repr__(self):
        name = self.__class__.__name__
        return f"<{name}(prior={self.prior!r}, detection={self.detection!r})>"

    @property
    def log_max_peak(self) -> float:
        """ln max_x q_x(0): above this λ nothing is funded."""
        return float(self.log_peak.max())

    def marginal(self, effort: np.ndarray) -> np.ndarray:
        """q_x(y) for every cell."""
        return self.density * self.detection.deriv(self.points, effort)

    @abc.abstractmethod
    def inverse_log(self, log_lambda: float) -> np.ndarray:
        """q_x⁻¹(λ) for every cell, clamped at 0, given ln λ."""

    def inverse(self, lam: float) -> np.ndarray:
        if not lam > 0:
            raise ValueError(f"λ must be positive, got {lam!r}")
        return self.inverse_log(math.log(lam))

    def aggregate_log(self, log_lambda: float) -> float:
        """Q(λ) given ln λ, as a fixed-order sum times the cell volume."""
        return float(np.sum(self.inverse_log(log_lambda))) * self.space.cell_volume

    def aggregate(self, lam: float) -> float:
        if not lam > 0:
            raise ValueError(f"λ must be positive, got {lam!r}")
        return self.aggregate_log(math.log(lam))

    @abc.abstractmethod
    def solve(self, budget: float) -> LagrangeSolution:
        """Find λ* with Q(λ*) = `budget` and the allocation it induces."""

    def _check_budget(self, budget: float) -> float:
        budget = float(budget)
        if not budget >= 0 or not math.isfinite(budget):
            raise ValueError(f"The budget must be finite and non-negative, got {budget!r}")
        return budget

    def _empty(self) -> LagrangeSolution:
        log_lambda = self.log_max_peak
        return LagrangeSolution(
            lambda_star=math.exp(log_lambda),
            log_lambda=log_lambda,
            allocation=plans.Allocation.zeros(self.space),
            kkt_spread=0.0,
            budget_residual=0.0,
            complementary_slack=0.0,
            iterations=0,
            method=self.method,
        )

    def _solution(
        self, budget: float, log_lambda: float, effort: np.ndarray, iterations: int
    ) -> LagrangeSolution:
        allocation = plans.Allocation(
            space=self.space,
            effort=effort,
            total=float(np.sum(effort)) * self.space.cell_volume,
        )
        lam = math.exp(log_lambda)
        funded = effort > 0
        spread = 0.0
        if funded.any():
            log_q = self._log_marginal(effort, funded)
            spread = float(np.max(np.abs(np.expm1(log_q - log_lambda)))) * lam
        idle = self.support & ~funded
        slack = 0.0
        if idle.any():
            slack = max(0.0, float(np.max(np.expm1(self.log_peak[idle] - log_lambda))) * lam)
        residual = allocation.total - budget
        if abs(residual) > self.tolerances.budget * max(1.0, budget):
            logger.warning(
                "Budget residual %.3e exceeds tolerance for K=%r", residual, budget
            )
        return LagrangeSolution(
            lambda_star=lam,
            log_lambda=log_lambda,
            allocation=allocation,
            kkt_spread=spread,
            budget_residual=residual,
            complementary_slack=slack,
            iterations=iterations,
            method=self.method,
        )

    def _log_marginal(self, effort: np.ndarray, mask: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(
                self.density[mask] * self.detection.deriv(self.points[mask], effort[mask])
            )


class ExponentialWaterFilling(AbstractWaterFilling):
    """Exact water-filling for `d(x, y) = 1 − exp(−α(x)·y)`.

    Here q_x⁻¹(λ) = max(0, (ln(π(x)α(x)) − ln λ)/α(x)), so Q is piecewise linear in
    ln λ with a breakpoint wherever a cell enters the support. Cells are sorted by
    q_x(0) once; each solve then locates its segment with a binary search and
    solves the linear piece in closed form.
    """

    __slots__ = ("alpha", "_order", "_breaks", "_weight", "_weighted_log")

    method: t.ClassVar[str] = "exact"

    def __init__(
        self,
        prior: priors.Prior,
        det: detection.ExponentialRate,
        *,
        tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
    ):
        super().__init__(prior, det, tolerances=tolerances)
        self.alpha = det.alpha(self.points)
        cells = np.flatnonzero(self.support)
        order = cells[np.argsort(-self.log_peak[cells], kind="stable")]
        log_peak = self.log_peak[order]
        weight = self.space.cell_volume / self.alpha[order]
        self._order = order
        self._weight = np.cumsum(weight)
        self._weighted_log = np.cumsum(weight * log_peak)
        # Q evaluated at λ = q_j(0), just as cell j starts to receive effort.
        breaks = np.zeros(order.size)
        breaks[1:] = self._weighted_log[:-1] - log_peak[1:] * self._weight[:-1]
        self._breaks = np.maximum.accumulate(breaks)

    def _log_marginal(self, effort, mask):
        return self.log_peak[mask] - self.alpha[mask] * effort[mask]

    def inverse_log(self, log_lambda: float) -> np.ndarray:
        out = np.zeros(self.space.size)
        s = self.support
        out[s] = np.maximum(0.0, (self.log_peak[s] - log_lambda) / self.alpha[s])
        return out

    def solve(self, budget: float) -> LagrangeSolution:
        budget = self._check_budget(budget)
        if budget == 0:
            return self._empty()
        active = int(np.searchsorted(self._breaks, budget, side="left"))
        log_lambda = (self._weighted_log[active - 1] - budget) / self._weight[active - 1]
        logger.debug("Exact water-filling: K=%r, %d funded cells", budget, active)
        return self._solution(budget, log_lambda, self.inverse_log(log_lambda), 0)


class BisectionWaterFilling(AbstractWaterFilling):
    """Generic water-filling for any regular detection model.

    Q⁻¹ is found by bisection on ln λ, starting from a bracket whose lower end is
    pushed down from ln max q_x(0) by doubling steps.
    """

    __slots__ = ()

    method: t.ClassVar[str] = "bisection"

    def inverse_log(self, log_lambda: float) -> np.ndarray:
        out = np.zeros(self.space.size)
        live = self.support & (self.log_peak > log_lambda)
        if live.any():
            level = np.exp(log_lambda) / self.density[live]
            out[live] = self.detection.deriv_inverse(self.points[live], level)
        return out

    def solve(self, budget: float) -> LagrangeSolution:
        budget = self._check_budget(budget)
        if budget == 0:
            return self._empty()
        log_lambda, iterations = bisect_log(
            self.aggregate_log,
            budget,
            hi=self.log_max_peak,
            tolerances=self.tolerances,
        )
        return self._solution(
            budget, log_lambda, self.inverse_log(log_lambda), iterations
        )


def bisect_log(
    aggregate: t.Callable[[float], float],
    target: float,
    *,
    hi: float,
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> tuple[float, int]:
    """Solve `aggregate(ln λ) = target` for a non-increasing `aggregate`.

    Args:
        aggregate: Q as a function of ln λ.
        target: The budget K > 0.
        hi: A value of ln λ with `aggregate(hi) ≤ target`.
        tolerances: Supplies the relative target and the iteration cap.

    Returns:
        ln λ* and the number of iterations used.

    Raises:
        ConvergenceError: If no bracket is found or bisection stalls.
    """
    step = 1.0
    lo = hi - step
    iterations = 0
    while aggregate(lo) < target:
        iterations += 1
        if iterations >= tolerances.max_iterations:
            raise errors.ConvergenceError(
                "Could not bracket Q⁻¹(K)",
                bracket=(lo, hi),
                iterations=iterations,
                residual=aggregate(lo) - target,
            )
        hi, step = lo, step * 2
        lo = hi - step
    goal = tolerances.solve * target
    value = math.nan
    mid = 0.5 * (lo + hi)
    for _ in range(tolerances.max_iterations):
        iterations += 1
        mid = 0.5 * (lo + hi)
        value = aggregate(mid)
        if abs(value - target) <= goal:
            break
        if value > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * math.ulp(max(abs(lo), abs(hi))):
            break
    else:
        raise errors.ConvergenceError(
            "Bisection for Q⁻¹(K) did not converge",
            bracket=(lo, hi),
            iterations=iterations,
            residual=value - target,
        )
    logger.debug(
        "Solved Q(λ)=%r: ln λ*=%r after %d iterations", target, mid, iterations
    )
    return mid, iterations


_HANDLERS: dict[type, type[AbstractWaterFilling]] = {
    detection.ExponentialRate: ExponentialWaterFilling,
}


@compat.cache
def water_filling(
    prior: priors.Prior,
    det: detection.DetectionModel,
    *,
    method: MethodT = "auto",
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> AbstractWaterFilling:
    """Build (once) the water-filling solver for a prior and detection model.

    Args:
        prior: The target distribution.
        det: The detection model.
        method: `"exact"` for the sorted-breakpoint solver (exponential models only),
            `"bisection"` for the generic solver, `"auto"` to pick the fastest available.
        tolerances: Numeric tolerances.
    """
    if method == "bisection":
        return BisectionWaterFilling(prior, det, tolerances=tolerances)
    handler = _HANDLERS.get(type(det))
    if handler is None:
        if method == "exact":
            raise ValueError(f"No exact water-filling solver for {det!r}")
        return BisectionWaterFilling(prior, det, tolerances=tolerances)
    return handler(prior, det, tolerances=tolerances)
