"""The built-in check suite over the bundled scenarios.

Every check recomputes a worked example and compares it with closed forms, brute force
or Monte Carlo. [`run_suite`][searchlight.suite.run_suite] also writes each scenario's
curve table, so two runs can be compared byte for byte.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import pathlib
import time as clock
import typing as t

import numpy as np

from searchlight import allocator, alternatives, composite, evaluator, scenario, serdes, tables
from searchlight.domain import detection, plans, priors, schedules, spaces
from searchlight.oracle import brute, montecarlo, references

__all__ = ("CheckResult", "SuiteReport", "run_suite", "CHECKS")

logger = logging.getLogger(__name__)

CheckFn: t.TypeAlias = t.Callable[["_Context"], tuple[bool, str]]
CHECKS: dict[str, CheckFn] = {}

DISCRETE_CURVE_TOLERANCE: t.Final[float] = 1e-9
GRID_CURVE_TOLERANCE: t.Final[float] = 1e-3
_CURVE_CHECKED: t.Final[tuple[str, ...]] = (
    "example1",
    "example2",
    "example3",
    "remark3",
    "remark4",
    "example4",
    "example5",
    "example6",
    "example7",
)


@dataclasses.dataclass(frozen=True, slots=True)
class CheckResult:
    """One check's outcome; `elapsed` is an ISO-8601 duration."""

    name: str
    passed: bool
    detail: str
    elapsed: str


@dataclasses.dataclass(frozen=True, slots=True)
class SuiteReport:
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(r for r in self.results if not r.passed)


class _Context:
    """Scenarios and curve tables, loaded once per suite run."""

    __slots__ = ("configs", "curves", "seed", "workers")

    def __init__(self, *, seed: int | None, workers: int):
        self.configs: dict[str, scenario.ScenarioConfig] = {}
        self.curves: dict[str, tables.Table] = {}
        self.seed = seed
        self.workers = workers

    def config(self, name: str) -> scenario.ScenarioConfig:
        if name not in self.configs:
            self.configs[name] = scenario.load_scenario(name)
        return self.configs[name]

    def table(self, name: str) -> tables.Table:
        if name not in self.curves:
            config = self.config(name)
            if "compare" in config.outputs and "curves" not in config.outputs:
                self.curves[name] = tables.compare_table(config, workers=self.workers)
            else:
                self.curves[name] = tables.curves_table(config, workers=self.workers)
        return self.curves[name]


def _check(name: str) -> t.Callable[[CheckFn], CheckFn]:
    def decorator(func: CheckFn) -> CheckFn:
        CHECKS[name] = func
        return func

    return decorator


def run_suite(
    out: pathlib.Path | None = None,
    *,
    seed: int | None = None,
    workers: int = 1,
    only: t.Iterable[str] | None = None,
) -> SuiteReport:
    """Run the checks (all of them by default) and write each scenario's curves to `out`.

    A check which raises is recorded as failed with the exception as its detail.
    """
    context = _Context(seed=seed, workers=workers)
    selected = list(CHECKS) if only is None else list(only)
    results = []
    for name in selected:
        started = clock.perf_counter()
        try:
            passed, detail = CHECKS[name](context)
        except Exception as e:  # noqa: BLE001
            logger.exception("Check %s raised", name)
            passed, detail = False, f"{type(e).__name__}: {e}"
        elapsed = serdes.isoformat(round(clock.perf_counter() - started, 6))
        logger.info("%s %s (%s)", "PASS" if passed else "FAIL", name, detail)
        results.append(CheckResult(name=name, passed=passed, detail=detail, elapsed=elapsed))
    if out is not None:
        for name in scenario.bundled():
            context.table(name).write(out / f"{name}.csv")
    return SuiteReport(results=tuple(results))


def _max_error(values: t.Iterable[float], expected: t.Iterable[float]) -> float:
    return float(np.max(np.abs(np.fromiter(values, float) - np.fromiter(expected, float))))


@_check("allocation:closed-form")
def _allocation_closed_form(context: _Context) -> tuple[bool, str]:
    cases = []
    for name, effort, expected in (
        ("example1", 2.0, (1.0, 1.0)),
        ("example3", math.log(4), references.two_cell_optimal(2 / 3, math.log(4))),
        ("remark3", 1.0, ((2 - math.log(2)) / 3, (1 + math.log(2)) / 3)),
    ):
        config = context.config(name)
        alloc = allocator.optimal_allocation(
            config.prior, config.detection, effort, tolerances=config.tolerances
        )
        cases.append((name, _max_error(alloc.effort, expected)))
    worst = max(error for _, error in cases)
    return worst <= 1e-10, f"max error {worst:.3e} over {[n for n, _ in cases]}"


@_check("curves:references")
def _curves_references(context: _Context) -> tuple[bool, str]:
    failures = []
    worst: dict[str, float] = {}
    for name in _CURVE_CHECKED:
        config = context.config(name)
        table = context.table(name)
        assert config.reference is not None
        tolerance = (
            DISCRETE_CURVE_TOLERANCE
            if isinstance(config.space, spaces.DiscreteSpace)
            else GRID_CURVE_TOLERANCE
        )
        grid = table.column("t").tolist()
        refs = [
            references.closed_form_reference(
                config.reference.id, t=time, **config.reference.params
            )
            for time in grid
        ]
        residuals = []
        columns = tables.CURVE_COLUMNS[1:] + tables.ALT_COLUMNS
        for column, attr in zip(columns, ("P", "P_true", "P_alt", "P_true_alt")):
            if column not in table.header:
                continue
            expected = [getattr(r, attr) for r in refs]
            if any(e is None for e in expected):
                continue
            residuals.append(_max_error(table.column(column), expected))
        worst[name] = max(residuals)
        if worst[name] > tolerance:
            failures.append(name)
    detail = ", ".join(f"{n}={e:.2e}" for n, e in worst.items())
    return not failures, detail if not failures else f"failed {failures}: {detail}"


@_check("identity:uniform-homogeneous")
def _identity(context: _Context) -> tuple[bool, str]:
    discrete = context.table("example1")
    grid = context.table("example2")
    gap_discrete = _max_error(discrete.column("P_subjective"), discrete.column("P_true"))
    gap_grid = _max_error(grid.column("P_subjective"), grid.column("P_true"))
    return (
        gap_discrete <= 1e-12 and gap_grid <= 2e-3,
        f"|P − P#| discrete {gap_discrete:.2e}, grid {gap_grid:.2e}",
    )


@_check("identity:coordinate-rate-gap")
def _rate_gap(context: _Context) -> tuple[bool, str]:
    table = context.table("remark3")
    efforts = table.column("t")
    keep = efforts > math.log(2) / 2
    gap = table.column("P_subjective")[keep] - table.column("P_true")[keep]
    expected = 2 ** (-5 / 3) * np.exp(-2 * efforts[keep] / 3)
    error = _max_error(gap, expected)
    return error <= 1e-10 and bool(np.all(gap > 0)), f"max gap error {error:.3e}"


def _order(table: tables.Table, *, skip_zero: bool) -> tuple[bool, str]:
    keep = table.column("t") > 0 if skip_zero else np.ones(len(table.rows), bool)
    subjective = table.column("P_subjective")[keep] - table.column("P_subjective_alt")[keep]
    true = table.column("P_true_alt")[keep] - table.column("P_true")[keep]
    passed = bool(np.all(subjective > 0) and np.all(true > 0))
    return passed, f"min P gap {subjective.min():.3e}, min P# gap {true.min():.3e}"


@_check("order:example5")
def _order_example5(context: _Context) -> tuple[bool, str]:
    table = context.table("example5")
    passed, detail = _order(table, skip_zero=False)
    effort = math.log(4) + table.column("t")
    subjective = table.column("P_subjective") - table.column("P_subjective_alt")
    true = table.column("P_true_alt") - table.column("P_true")
    error = max(
        _max_error(subjective, (1 - 2 * math.sqrt(2) / 3) * np.exp(-effort / 2)),
        _max_error(true, (math.sqrt(2) / 2 - 0.5) * np.exp(-effort / 2)),
    )
    return passed and error <= 1e-10, f"{detail}, gap error {error:.3e}"


@_check("order:example6")
def _order_example6(context: _Context) -> tuple[bool, str]:
    return _order(context.table("example6"), skip_zero=True)


@_check("composite:example7")
def _composite_example7(context: _Context) -> tuple[bool, str]:
    config = context.config("example7")
    table = tables.compare_table(config, workers=context.workers)
    difference = table.column("difference")
    effort = config.schedule(table.column("t"))
    optimal = 1 - 0.52335 * np.exp(-0.15 * effort)
    composed = 1 - 0.21771 * np.exp(-0.15 * effort)
    error = max(
        _max_error(table.column("P_true"), optimal),
        _max_error(table.column("P_true_alt"), composed),
    )
    passed = bool(np.all(difference > 0)) and error <= 1e-3
    return passed, f"min P# advantage {difference.min():.3e}, coefficient error {error:.2e}"


@_check("composite:example8-moment-matched")
def _composite_example8(context: _Context) -> tuple[bool, str]:
    config = context.config("example8")
    table = tables.compare_table(config, moment_matched=True, workers=context.workers)
    times = table.column("t")
    keep = (times >= 10) & (times <= 30)
    scale = np.sqrt(config.schedule(times[keep]) / math.pi)
    optimal = float(np.mean(-np.log1p(-table.column("P_true")[keep]) / scale))
    composed = float(np.mean(-np.log1p(-table.column("P_true_alt")[keep]) / scale))
    positive = bool(np.all(table.column("difference")[times > 0] > 0))
    passed = abs(optimal - 0.686) <= 1e-3 and abs(composed - 1.25) <= 1e-3 and positive
    return passed, f"coefficients {optimal:.4f} and {composed:.4f}"


@_check("limit:example4")
def _limit_example4(context: _Context) -> tuple[bool, str]:
    config = context.config("example4")
    sigma = config.priors[0].sigma
    threshold = math.log(1000) ** 2 * math.pi * sigma**2
    plan = scenario.build_plan(config)
    grid = np.linspace(0, threshold, 60)
    _, true = evaluator.detection_curves(
        plan, config.prior, config.truth, config.detection, grid
    )
    final = float(true.values[-1])
    return true.is_nondecreasing() and final >= 0.999, f"P#(t={threshold:.1f}) = {final:.6f}"


@_check("limit:counterexample6")
def _limit_counterexample(context: _Context) -> tuple[bool, str]:
    config = context.config("counterexample6")
    plan = scenario.build_plan(config)
    value = evaluator.true_detection_prob(config.truth, config.detection, plan.at(10.0))
    return value <= 1e-4, f"P#(t=10) = {value:.3e}"


@_check("mean-time:example1")
def _mean_time_example1(context: _Context) -> tuple[bool, str]:
    config = context.config("example1")
    summary = tables.mean_times(config)
    mu, mu_true = summary["mu"].value, summary["mu_true"].value
    return abs(mu - 2) <= 1e-6 and abs(mu_true - 2) <= 1e-6, f"mu={mu:.9f}, mu#={mu_true:.9f}"


@_check("mean-time:counterexample6")
def _mean_time_counterexample(context: _Context) -> tuple[bool, str]:
    config = context.config("counterexample6")
    plan = scenario.build_plan(config)
    result = evaluator.mean_time_true(plan, config.truth, config.detection)
    return result.divergent, f"divergent={result.divergent}, horizon={result.horizon:g}"


@_check("brute-force:two-cell")
def _brute_force(context: _Context) -> tuple[bool, str]:
    worst = -math.inf
    for name in ("example3", "remark3", "example7"):
        config = context.config(name)
        for effort in (0.1, 0.5, 1.0, 2.0, 5.0):
            best = brute.brute_force_allocation(config.prior, config.detection, effort, 1e-3)
            optimal = allocator.optimal_allocation(config.prior, config.detection, effort)
            shortfall = evaluator.subjective_detection_prob(
                config.prior, config.detection, best
            ) - evaluator.subjective_detection_prob(config.prior, config.detection, optimal)
            worst = max(worst, shortfall)
    return worst <= 1e-6, f"largest brute-force advantage {worst:.3e}"


@_check("monte-carlo:example1")
def _monte_carlo(context: _Context) -> tuple[bool, str]:
    config = context.config("example1")
    plan = scenario.build_plan(config)
    seed = config.seed if context.seed is None else context.seed
    estimate = montecarlo.monte_carlo_detection(
        config.prior, config.detection, plan, 2.0, 1_000_000, seed, workers=context.workers
    )
    expected = -math.expm1(-1.0)
    return (
        estimate.within(expected),
        f"{estimate.estimate:.6f} ± {estimate.std_error:.2e} vs {expected:.6f}",
    )


@_check("feasibility:bundled")
def _feasibility(context: _Context) -> tuple[bool, str]:
    failed = []
    for name in scenario.bundled():
        config = context.config(name)
        requests = [config.plan] + ([config.alternative] if config.alternative else [])
        grid = np.linspace(config.time.start, config.time.stop, 21)
        for request in requests:
            if request.kind == "composite" and len(config.priors) < 2:
                continue
            report = evaluator.feasibility_check(
                scenario.build_plan(config, request),
                config.schedule,
                grid,
                tolerances=config.tolerances,
            )
            if not report.passed:
                failed.append(f"{name}:{request.kind}")
    return not failed, f"infeasible plans: {failed}" if failed else "all plans spend E(t)"


@_check("composite:exact-mixture")
def _exact_mixture(context: _Context) -> tuple[bool, str]:
    config = context.config("example8")
    comparison = composite.compare_strategies(
        config.priors,
        config.weights,
        config.detection,
        config.schedule,
        config.truth,
        np.linspace(0, 30, 31),
        workers=context.workers,
        tolerances=config.tolerances,
    )
    # φ* is optimal for the prior it is evaluated under.
    advantage = comparison.optimal[0].values - comparison.composite[0].values
    return bool(np.all(advantage >= -1e-10)), f"min P advantage {advantage.min():.3e}"


REFINEMENT_TIMES: t.Final[np.ndarray] = np.arange(0.5, 20.01, 0.5)
RANDOM_INSTANCES: t.Final[int] = 200


def _grid_error(
    plan_fn: t.Callable[[priors.Prior], plans.SearchPlan],
    prior: priors.Prior,
    reference_id: str,
    attrs: tuple[str, str],
    **params: float,
) -> float:
    rate = detection.ExponentialRate(1.0)
    origin = plans.GroundTruth((0.0, 0.0))
    subjective, true = evaluator.detection_curves(
        plan_fn(prior), prior, origin, rate, REFINEMENT_TIMES
    )
    refs = [
        references.closed_form_reference(reference_id, t=time, **params)
        for time in REFINEMENT_TIMES.tolist()
    ]
    return max(
        _max_error(subjective.values, [getattr(r, attrs[0]) for r in refs]),
        _max_error(true.values, [getattr(r, attrs[1]) for r in refs]),
    )


def _optimal(prior: priors.Prior) -> plans.SearchPlan:
    return allocator.optimal_plan(prior, detection.ExponentialRate(1.0), schedules.Linear(1.0))


def _shifted(prior: priors.Prior) -> plans.SearchPlan:
    return alternatives.shifted_gaussian(prior.space, schedules.Linear(1.0), sigma=1.0)


@_check("refinement:grids")
def _refinement(context: _Context) -> tuple[bool, str]:
    cases = {
        "example4": (
            lambda h: priors.Gaussian2D(sigma=2.0, space=spaces.truncated_grid(2.0, h)),
            _optimal,
            ("P", "P_true"),
            {"sigma": 2.0},
            0.05,
        ),
        "example6": (
            lambda h: priors.Gaussian2D(sigma=2.0, space=spaces.truncated_grid(2.0, h)),
            _shifted,
            ("P_alt", "P_true_alt"),
            {"sigma": 2.0},
            0.05,
        ),
        "example2": (
            lambda h: priors.UniformDisc(
                radius=1.0, space=spaces.GridSpace.centered(half_width=1.0, resolution=h)
            ),
            _optimal,
            ("P", "P_true"),
            {"radius": 1.0},
            0.02,
        ),
    }
    failed, details = [], []
    for name, (prior_fn, plan_fn, attrs, params, h) in cases.items():
        coarse = _grid_error(plan_fn, prior_fn(h), name, attrs, **params)
        fine = _grid_error(plan_fn, prior_fn(h / 2), name, attrs, **params)
        ratio = coarse / fine if fine > 0 else math.inf
        details.append(f"{name}: {coarse:.2e} → {fine:.2e} (×{ratio:.1f})")
        if coarse > GRID_CURVE_TOLERANCE or ratio < 1.8:
            failed.append(name)
    detail = "; ".join(details)
    return not failed, detail if not failed else f"failed {failed}: {detail}"


@_check("allocation:random-instances")
def _random_instances(context: _Context) -> tuple[bool, str]:
    rng = np.random.default_rng(0 if context.seed is None else context.seed)
    worst_residual = worst_spread = 0.0
    retreats = 0
    for _ in range(RANDOM_INSTANCES):
        m = int(rng.integers(1, 51))
        weights = rng.dirichlet(np.full(m, 0.5))
        prior = priors.DiscretePmf(weights=tuple((weights / math.fsum(weights)).tolist()))
        det = detection.ExponentialRate(tuple(rng.uniform(0.1, 5.0, size=m).tolist()))
        previous = np.zeros(m)
        for budget in np.sort(rng.uniform(0.0, 20.0, size=4)).tolist():
            solution = allocator.solve_lambda(prior, det, budget)
            worst_residual = max(
                worst_residual, abs(solution.budget_residual) / max(1.0, budget)
            )
            if solution.lambda_star > 0:
                worst_spread = max(worst_spread, solution.kkt_spread / solution.lambda_star)
            effort = solution.allocation.effort
            retreats += int(np.any(effort < previous - 1e-12))
            previous = effort
    passed = worst_residual <= 1e-9 and worst_spread <= 1e-8 and retreats == 0
    return passed, (
        f"budget residual {worst_residual:.2e}, KKT spread {worst_spread:.2e}, "
        f"{retreats} non-monotone steps over {RANDOM_INSTANCES} instances"
    )


@_check("mean-time:gaussian-unit-sweep")
def _mean_time_unit_sweep(context: _Context) -> tuple[bool, str]:
    sigma = 1 / math.sqrt(math.pi)
    prior = priors.Gaussian2D(sigma=sigma, space=spaces.truncated_grid(sigma, sigma / 40))
    rate = detection.ExponentialRate(1.0)
    plan = allocator.optimal_plan(prior, rate, schedules.Linear(1.0))
    policy = evaluator.HorizonPolicy(epsabs=1e-7, epsrel=1e-7, limit=100)
    mu = evaluator.mean_time_subjective(plan, prior, rate, policy).value
    mu_true = evaluator.mean_time_true(plan, plans.GroundTruth((0.0, 0.0)), rate, policy).value
    passed = abs(mu - 6.0) <= 1e-3 and abs(mu_true - 2.0) <= 1e-3
    return passed, f"mu={mu:.6f}, mu#={mu_true:.6f}"
