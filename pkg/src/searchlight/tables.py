"""The data series behind every CLI output, as header-plus-rows tables."""

from __future__ import annotations

import dataclasses
import logging
import os
import pathlib
import typing as t

import numpy as np

from searchlight import allocator, composite, evaluator, scenario, serdes
from searchlight.domain import plans, spaces

__all__ = (
    "Table",
    "curves_table",
    "compare_table",
    "plan_table",
    "plan_summary",
    "mean_times",
    "CURVE_COLUMNS",
    "ALT_COLUMNS",
    "COMPARE_COLUMNS",
)

logger = logging.getLogger(__name__)

CURVE_COLUMNS: t.Final[tuple[str, ...]] = ("t", "P_subjective", "P_true")
ALT_COLUMNS: t.Final[tuple[str, ...]] = ("P_subjective_alt", "P_true_alt")
COMPARE_COLUMNS: t.Final[tuple[str, ...]] = (*CURVE_COLUMNS, *ALT_COLUMNS, "difference")


@dataclasses.dataclass(frozen=True, slots=True, eq=False)
class Table:
    """Named float columns."""

    header: tuple[str, ...]
    rows: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.header.index(name)]

    def write(self, path: str | os.PathLike) -> pathlib.Path:
        return serdes.write_csv(path, self.header, self.rows.tolist())


def curves_table(config: scenario.ScenarioConfig, *, workers: int = 1) -> Table:
    """P and P# of the scenario's plan, and of its alternative plan if it has one."""
    grid = config.time.grid()
    columns = [grid]
    requests = [config.plan] + ([config.alternative] if config.alternative else [])
    for request in requests:
        plan = scenario.build_plan(config, request)
        subjective, true = evaluator.detection_curves(
            plan, config.prior, config.truth, config.detection, grid, workers=workers
        )
        columns.extend((subjective.values, true.values))
    header = CURVE_COLUMNS + (ALT_COLUMNS if config.alternative else ())
    return Table(header=header, rows=np.column_stack(columns))


def compare_table(
    config: scenario.ScenarioConfig,
    *,
    moment_matched: bool | None = None,
    workers: int = 1,
) -> Table:
    """Optimal-for-the-composite-prior against the composite plan.

    Raises:
        ValueError: If the scenario has a single prior.
    """
    if len(config.priors) < 2:
        raise ValueError(f"Scenario {config.name!r} has one prior; nothing to compare")
    comparison = composite.compare_strategies(
        config.priors,
        config.weights,
        config.detection,
        config.schedule,
        config.truth,
        config.time.grid(),
        moment_matched=config.moment_matched if moment_matched is None else moment_matched,
        workers=workers,
        tolerances=config.tolerances,
    )
    rows = np.column_stack(
        [
            comparison.t_grid,
            comparison.optimal[0].values,
            comparison.optimal[1].values,
            comparison.composite[0].values,
            comparison.composite[1].values,
            comparison.difference,
        ]
    )
    return Table(header=COMPARE_COLUMNS, rows=rows)


def snapshot_times(config: scenario.ScenarioConfig, count: int = 5) -> np.ndarray:
    return np.linspace(config.time.start, config.time.stop, count)


def plan_table(config: scenario.ScenarioConfig, plan: plans.SearchPlan) -> Table:
    """Effort (or density) per cell at a few snapshot times, one row per cell."""
    times = snapshot_times(config)
    space = config.space
    if isinstance(space, spaces.DiscreteSpace):
        coords, names = space.points()[:, None], ("cell",)
    else:
        coords = space.points().reshape(space.size, -1)
        names = ("x", "y")[: space.dimension]
    efforts = [plan.at(time).effort for time in times.tolist()]
    header = (*names, *(f"t={serdes.format_float(time)}" for time in times.tolist()))
    return Table(header=header, rows=np.column_stack([coords, *efforts]))


def plan_summary(config: scenario.ScenarioConfig, plan: plans.SearchPlan) -> dict[str, t.Any]:
    """Budget, cost and (for optimal plans) the multiplier at each snapshot time."""
    snapshots = []
    for time in snapshot_times(config).tolist():
        alloc = plan.at(time)
        entry: dict[str, t.Any] = {
            "t": time,
            "budget": float(config.schedule(time)),
            "cost": alloc.total,
        }
        if plan.family == "optimal":
            solution = allocator.solve_lambda(
                config.prior,
                config.detection,
                float(config.schedule(time)),
                method=config.plan.method,
                tolerances=config.tolerances,
            )
            entry.update(
                lambda_star=solution.lambda_star,
                log_lambda=solution.log_lambda,
                kkt_spread=solution.kkt_spread,
                budget_residual=solution.budget_residual,
                method=solution.method,
            )
        snapshots.append(entry)
    feasibility = evaluator.feasibility_check(
        plan, config.schedule, config.time.grid(), tolerances=config.tolerances
    )
    return {
        "scenario": config.name,
        "family": plan.family,
        "feasible": plan.feasible,
        "feasibility": feasibility,
        "snapshots": snapshots,
    }


def mean_times(
    config: scenario.ScenarioConfig,
    policy: evaluator.HorizonPolicy = evaluator.HorizonPolicy(),
) -> dict[str, evaluator.MeanTime]:
    """μ and μ# of the scenario's plan, and of its alternative plan if it has one."""
    out = {}
    requests = {"": config.plan}
    if config.alternative:
        requests["_alt"] = config.alternative
    for suffix, request in requests.items():
        plan = scenario.build_plan(config, request)
        out[f"mu{suffix}"] = evaluator.mean_time_subjective(
            plan, config.prior, config.detection, policy
        )
        out[f"mu_true{suffix}"] = evaluator.mean_time_true(
            plan, config.truth, config.detection, policy
        )
        logger.info(
            "%s%s: mu=%r mu_true=%r",
            config.name,
            suffix,
            out[f"mu{suffix}"].value,
            out[f"mu_true{suffix}"].value,
        )
    return out
