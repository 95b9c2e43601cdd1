"""Top-level entry points, re-exported from the package root."""

from __future__ import annotations

import numpy as np

from searchlight import tables
from searchlight.allocator import (
    clairvoyant_plan,
    optimal_allocation,
    optimal_plan,
    solve_lambda,
)
from searchlight.composite import compare_strategies, composite_plan, mixture_prior
from searchlight.constants import DEFAULT_TOLERANCES, Tolerances
from searchlight.domain import (
    Affine,
    DiscretePmf,
    DiscreteSpace,
    ExponentialRate,
    Gaussian2D,
    GridSpace,
    GroundTruth,
    Linear,
    UniformDisc,
    validate,
)
from searchlight.evaluator import (
    detection_curves,
    mean_time_subjective,
    mean_time_true,
    subjective_detection_prob,
    true_detection_prob,
)
from searchlight.scenario import ScenarioConfig, load_scenario

__all__ = (
    "Affine",
    "DiscretePmf",
    "DiscreteSpace",
    "ExponentialRate",
    "Gaussian2D",
    "GridSpace",
    "GroundTruth",
    "Linear",
    "UniformDisc",
    "ScenarioConfig",
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "validate",
    "load_scenario",
    "solve_lambda",
    "optimal_allocation",
    "optimal_plan",
    "clairvoyant_plan",
    "mixture_prior",
    "composite_plan",
    "compare_strategies",
    "subjective_detection_prob",
    "true_detection_prob",
    "detection_curves",
    "mean_time_subjective",
    "mean_time_true",
    "curves",
)


def curves(
    source: str | ScenarioConfig,
    *,
    workers: int = 1,
) -> dict[str, np.ndarray]:
    """Detection curves of a scenario, keyed by column name.

    Args:
        source: A loaded scenario, a scenario file path, or a bundled scenario name.
        workers: Worker threads for evaluating sample times.
    """
    config = source if isinstance(source, ScenarioConfig) else load_scenario(source)
    table = tables.curves_table(config, workers=workers)
    return {name: table.column(name) for name in table.header}
