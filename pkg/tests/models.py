from __future__ import annotations

import math
import typing

import numpy as np

from searchlight.domain import detection, plans, priors, schedules, spaces

LN2 = math.log(2)
LN4 = math.log(4)

TWO_CELLS = spaces.DiscreteSpace(2)
THREE_CELLS = spaces.DiscreteSpace(3)
FOUR_CELLS = spaces.DiscreteSpace(4)
SMALL_GRID = spaces.GridSpace.centered(half_width=1.0, resolution=0.5, dimension=2)
GAUSSIAN_GRID = spaces.truncated_grid(sigma=1.0, resolution=0.25)
UNIT_INTERVAL = spaces.GridSpace(lower=(1.0,), upper=(2.0,), resolution=0.05)

EVEN = priors.DiscretePmf(weights=(0.5, 0.5))
TWO_THIRDS = priors.DiscretePmf(weights=(2 / 3, 1 / 3))
SKEWED_THREE = priors.DiscretePmf(weights=(0.5, 0.3, 0.2))
SKEWED_FOUR = priors.DiscretePmf(weights=(0.4, 0.3, 0.2, 0.1))
NARROW = priors.Gaussian2D(sigma=1.0, space=GAUSSIAN_GRID)

UNIT_RATE = detection.ExponentialRate(1.0)
COORDINATE_RATE = detection.ExponentialRate("coordinate")
PER_CELL_RATE = detection.ExponentialRate((1.0, 2.0))
SATURATING = detection.saturating(0.9, 1.0)

UNIT_SCHEDULE = schedules.Linear(1.0)


def two_cell_split(p: float, effort: float, rate: float = 1.0) -> tuple[float, float]:
    """The closed-form optimal split of a two-cell problem, for assertions."""
    first = min(effort, max(0.0, 0.5 * (effort + math.log(p / (1 - p)) / rate)))
    return first, effort - first


def fixed_plan(
    space: spaces.SearchSpace,
    effort: typing.Sequence[float],
    schedule: schedules.EffortSchedule = UNIT_SCHEDULE,
    *,
    family: str = "fixed",
) -> plans.ParametricPlan:
    """A plan which scales a fixed allocation shape to E(t)."""
    shape = np.asarray(effort, dtype=float)
    shape = shape / (shape.sum() * space.cell_volume)

    def allocate(time: float) -> plans.Allocation:
        return plans.Allocation.from_effort(space, shape * schedule(time))

    return plans.ParametricPlan(
        family=family, space=space, schedule=schedule, allocate=allocate
    )


def scenario_document(**overrides: typing.Any) -> dict[str, typing.Any]:
    """A minimal valid scenario document, with top-level keys overridden."""
    doc: dict[str, typing.Any] = {
        "version": 1,
        "name": "unit",
        "space": {"kind": "discrete", "cells": 2},
        "priors": [{"kind": "pmf", "weights": [0.5, 0.5]}],
        "detection": {"kind": "exponential", "rate": 1.0},
        "schedule": {"kind": "linear", "rate": 1.0},
        "truth": 1,
        "plan": {"optimal": {}},
        "time": {"start": 0, "stop": 4, "samples": 5},
    }
    doc.update(overrides)
    return {k: v for k, v in doc.items() if v is not None}
