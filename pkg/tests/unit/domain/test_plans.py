from __future__ import annotations

import warnings

import numpy as np
import pytest

from searchlight import errors
from searchlight.domain import plans, priors, schedules

from tests import models


def test_allocation_cost_on_a_grid_is_density_times_volume():
    # Given
    given_space = models.SMALL_GRID
    # When
    alloc = plans.Allocation.from_effort(given_space, np.full(given_space.size, 2.0))
    # Then
    assert alloc.total == pytest.approx(2.0 * 25 * 0.25)
    assert alloc.cost == pytest.approx(alloc.total)
    assert not alloc.effort.flags.writeable


@pytest.mark.suite(
    negative=dict(given_effort=[-1.0, 1.0], given_total=0.0),
    not_finite=dict(given_effort=[np.inf, 1.0], given_total=np.inf),
    wrong_total=dict(given_effort=[1.0, 1.0], given_total=3.0),
)
def test_allocation_invalid(given_effort, given_total):
    # When/Then
    with pytest.raises(ValueError):
        plans.Allocation(space=models.TWO_CELLS, effort=given_effort, total=given_total)


def test_allocation_size_mismatch():
    # When/Then
    with pytest.raises(errors.SpaceMismatchError):
        plans.Allocation.from_effort(models.TWO_CELLS, [1.0, 1.0, 1.0])


def test_allocation_concentrated_on_a_grid():
    # Given
    given_space = models.SMALL_GRID
    # When
    alloc = plans.Allocation.concentrated(given_space, 12, 1.0)
    # Then
    assert alloc.effort[12] == pytest.approx(4.0)
    assert alloc.total == 1.0


def test_allocation_combine():
    # Given
    given_first = plans.Allocation.from_effort(models.TWO_CELLS, [2.0, 0.0])
    given_second = plans.Allocation.from_effort(models.TWO_CELLS, [0.0, 2.0])
    # When
    combined = given_first.combine(given_second, 0.25)
    # Then
    assert combined.effort.tolist() == [0.5, 1.5]
    assert combined.total == 2.0


def test_allocation_combine_across_spaces():
    # Given
    given_first = plans.Allocation.zeros(models.TWO_CELLS)
    given_second = plans.Allocation.zeros(models.THREE_CELLS)
    # When/Then
    with pytest.raises(errors.SpaceMismatchError):
        given_first.combine(given_second, 0.5)


@pytest.mark.suite(
    discrete=dict(given_truth=plans.GroundTruth(2), given_space=models.TWO_CELLS, expected=1),
    list_coordinate=dict(
        given_truth=plans.GroundTruth([0.0, 0.0]), given_space=models.SMALL_GRID, expected=12
    ),
    scalar_on_a_line=dict(
        given_truth=plans.GroundTruth(1.52), given_space=models.UNIT_INTERVAL, expected=10
    ),
)
def test_ground_truth_index(given_truth, given_space, expected):
    # When
    index = given_truth.index(given_space)
    # Then
    assert index == expected


def test_ground_truth_outside_the_space():
    # When/Then
    with pytest.raises(ValueError):
        plans.GroundTruth(3).index(models.TWO_CELLS)


def test_resolve_truth_warns_outside_the_support():
    # Given
    given_prior = priors.DiscretePmf(weights=(1.0, 0.0))
    # When
    with pytest.warns(errors.TruthOutsideSupportWarning):
        index = plans.resolve_truth(plans.GroundTruth(2), given_prior)
    # Then
    assert index == 1


def test_resolve_truth_is_silent_on_the_support():
    # When
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        index = plans.resolve_truth(plans.GroundTruth(1), models.EVEN)
    # Then
    assert index == 0


def test_parametric_plan_rejects_negative_time():
    # Given
    given_plan = models.fixed_plan(models.TWO_CELLS, [1.0, 1.0])
    # When/Then
    with pytest.raises(ValueError):
        given_plan.at(-1.0)


def _sampled(efforts) -> plans.SampledPlan:
    return plans.SampledPlan(
        family="sampled",
        space=models.TWO_CELLS,
        schedule=schedules.Linear(1.0),
        t_grid=np.arange(len(efforts), dtype=float),
        allocations=tuple(plans.Allocation.from_effort(models.TWO_CELLS, e) for e in efforts),
    )


def test_sampled_plan_interpolates_linearly():
    # Given
    given_plan = _sampled([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
    # When
    alloc = given_plan.at(1.5)
    # Then
    assert alloc.effort.tolist() == pytest.approx([1.0, 0.5])
    assert alloc.total == pytest.approx(1.5)
    assert given_plan.horizon == 2.0


def test_sampled_plan_returns_stored_samples_exactly():
    # Given
    given_plan = _sampled([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
    # When
    alloc = given_plan.at(1.0)
    # Then
    assert alloc is given_plan.allocations[1]


def test_sampled_plan_outside_its_range():
    # Given
    given_plan = _sampled([[0.0, 0.0], [1.0, 0.0]])
    # When/Then
    with pytest.raises(ValueError):
        given_plan.at(2.0)


@pytest.mark.suite(
    monotone=dict(given_efforts=[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], expected=True),
    retreating=dict(given_efforts=[[0.0, 0.0], [2.0, 0.0], [1.0, 2.0]], expected=False),
)
def test_sampled_plan_is_monotone(given_efforts, expected):
    # Given
    given_plan = _sampled(given_efforts)
    # When
    monotone = given_plan.is_monotone()
    # Then
    assert monotone is expected


def test_sampled_plan_rejects_unordered_times():
    # Given
    given_alloc = plans.Allocation.zeros(models.TWO_CELLS)
    # When/Then
    with pytest.raises(ValueError):
        plans.SampledPlan(
            family="sampled",
            space=models.TWO_CELLS,
            schedule=schedules.Linear(1.0),
            t_grid=[1.0, 0.0],
            allocations=(given_alloc, given_alloc),
        )


def test_scaled_plan_is_not_feasible():
    # Given
    given_plan = _sampled([[0.0, 0.0], [0.5, 0.5]])
    # When
    scaled = given_plan.scaled(2.0)
    # Then
    assert scaled.feasible is False
    assert scaled.at(1.0).total == pytest.approx(2.0)
