from __future__ import annotations

import math

import numpy as np
import pytest

from searchlight import allocator, errors, evaluator
from searchlight.domain import plans, priors, schedules

from tests import models


@pytest.mark.suite(
    even=dict(given_prior=models.EVEN, given_budget=2.0, expected=(1.0, 1.0)),
    skewed=dict(
        given_prior=models.TWO_THIRDS,
        given_budget=models.LN4,
        expected=models.two_cell_split(2 / 3, models.LN4),
    ),
    below_breakpoint=dict(
        given_prior=models.TWO_THIRDS, given_budget=0.5, expected=(0.5, 0.0)
    ),
    at_breakpoint=dict(
        given_prior=models.TWO_THIRDS, given_budget=models.LN2, expected=(models.LN2, 0.0)
    ),
    zero=dict(given_prior=models.EVEN, given_budget=0.0, expected=(0.0, 0.0)),
)
def test_optimal_allocation_two_cells(given_prior, given_budget, expected):
    # When
    alloc = allocator.optimal_allocation(given_prior, models.UNIT_RATE, given_budget)
    # Then
    assert alloc.effort.tolist() == pytest.approx(expected, abs=1e-12)
    assert alloc.total == pytest.approx(given_budget, abs=1e-12)


def test_optimal_allocation_per_cell_rates():
    # When
    alloc = allocator.optimal_allocation(models.EVEN, models.PER_CELL_RATE, 1.0)
    # Then
    assert alloc.effort.tolist() == pytest.approx(
        [(2 - models.LN2) / 3, (1 + models.LN2) / 3], abs=1e-12
    )


def test_optimal_allocation_below_the_rate_breakpoint():
    # Given
    given_budget = models.LN2 / 4
    # When
    alloc = allocator.optimal_allocation(models.EVEN, models.PER_CELL_RATE, given_budget)
    # Then
    assert alloc.effort.tolist() == pytest.approx([0.0, given_budget], abs=1e-12)


def test_solve_lambda_diagnostics():
    # When
    solution = allocator.solve_lambda(models.TWO_THIRDS, models.UNIT_RATE, models.LN4)
    # Then
    assert solution.lambda_star == pytest.approx(2 / 3 * 2**-1.5, rel=1e-12)
    assert solution.log_lambda == pytest.approx(math.log(solution.lambda_star))
    assert solution.kkt_spread <= 1e-8 * solution.lambda_star
    assert abs(solution.budget_residual) <= 1e-9
    assert solution.complementary_slack == 0.0
    assert solution.method == "exact"
    assert solution.iterations == 0


def test_solve_lambda_with_zero_budget():
    # When
    solution = allocator.solve_lambda(models.TWO_THIRDS, models.UNIT_RATE, 0.0)
    # Then
    assert solution.lambda_star == pytest.approx(2 / 3)
    assert solution.allocation.total == 0.0


def test_unfunded_cells_respect_complementary_slackness():
    # Given
    given_budget = 0.1
    # When
    solution = allocator.solve_lambda(models.SKEWED_FOUR, models.UNIT_RATE, given_budget)
    # Then
    funded = solution.allocation.effort > 0
    assert funded.tolist() == [True, False, False, False]
    assert solution.complementary_slack == 0.0
    assert 0.3 <= solution.lambda_star


@pytest.mark.suite(
    negative=dict(given_budget=-1.0),
    infinite=dict(given_budget=math.inf),
    nan=dict(given_budget=math.nan),
)
def test_invalid_budget(given_budget):
    # When/Then
    with pytest.raises(ValueError):
        allocator.solve_lambda(models.EVEN, models.UNIT_RATE, given_budget)


def test_degenerate_prior():
    # Given
    given_prior = priors.DiscretePmf(weights=(0.0, 0.0))
    # When/Then
    with pytest.raises(ValueError):
        allocator.solve_lambda(given_prior, models.UNIT_RATE, 1.0)


def test_marginal_rate_and_inverse():
    # When
    rate = allocator.marginal_rate(models.EVEN, models.UNIT_RATE, 1, 0.0)
    inverse = allocator.marginal_rate_inverse(models.EVEN, models.UNIT_RATE, 1, 0.25)
    idle = allocator.marginal_rate_inverse(models.EVEN, models.UNIT_RATE, 1, 0.75)
    # Then
    assert rate == 0.5
    assert inverse == pytest.approx(models.LN2)
    assert idle == 0.0


def test_marginal_rate_is_zero_off_the_support():
    # Given
    given_prior = priors.DiscretePmf(weights=(1.0, 0.0))
    # When
    rate = allocator.marginal_rate(given_prior, models.UNIT_RATE, 2, 0.0)
    # Then
    assert rate == 0.0


@pytest.mark.suite(
    negative_effort=dict(given_call=lambda: allocator.marginal_rate(
        models.EVEN, models.UNIT_RATE, 1, -1.0
    )),
    zero_lambda=dict(given_call=lambda: allocator.marginal_rate_inverse(
        models.EVEN, models.UNIT_RATE, 1, 0.0
    )),
    outside=dict(given_call=lambda: allocator.marginal_rate(
        models.EVEN, models.UNIT_RATE, 3, 0.0
    )),
)
def test_marginal_rate_invalid(given_call):
    # When/Then
    with pytest.raises(ValueError):
        given_call()


def test_aggregate_allocation():
    # When
    total = allocator.aggregate_allocation(models.EVEN, models.UNIT_RATE, 0.25)
    # Then
    assert total == pytest.approx(2 * models.LN2)


def test_saturating_detection_splits_like_exponential():
    # When
    alloc = allocator.optimal_allocation(models.TWO_THIRDS, models.SATURATING, models.LN4)
    # Then
    assert alloc.effort.tolist() == pytest.approx(
        models.two_cell_split(2 / 3, models.LN4), rel=1e-9
    )


def test_gaussian_allocation_is_a_centered_disc():
    # Given
    given_prior = models.NARROW
    given_budget = 2.0
    # When
    alloc = allocator.optimal_allocation(given_prior, models.UNIT_RATE, given_budget)
    # Then
    center = given_prior.space.locate((0.0, 0.0))
    assert alloc.total == pytest.approx(given_budget, rel=1e-9)
    assert alloc.effort[center] == pytest.approx(math.sqrt(given_budget / math.pi), rel=2e-2)
    funded = given_prior.space.radii()[alloc.effort > 0]
    unfunded = given_prior.space.radii()[alloc.effort == 0]
    assert funded.max() < unfunded.min()


def test_optimal_plan_on_demand():
    # Given
    given_plan = allocator.optimal_plan(models.EVEN, models.UNIT_RATE, models.UNIT_SCHEDULE)
    # When
    alloc = given_plan.at(4.0)
    # Then
    assert isinstance(given_plan, plans.ParametricPlan)
    assert given_plan.family == "optimal"
    assert alloc.effort.tolist() == pytest.approx([2.0, 2.0])


def test_optimal_plan_sampled_is_feasible_and_monotone():
    # Given
    given_grid = np.linspace(0.0, 5.0, 11)
    given_schedule = schedules.Affine(offset=models.LN4, rate=1.0)
    # When
    plan = allocator.optimal_plan(
        models.SKEWED_THREE, models.UNIT_RATE, given_schedule, given_grid
    )
    # Then
    assert isinstance(plan, plans.SampledPlan)
    assert plan.is_monotone()
    assert evaluator.feasibility_check(plan, given_schedule).passed


@pytest.mark.suite(
    not_from_zero=dict(given_grid=[1.0, 2.0]),
    unordered=dict(given_grid=[0.0, 2.0, 1.0]),
    empty=dict(given_grid=[]),
)
def test_optimal_plan_invalid_grid(given_grid):
    # When/Then
    with pytest.raises(ValueError):
        allocator.optimal_plan(models.EVEN, models.UNIT_RATE, models.UNIT_SCHEDULE, given_grid)


def test_clairvoyant_plan():
    # Given
    given_plan = allocator.clairvoyant_plan(
        plans.GroundTruth(2), models.UNIT_SCHEDULE, space=models.TWO_CELLS
    )
    # When
    alloc = given_plan.at(3.0)
    # Then
    assert alloc.effort.tolist() == [0.0, 3.0]
    assert given_plan.family == "clairvoyant"


def test_clairvoyant_plan_outside_the_space():
    # When/Then
    with pytest.raises(ValueError):
        allocator.clairvoyant_plan(
            plans.GroundTruth(3), models.UNIT_SCHEDULE, space=models.TWO_CELLS
        )


def test_convergence_failure_names_the_time(monkeypatch):
    # Given
    given_plan = allocator.optimal_plan(
        models.EVEN, models.SATURATING, models.UNIT_SCHEDULE, method="bisection"
    )

    def fail(budget):
        raise errors.ConvergenceError("stalled", bracket=(0.0, 1.0), iterations=3, residual=1.0)

    monkeypatch.setattr(
        allocator.routines.BisectionWaterFilling, "solve", lambda self, budget: fail(budget)
    )
    # When/Then
    with pytest.raises(errors.ConvergenceError, match="t=2.0"):
        given_plan.at(2.0)
    assert given_plan.parameters["method"] == "bisection"
