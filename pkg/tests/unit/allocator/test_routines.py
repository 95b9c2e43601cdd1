from __future__ import annotations

import math

import numpy as np
import pytest

from searchlight import constants, errors
from searchlight.allocator import routines
from searchlight.domain import detection, priors, spaces

from tests import models


@pytest.mark.suite(
    two_cells=dict(given_prior=models.TWO_THIRDS, given_model=models.UNIT_RATE),
    three_cells=dict(given_prior=models.SKEWED_THREE, given_model=models.UNIT_RATE),
    per_cell_rates=dict(given_prior=models.EVEN, given_model=models.PER_CELL_RATE),
    gaussian=dict(given_prior=models.NARROW, given_model=models.UNIT_RATE),
)
@pytest.mark.suite(
    small=dict(given_budget=0.05),
    moderate=dict(given_budget=1.5),
    large=dict(given_budget=40.0),
)
def test_exact_and_bisection_agree(given_prior, given_model, given_budget):
    # Given
    given_exact = routines.water_filling(given_prior, given_model, method="exact")
    given_bisection = routines.water_filling(given_prior, given_model, method="bisection")
    # When
    exact = given_exact.solve(given_budget)
    bisected = given_bisection.solve(given_budget)
    # Then
    assert exact.method == "exact"
    assert bisected.method == "bisection"
    assert bisected.iterations > 0
    assert exact.log_lambda == pytest.approx(bisected.log_lambda, rel=1e-9, abs=1e-9)
    assert np.max(np.abs(exact.allocation.effort - bisected.allocation.effort)) <= 1e-8 * max(
        1.0, given_budget
    )


def test_log_lambda_survives_huge_budgets():
    # Given
    given_solver = routines.water_filling(models.EVEN, models.UNIT_RATE)
    # When
    solution = given_solver.solve(2000.0)
    # Then
    assert solution.lambda_star == 0.0
    assert solution.log_lambda == pytest.approx(math.log(0.5) - 1000.0)
    assert solution.allocation.effort.tolist() == pytest.approx([1000.0, 1000.0])


def test_aggregate_is_nonincreasing():
    # Given
    given_solver = routines.water_filling(models.SKEWED_FOUR, models.UNIT_RATE)
    given_lambdas = np.geomspace(1e-4, 1.0, 50)
    # When
    totals = [given_solver.aggregate(lam) for lam in given_lambdas]
    # Then
    assert np.all(np.diff(totals) <= 0)
    assert totals[-1] == 0.0


@pytest.mark.suite(
    aggregate=dict(given_call=lambda solver: solver.aggregate(0.0)),
    inverse=dict(given_call=lambda solver: solver.inverse(-1.0)),
)
def test_lambda_must_be_positive(given_call):
    # Given
    given_solver = routines.water_filling(models.EVEN, models.UNIT_RATE)
    # When/Then
    with pytest.raises(ValueError):
        given_call(given_solver)


@pytest.mark.suite(
    exponential=dict(
        given_model=models.UNIT_RATE,
        given_method="auto",
        expected_type=routines.ExponentialWaterFilling,
    ),
    forced_bisection=dict(
        given_model=models.UNIT_RATE,
        given_method="bisection",
        expected_type=routines.BisectionWaterFilling,
    ),
    saturating=dict(
        given_model=models.SATURATING,
        given_method="auto",
        expected_type=routines.BisectionWaterFilling,
    ),
)
def test_water_filling_dispatch(given_model, given_method, expected_type):
    # When
    solver = routines.water_filling(models.EVEN, given_model, method=given_method)
    # Then
    assert type(solver) is expected_type


def test_exact_needs_an_exponential_model():
    # When/Then
    with pytest.raises(ValueError):
        routines.water_filling(models.EVEN, models.SATURATING, method="exact")


def test_water_filling_is_cached():
    # When
    first = routines.water_filling(models.EVEN, models.UNIT_RATE)
    second = routines.water_filling(models.EVEN, models.UNIT_RATE)
    # Then
    assert first is second


def test_unsupported_cells_are_never_funded():
    # Given
    given_prior = priors.DiscretePmf(weights=(0.5, 0.0, 0.5))
    given_solver = routines.water_filling(given_prior, models.UNIT_RATE)
    # When
    solution = given_solver.solve(10.0)
    # Then
    assert solution.allocation.effort[1] == 0.0
    assert solution.allocation.effort.tolist() == pytest.approx([5.0, 0.0, 5.0])


def test_coordinate_rate_on_a_line():
    # Given
    given_prior = priors.UniformInterval(a=1.0, b=2.0, space=models.UNIT_INTERVAL)
    given_solver = routines.water_filling(given_prior, models.COORDINATE_RATE)
    # When
    solution = given_solver.solve(0.5)
    # Then
    effort = solution.allocation.effort
    funded = given_prior.space.points()[effort > 0]
    assert solution.allocation.total == pytest.approx(0.5)
    assert funded.min() > 1.0
    # q_x(φ(x)) = λ on every funded cell.
    marginal = given_solver.marginal(effort)[effort > 0]
    assert np.ptp(marginal) <= 1e-12


def test_bisect_log_finds_the_root():
    # Given
    def aggregate(log_lambda: float) -> float:
        return max(0.0, -log_lambda)

    # When
    log_lambda, iterations = routines.bisect_log(aggregate, 3.0, hi=0.0)
    # Then
    assert log_lambda == pytest.approx(-3.0, rel=1e-10)
    assert iterations > 0


def test_bisect_log_without_a_bracket():
    # Given
    given_tolerances = constants.DEFAULT_TOLERANCES.replace(max_iterations=10)
    # When/Then
    with pytest.raises(errors.ConvergenceError) as info:
        routines.bisect_log(lambda _: 0.0, 1.0, hi=0.0, tolerances=given_tolerances)
    assert info.value.iterations == 10


def test_bisection_on_a_grid_matches_budget():
    # Given
    given_space = spaces.GridSpace.centered(half_width=1.0, resolution=0.25)
    given_prior = priors.Gaussian2D(sigma=0.5, space=given_space)
    given_solver = routines.water_filling(
        given_prior, detection.saturating(1.0, 1.0), method="bisection"
    )
    # When
    solution = given_solver.solve(0.75)
    # Then
    assert abs(solution.budget_residual) <= 1e-9
    assert solution.kkt_spread <= 1e-8 * solution.lambda_star
