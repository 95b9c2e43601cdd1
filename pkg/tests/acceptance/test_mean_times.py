from __future__ import annotations

import math

import pytest

from searchlight import allocator, evaluator, suite
from searchlight.domain import detection, plans, priors, schedules, spaces


@pytest.mark.parametrize("given_check", ["mean-time:example1", "mean-time:counterexample6"])
def test_mean_time_checks(given_check):
    # When
    report = suite.run_suite(only=[given_check])
    # Then
    assert report.passed, report.failures


@pytest.mark.slow
def test_gaussian_mean_times_with_unit_sweep_coefficient():
    # Given
    given_sigma = 1 / math.sqrt(math.pi)
    given_space = spaces.truncated_grid(given_sigma, given_sigma / 40)
    given_prior = priors.Gaussian2D(sigma=given_sigma, space=given_space)
    given_rate = detection.ExponentialRate(1.0)
    given_plan = allocator.optimal_plan(given_prior, given_rate, schedules.Linear(1.0))
    given_policy = evaluator.HorizonPolicy(epsabs=1e-7, epsrel=1e-7, limit=100)
    # When
    subjective = evaluator.mean_time_subjective(
        given_plan, given_prior, given_rate, given_policy
    )
    true = evaluator.mean_time_true(
        given_plan, plans.GroundTruth((0.0, 0.0)), given_rate, given_policy
    )
    # Then
    assert subjective.value == pytest.approx(6.0, abs=1e-3)
    assert true.value == pytest.approx(2.0, abs=1e-3)


@pytest.mark.slow
def test_gaussian_mean_time_check():
    # When
    report = suite.run_suite(only=["mean-time:gaussian-unit-sweep"])
    # Then
    assert report.passed, report.failures
