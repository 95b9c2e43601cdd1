from __future__ import annotations

import pytest

from searchlight import allocator, evaluator
from searchlight.domain import priors, spaces
from searchlight.oracle import brute

from tests import models


def test_brute_force_lands_on_the_lattice_optimum():
    # When
    alloc = brute.brute_force_allocation(models.EVEN, models.UNIT_RATE, 2.0, 0.5)
    # Then
    assert alloc.effort.tolist() == [1.0, 1.0]


@pytest.mark.suite(
    two_cells=dict(given_prior=models.TWO_THIRDS, given_budget=models.LN4),
    three_cells=dict(given_prior=models.SKEWED_THREE, given_budget=1.5),
    four_cells=dict(given_prior=models.SKEWED_FOUR, given_budget=1.5),
)
def test_brute_force_never_beats_water_filling(given_prior, given_budget):
    # Given
    given_step = 0.01
    optimal = allocator.optimal_allocation(given_prior, models.UNIT_RATE, given_budget)
    # When
    alloc = brute.brute_force_allocation(given_prior, models.UNIT_RATE, given_budget, given_step)
    # Then
    best = evaluator.subjective_detection_prob(given_prior, models.UNIT_RATE, optimal)
    found = evaluator.subjective_detection_prob(given_prior, models.UNIT_RATE, alloc)
    assert alloc.total == pytest.approx(given_budget)
    assert found <= best + 1e-12
    assert best - found <= 1e-3


def test_brute_force_with_no_budget():
    # When
    alloc = brute.brute_force_allocation(models.SKEWED_THREE, models.UNIT_RATE, 0.0, 0.1)
    # Then
    assert alloc.effort.tolist() == [0.0, 0.0, 0.0]


@pytest.mark.suite(
    grid=dict(
        given_prior=priors.Gaussian2D(sigma=1.0, space=models.SMALL_GRID),
        given_budget=1.0,
        given_step=0.1,
    ),
    too_many_cells=dict(
        given_prior=priors.DiscretePmf(weights=(0.2,) * 5, space=spaces.DiscreteSpace(5)),
        given_budget=1.0,
        given_step=0.1,
    ),
    zero_step=dict(given_prior=models.EVEN, given_budget=1.0, given_step=0.0),
    negative_budget=dict(given_prior=models.EVEN, given_budget=-1.0, given_step=0.1),
)
def test_brute_force_invalid(given_prior, given_budget, given_step):
    # When/Then
    with pytest.raises(ValueError):
        brute.brute_force_allocation(given_prior, models.UNIT_RATE, given_budget, given_step)
