from __future__ import annotations

import math

import numpy as np
import pytest

from searchlight import errors
from searchlight.domain import priors, spaces

from tests import models


def test_pmf_defaults_its_space():
    # When
    prior = priors.DiscretePmf(weights=(0.25, 0.75))
    # Then
    assert prior.space == spaces.DiscreteSpace(2)
    assert priors.masses(prior).tolist() == [0.25, 0.75]
    assert priors.density(prior).tolist() == [0.25, 0.75]


@pytest.mark.suite(
    too_few_weights=dict(
        given_weights=(1.0,), given_space=spaces.DiscreteSpace(2)
    ),
    grid_space=dict(given_weights=(1.0,), given_space=models.SMALL_GRID),
)
def test_pmf_space_mismatch(given_weights, given_space):
    # When/Then
    with pytest.raises(errors.SpaceMismatchError):
        priors.DiscretePmf(weights=given_weights, space=given_space)


def test_gaussian_is_renormalized_over_its_grid():
    # Given
    given_space = spaces.GridSpace.centered(half_width=1.0, resolution=0.5)
    given_prior = priors.Gaussian2D(sigma=1.0, space=given_space)
    # When
    mass = priors.masses(given_prior)
    raw = priors.raw_mass(given_prior)
    # Then
    assert math.isclose(mass.sum(), 1.0, abs_tol=1e-12)
    assert raw < 1.0
    assert int(np.argmax(mass)) == given_space.locate((0.0, 0.0))


def test_gaussian_density_matches_formula_on_a_wide_grid():
    # Given
    given_prior = models.NARROW
    index = given_prior.space.locate((0.0, 0.0))
    # When
    value = priors.probability_at(given_prior, (0.0, 0.0))
    # Then
    assert index >= 0
    assert value == pytest.approx(1 / (2 * math.pi), rel=1e-3)


def test_disc_is_uniform_inside_its_radius():
    # Given
    given_space = spaces.GridSpace.centered(half_width=1.5, resolution=0.1)
    given_prior = priors.UniformDisc(radius=1.0, space=given_space)
    # When
    values = priors.density(given_prior)
    inside = given_space.radii() <= 1.0 + 1e-9
    # Then
    assert np.all(values[~inside] == 0)
    assert np.ptp(values[inside]) == pytest.approx(0.0, abs=1e-12)
    assert values[inside][0] == pytest.approx(1 / math.pi, rel=0.05)


def test_interval_density():
    # Given
    given_prior = priors.UniformInterval(a=1.0, b=2.0, space=models.UNIT_INTERVAL)
    # When
    values = priors.density(given_prior)
    # Then
    assert values == pytest.approx(np.ones(20))


@pytest.mark.suite(
    gaussian_on_cells=dict(
        given_factory=lambda: priors.Gaussian2D(sigma=1.0, space=models.TWO_CELLS)
    ),
    disc_on_a_line=dict(
        given_factory=lambda: priors.UniformDisc(radius=1.0, space=models.UNIT_INTERVAL)
    ),
    interval_on_a_plane=dict(
        given_factory=lambda: priors.UniformInterval(a=0.0, b=1.0, space=models.SMALL_GRID)
    ),
    density_on_cells=dict(
        given_factory=lambda: priors.GridDensity(values=(1.0, 0.0), space=models.TWO_CELLS)
    ),
)
def test_continuous_prior_needs_matching_grid(given_factory):
    # When/Then
    with pytest.raises(errors.SpaceMismatchError):
        given_factory()


@pytest.mark.suite(
    sigma=dict(given_factory=lambda: priors.Gaussian2D(sigma=0.0, space=models.SMALL_GRID)),
    radius=dict(given_factory=lambda: priors.UniformDisc(radius=-1.0, space=models.SMALL_GRID)),
    interval=dict(
        given_factory=lambda: priors.UniformInterval(a=2.0, b=1.0, space=models.UNIT_INTERVAL)
    ),
)
def test_prior_parameters_invalid(given_factory):
    # When/Then
    with pytest.raises(ValueError):
        given_factory()


def test_grid_density_is_kept_as_given():
    # Given
    given_space = spaces.GridSpace(lower=(0.0,), upper=(1.0,), resolution=0.5)
    given_prior = priors.GridDensity(values=(1.0, 3.0), space=given_space)
    # When
    mass = priors.masses(given_prior)
    # Then
    assert mass.tolist() == [0.5, 1.5]
    assert priors.raw_mass(given_prior) == 2.0


def test_mixture_masses():
    # Given
    given_prior = priors.Mixture(
        components=(models.EVEN, models.TWO_THIRDS), weights=(0.5, 0.5)
    )
    # When
    mass = priors.masses(given_prior)
    # Then
    assert mass.tolist() == pytest.approx([7 / 12, 5 / 12])
    assert given_prior.space == models.TWO_CELLS


def test_mixture_components_share_a_space():
    # When/Then
    with pytest.raises(errors.SpaceMismatchError):
        priors.Mixture(components=(models.EVEN, models.SKEWED_THREE), weights=(0.5, 0.5))


def test_mixture_weight_count():
    # When/Then
    with pytest.raises(ValueError):
        priors.Mixture(components=(models.EVEN,), weights=(0.5, 0.5))


def test_masses_are_read_only():
    # When
    mass = priors.masses(models.EVEN)
    # Then
    with pytest.raises(ValueError):
        mass[0] = 1.0


@pytest.mark.suite(
    pmf=dict(given_prior=priors.DiscretePmf(weights=(0.25, 0.75)), expected=1.0),
    overweight=dict(given_prior=priors.DiscretePmf(weights=(0.6, 0.6)), expected=1.2),
    mixture=dict(
        given_prior=priors.Mixture(
            components=(models.EVEN, models.TWO_THIRDS), weights=(0.5, 0.5)
        ),
        expected=1.0,
    ),
)
def test_raw_mass_sums_every_cell(given_prior, expected):
    # When
    raw = priors.raw_mass(given_prior)
    # Then
    assert raw == pytest.approx(expected, abs=1e-12)
