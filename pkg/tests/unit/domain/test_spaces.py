from __future__ import annotations

import numpy as np
import pytest

from searchlight.domain import spaces


@pytest.mark.suite(
    first=dict(given_location=1, expected_index=0),
    last=dict(given_location=3, expected_index=2),
    numpy_integer=dict(given_location=np.int64(2), expected_index=1),
)
def test_discrete_locate(given_location, expected_index):
    # Given
    given_space = spaces.DiscreteSpace(3)
    # When
    index = given_space.locate(given_location)
    # Then
    assert index == expected_index


@pytest.mark.suite(
    zero=dict(given_location=0),
    past_end=dict(given_location=4),
    coordinate=dict(given_location=(1.0,)),
)
def test_discrete_locate_outside(given_location):
    # Given
    given_space = spaces.DiscreteSpace(3)
    # When/Then
    with pytest.raises(ValueError):
        given_space.locate(given_location)


@pytest.mark.suite(
    zero=dict(given_count=0),
    negative=dict(given_count=-2),
    fractional=dict(given_count=2.5),
)
def test_discrete_space_invalid(given_count):
    # When/Then
    with pytest.raises(ValueError):
        spaces.DiscreteSpace(given_count)


def test_discrete_points_are_labels():
    # Given
    given_space = spaces.DiscreteSpace(3)
    # When
    points = given_space.points()
    # Then
    assert points.tolist() == [1.0, 2.0, 3.0]
    assert not points.flags.writeable


def test_centered_grid_has_origin_at_a_cell_center():
    # Given
    given_space = spaces.GridSpace.centered(half_width=1.0, resolution=0.5)
    # When
    index = given_space.locate((0.0, 0.0))
    # Then
    assert given_space.shape == (5, 5)
    assert given_space.lower == (-1.25, -1.25)
    assert given_space.points()[index].tolist() == [0.0, 0.0]
    assert given_space.radii()[index] == 0.0


def test_grid_is_row_major():
    # Given
    given_space = spaces.GridSpace(lower=(0.0, 0.0), upper=(2.0, 3.0), resolution=1.0)
    # When
    points = given_space.points()
    # Then
    assert points[:3].tolist() == [[0.5, 0.5], [0.5, 1.5], [0.5, 2.5]]
    assert given_space.locate((1.2, 0.1)) == 3


@pytest.mark.suite(
    interior=dict(given_location=(0.2,), expected_index=0),
    shared_edge=dict(given_location=(0.5,), expected_index=1),
    upper_bound=dict(given_location=(1.0,), expected_index=1),
    scalar=dict(given_location=0.7, expected_index=1),
)
def test_grid_locate_edges(given_location, expected_index):
    # Given
    given_space = spaces.GridSpace(lower=(0.0,), upper=(1.0,), resolution=0.5)
    # When
    index = given_space.locate(given_location)
    # Then
    assert index == expected_index


@pytest.mark.suite(
    below=dict(given_location=(-0.1,)),
    above=dict(given_location=(1.1,)),
    wrong_dimension=dict(given_location=(0.5, 0.5)),
)
def test_grid_locate_outside(given_location):
    # Given
    given_space = spaces.GridSpace(lower=(0.0,), upper=(1.0,), resolution=0.5)
    # When/Then
    with pytest.raises(ValueError):
        given_space.locate(given_location)


@pytest.mark.suite(
    partial_cell=dict(lower=(0.0,), upper=(1.0,), resolution=0.3),
    unordered=dict(lower=(1.0,), upper=(0.0,), resolution=0.5),
    mismatched=dict(lower=(0.0, 0.0), upper=(1.0,), resolution=0.5),
    three_dimensional=dict(lower=(0.0,) * 3, upper=(1.0,) * 3, resolution=0.5),
    zero_resolution=dict(lower=(0.0,), upper=(1.0,), resolution=0.0),
)
def test_grid_space_invalid(lower, upper, resolution):
    # When/Then
    with pytest.raises(ValueError):
        spaces.GridSpace(lower=lower, upper=upper, resolution=resolution)


def test_grid_cell_volume():
    # Given
    given_space = spaces.GridSpace.centered(half_width=1.0, resolution=0.5)
    # When
    volume = given_space.cell_volume
    # Then
    assert volume == 0.25
    assert given_space.size == 25


def test_truncated_grid_reaches_truncation():
    # Given
    given_sigma = 2.0
    # When
    space = spaces.truncated_grid(given_sigma, 0.5, truncation=6.0)
    # Then
    assert space.shape == (49, 49)
    assert space.upper[0] >= 6.0 * given_sigma
