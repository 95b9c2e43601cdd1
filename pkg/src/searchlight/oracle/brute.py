"""Exhaustive search over allocations of small discrete instances."""

from __future__ import annotations

import logging
import math
import typing as t

import numpy as np

from searchlight.domain import detection, plans, priors, spaces

__all__ = ("brute_force_allocation", "MAX_CELLS")

logger = logging.getLogger(__name__)

MAX_CELLS: t.Final[int] = 4


def brute_force_allocation(
    prior: priors.Prior,
    det: detection.DetectionModel,
    budget: float,
    step: float,
) -> plans.Allocation:
    """Search the simplex {f ≥ 0, Σf = K} on a lattice of spacing `step`.

    The first `m − 1` cells take lattice values and the last takes the remainder. Among
    allocations with the same subjective detection probability the lexicographically
    smallest wins.

    Raises:
        ValueError: If the space is not discrete, has more than four cells, or the
            step or budget are invalid.
    """
    space = prior.space
    if not isinstance(space, spaces.DiscreteSpace):
        raise ValueError("Brute force only searches discrete spaces")
    if space.cell_count > MAX_CELLS:
        raise ValueError(
            f"Brute force is limited to {MAX_CELLS} cells, got {space.cell_count}"
        )
    if not step > 0:
        raise ValueError(f"{step!r} is not a positive step")
    if not budget >= 0:
        raise ValueError(f"{budget!r} is not a non-negative budget")
    m = space.cell_count
    if budget == 0:
        return plans.Allocation.zeros(space)
    if m == 1:
        return plans.Allocation.from_effort(space, [budget])

    mass = priors.masses(prior)
    points = space.points()
    n = math.floor(budget / step + 1e-9)
    lattice = np.arange(n + 1) * step
    # Per-cell contribution π(x)·d(x, k·step) for every lattice value.
    gains = [mass[i] * det.value(np.full(n + 1, points[i]), lattice) for i in range(m - 1)]
    last_point = np.array(points[-1:])

    def last_gain(remainder: np.ndarray) -> np.ndarray:
        remainder = np.maximum(remainder, 0.0)
        return mass[-1] * det.value(np.broadcast_to(last_point, remainder.shape), remainder)

    best_value = -math.inf
    best: tuple[float, ...] = ()
    if m == 2:
        values = gains[0] + last_gain(budget - lattice)
        k = int(np.argmax(values))
        best = (lattice[k],)
        best_value = float(values[k])
    elif m == 3:
        for i in range(n + 1):
            rest = lattice[: n + 1 - i]
            remainder = budget - lattice[i] - rest
            values = gains[0][i] + gains[1][: n + 1 - i] + last_gain(remainder)
            k = int(np.argmax(values))
            if values[k] > best_value:
                best_value, best = float(values[k]), (lattice[i], rest[k])
    else:
        for i in range(n + 1):
            size = n + 1 - i
            f2, f3 = np.meshgrid(lattice[:size], lattice[:size], indexing="ij")
            keep = (np.arange(size)[:, None] + np.arange(size)[None, :]) < size
            j2, j3 = np.nonzero(keep)
            values = (
                gains[0][i]
                + gains[1][j2]
                + gains[2][j3]
                + last_gain(budget - lattice[i] - f2[keep] - f3[keep])
            )
            k = int(np.argmax(values))
            if values[k] > best_value:
                best_value = float(values[k])
                best = (lattice[i], lattice[j2[k]], lattice[j3[k]])
    effort = np.array([*best, max(0.0, budget - math.fsum(best))])
    logger.debug("Brute force best P=%.12g at %r", best_value, effort.tolist())
    return plans.Allocation.from_effort(space, effort)
