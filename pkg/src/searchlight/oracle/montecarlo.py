"""Seeded Monte Carlo estimates of detection probabilities.

Trials are split into fixed-size chunks. Chunk `i` draws from its own Philox stream
seeded with `(seed, i)`, so an estimate depends only on the seed and the trial count,
never on how many workers ran the chunks.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import math

import numpy as np

from searchlight import constants
from searchlight.domain import detection, plans, priors

__all__ = ("McEstimate", "monte_carlo_detection", "chunk_generator")


@dataclasses.dataclass(frozen=True, slots=True)
class McEstimate:
    """A detection frequency with its binomial standard error."""

    estimate: float
    std_error: float
    n: int
    seed: int
    algorithm: str = constants.RNG_ALGORITHM

    def within(self, value: float, sigmas: float = 3.0) -> bool:
        """Whether `value` lies within `sigmas` standard errors of the estimate."""
        return abs(self.estimate - value) <= sigmas * self.std_error


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """The generator for one chunk of trials."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def monte_carlo_detection(
    prior_for_truth: priors.Prior,
    det: detection.DetectionModel,
    plan: plans.SearchPlan,
    t: float,
    n: int,
    seed: int,
    *,
    truth: plans.GroundTruth | None = None,
    workers: int = 1,
    chunk_size: int = constants.MONTE_CARLO_CHUNK,
) -> McEstimate:
    """Simulate `n` searches with the allocation φ(·, t).

    Each trial places the target (drawn from `prior_for_truth`, or fixed at `truth`)
    and detects it with probability d(x₀, φ(x₀, t)). Drawing the target estimates P;
    fixing it estimates P#.

    Raises:
        ValueError: If `n` is not positive or the truth lies outside the space.
    """
    if n < 1:
        raise ValueError(f"{n!r} is not a positive trial count")
    space = prior_for_truth.space
    alloc = plan.at(t)
    chance = det.value(space.points(), alloc.effort)
    mass = np.asarray(priors.masses(prior_for_truth), dtype=float)
    mass = mass / mass.sum()
    fixed = None if truth is None else truth.index(space)
    sizes = [chunk_size] * (n // chunk_size)
    if n % chunk_size:
        sizes.append(n % chunk_size)

    def run(item: tuple[int, int]) -> int:
        index, size = item
        rng = chunk_generator(seed, index)
        if fixed is None:
            cells = rng.choice(space.size, size=size, p=mass)
            return int(np.count_nonzero(rng.random(size) < chance[cells]))
        return int(np.count_nonzero(rng.random(size) < chance[fixed]))

    items = list(enumerate(sizes))
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run, items))
    else:
        hits = sum(map(run, items))
    estimate = hits / n
    return McEstimate(
        estimate=estimate,
        std_error=math.sqrt(estimate * (1 - estimate) / n),
        n=n,
        seed=seed,
    )
