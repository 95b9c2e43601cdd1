"""Report-only checks of the domain invariants of a scenario's parts."""

from __future__ import annotations

import dataclasses
import math
import typing as t

import numpy as np

from searchlight import constants
from searchlight.domain import detection, plans, priors, schedules, spaces

__all__ = ("ValidationReport", "validate", "check_detection")

_SAMPLE_EFFORTS: t.Final[tuple[float, ...]] = (0.0, 0.05, 0.25, 0.5, 1.0, 2.0, 4.0)
_SAMPLE_TIMES: t.Final[tuple[float, ...]] = (0.0, 1e-3, 0.5, 1.0, 2.0, 10.0, 100.0)
_MAX_SAMPLED_CELLS: t.Final[int] = 64


@dataclasses.dataclass(frozen=True, slots=True)
class ValidationReport:
    """The outcome of [`validate`][searchlight.domain.validation.validate].

    Attributes:
        violations: Human-readable descriptions of each violated invariant.
        notes: Informational remarks, e.g. renormalization of a truncated prior.
        warnings: Soft conditions which do not fail validation.
    """

    violations: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed


def validate(
    space: spaces.SearchSpace,
    prior: priors.Prior,
    det: detection.DetectionModel,
    schedule: schedules.EffortSchedule,
    truth: plans.GroundTruth | None = None,
    *,
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> ValidationReport:
    """Check every part of a scenario against the domain invariants.

    Nothing is raised and no input is modified; the report lists what failed.

    Examples:
        >>> from searchlight.domain import detection, priors, schedules, validation
        >>> pmf = priors.DiscretePmf(weights=(0.6, 0.6))
        >>> report = validation.validate(
        ...     pmf.space, pmf, detection.ExponentialRate(), schedules.Linear(1.0)
        ... )
        >>> report.violations
        ('mass 1.2 ≠ 1',)
    """
    violations: list[str] = []
    notes: list[str] = []
    warns: list[str] = []
    if prior.space != space:
        violations.append(f"prior lives on {prior.space!r}, not {space!r}")
    _check_prior(prior, tolerances, violations, notes)
    violations.extend(check_detection(space, det, tolerances))
    violations.extend(_check_schedule(schedule))
    if truth is not None:
        try:
            index = truth.index(space)
        except ValueError as e:
            violations.append(f"ground truth outside the space: {e}")
        else:
            if prior.space == space and priors.masses(prior)[index] <= 0:
                warns.append(f"ground truth {truth.location!r} has zero prior probability")
    return ValidationReport(
        violations=tuple(violations), notes=tuple(notes), warnings=tuple(warns)
    )


def _check_prior(
    prior: priors.Prior,
    tolerances: constants.Tolerances,
    violations: list[str],
    notes: list[str],
) -> None:
    if isinstance(prior, priors.Mixture):
        weights = np.asarray(prior.weights)
        if np.any(weights < 0):
            violations.append(f"negative mixture weight in {prior.weights!r}")
        total = math.fsum(prior.weights)
        if abs(total - 1.0) > tolerances.mixture_weights:
            violations.append(f"mixture weights sum to {total:.12g} ≠ 1")
        for component in prior.components:
            _check_prior(component, tolerances, violations, notes)
        return
    try:
        mass = priors.masses(prior)
    except ValueError as e:
        violations.append(str(e))
        return
    if np.any(mass < 0) or not np.all(np.isfinite(mass)):
        violations.append(f"{type(prior).__name__} has negative or non-finite mass")
    total = math.fsum(mass)
    if abs(total - 1.0) > tolerances.mass:
        violations.append(f"mass {total:.12g} ≠ 1")
    raw = priors.raw_mass(prior)
    if not math.isclose(raw, 1.0, rel_tol=0, abs_tol=1e-15) and isinstance(
        prior, (priors.Gaussian2D, priors.UniformDisc, priors.UniformInterval)
    ):
        notes.append(
            f"{type(prior).__name__} renormalized over the grid (captured mass {raw:.12g})"
        )


def check_detection(
    space: spaces.SearchSpace,
    det: detection.DetectionModel,
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES,
) -> list[str]:
    """Spot-check the regularity of `det` on a sample of cells and efforts."""
    points = space.points()
    if space.size > _MAX_SAMPLED_CELLS:
        step = math.ceil(space.size / _MAX_SAMPLED_CELLS)
        points = points[::step]
    found: list[str] = []
    try:
        values = np.stack([det.value(points, y) for y in _SAMPLE_EFFORTS])
        derivs = np.stack([det.deriv(points, y) for y in _SAMPLE_EFFORTS])
    except (ValueError, TypeError, IndexError) as e:
        return [f"detection model cannot be evaluated on this space: {e}"]
    if np.any(np.abs(values[0]) > 0):
        found.append("d(x, 0) ≠ 0")
    if np.any(values < 0) or np.any(values > 1):
        found.append("d(x, y) outside [0, 1]")
    if np.any(np.diff(values, axis=0) < 0):
        found.append("d(x, ·) is decreasing somewhere")
    if np.any(derivs <= 0) or not np.all(np.isfinite(derivs)):
        found.append("∂d/∂y is not positive")
    elif np.any(np.diff(derivs, axis=0) >= 0):
        found.append("∂d/∂y is not strictly decreasing")
    else:
        for y, level in zip(_SAMPLE_EFFORTS[1:], derivs[1:]):
            recovered = det.deriv_inverse(points, level)
            if np.any(np.abs(recovered - y) > tolerances.inverse * max(1.0, y)):
                found.append(f"deriv_inverse(deriv(y)) ≠ y at y={y!r}")
                break
    for y in _SAMPLE_EFFORTS[1:]:
        step = 1e-5 * max(1.0, y)
        central = (det.value(points, y + step) - det.value(points, y - step)) / (2 * step)
        analytic = det.deriv(points, y)
        if np.any(
            np.abs(central - analytic)
            > tolerances.finite_difference * np.abs(analytic) + 1e-9
        ):
            found.append(f"∂d/∂y disagrees with a finite difference at y={y!r}")
            break
    return found


def _check_schedule(schedule: schedules.EffortSchedule) -> list[str]:
    found: list[str] = []
    if isinstance(schedule, schedules.Table):
        times = np.concatenate(([0.0], schedule.times, [schedule.times[-1] * 2 + 1]))
    else:
        times = np.asarray(_SAMPLE_TIMES)
    efforts = schedule(times)
    if efforts[0] < 0:
        found.append(f"E(0) = {efforts[0]!r} < 0")
    if np.any(np.diff(efforts) < 0):
        found.append("E(t) is decreasing somewhere")
    if np.any(efforts[times > 0] <= 0):
        found.append("E(t) is not positive for t > 0")
    return found
