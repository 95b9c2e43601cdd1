"""Cumulative effort functions E(t)."""

from __future__ import annotations

import abc
import dataclasses
import typing as t

import numpy as np

__all__ = ("EffortSchedule", "Linear", "Affine", "Table")


class EffortSchedule(abc.ABC):
    """The total effort available by time `t`. Works on floats and arrays alike."""

    __slots__ = ()

    @t.overload
    def __call__(self, time: float) -> float: ...

    @t.overload
    def __call__(self, time: np.ndarray) -> np.ndarray: ...

    def __call__(self, time):
        out = self._evaluate(np.asarray(time, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    @abc.abstractmethod
    def _evaluate(self, time: np.ndarray) -> np.ndarray: ...


@dataclasses.dataclass(frozen=True, slots=True)
class Linear(EffortSchedule):
    """`E(t) = rate·t`, e.g. sweep width times speed."""

    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"{self.rate!r} is not a positive effort rate")
        object.__setattr__(self, "rate", float(self.rate))

    def _evaluate(self, time):
        return self.rate * time


@dataclasses.dataclass(frozen=True, slots=True)
class Affine(EffortSchedule):
    """`E(t) = offset + rate·t`: an initial budget already spent at `t = 0`."""

    offset: float
    rate: float

    def __post_init__(self):
        if not self.offset >= 0:
            raise ValueError(f"{self.offset!r} is not a non-negative offset")
        if not self.rate > 0:
            raise ValueError(f"{self.rate!r} is not a positive effort rate")
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "rate", float(self.rate))

    def _evaluate(self, time):
        return self.offset + self.rate * time


@dataclasses.dataclass(frozen=True, slots=True)
class Table(EffortSchedule):
    """Piecewise-linear effort through sampled `(t, E)` points.

    Before the first sample the first value is held; after the last, the final
    segment's slope is extended.
    """

    times: tuple[float, ...]
    efforts: tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(v) for v in self.times)
        efforts = tuple(float(v) for v in self.efforts)
        if len(times) < 2 or len(times) != len(efforts):
            raise ValueError("An effort table needs at least two (t, E) pairs")
        if np.any(np.diff(times) <= 0):
            raise ValueError(f"Effort table times {times!r} are not strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "efforts", efforts)

    def _evaluate(self, time):
        ts, es = np.asarray(self.times), np.asarray(self.efforts)
        out = np.interp(time, ts, es)
        slope = (es[-1] - es[-2]) / (ts[-1] - ts[-2])
        return np.where(time > ts[-1], es[-1] + slope * (time - ts[-1]), out)
