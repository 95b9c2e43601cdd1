"""Reduce domain objects and results to JSON-native values.

Tagged domain types (spaces, priors, detection models, schedules) marshal to a mapping
with a `kind` key which [`unmarshals`][searchlight.unmarshals] reads back. Other
dataclasses marshal field by field.

Examples: Typical Usage
    >>> from searchlight import domain, marshals
    >>> marshals.marshal(domain.Linear(rate=2.0))
    {'kind': 'linear', 'rate': 2.0}
    >>> marshals.marshal(domain.DiscreteSpace(2))
    {'kind': 'discrete', 'cells': 2}
"""

from __future__ import annotations

import dataclasses
import math
import typing as t

import numpy as np

from searchlight import serdes
from searchlight.domain import detection, plans, priors, schedules, spaces

__all__ = ("marshal", "marshaller")

MarshallerT: t.TypeAlias = t.Callable[[t.Any], serdes.MarshalledValueT]


def marshal(value: t.Any) -> serdes.MarshalledValueT:
    """Marshal `value` into a JSON-native structure.

    Raises:
        TypeError: If `value` holds something with no wire form, such as a callable.
    """
    return marshaller(value.__class__)(value)


def marshaller(tp: type) -> MarshallerT:
    """Get the marshalling routine for a type."""
    for cls in tp.__mro__:
        if cls in _HANDLERS:
            return _HANDLERS[cls]
    if dataclasses.is_dataclass(tp):
        return _fields
    if issubclass(tp, t.Mapping):
        return _mapping
    if issubclass(tp, (list, tuple, np.ndarray)):
        return _sequence
    if issubclass(tp, np.generic):
        return lambda v: marshal(v.item())
    raise TypeError(f"No wire form for {tp.__qualname__!r}")


def _scalar(value: t.Any) -> serdes.MarshalledValueT:
    return value


def _float(value: float) -> serdes.MarshalledValueT:
    value = float(value)
    if math.isfinite(value):
        return value
    return serdes.format_float(value)


def _sequence(value: t.Any) -> serdes.MarshalledValueT:
    if isinstance(value, np.ndarray):
        value = value.tolist()
    return [marshal(v) for v in value]


def _mapping(value: t.Mapping) -> serdes.MarshalledValueT:
    return {str(k): marshal(v) for k, v in serdes.iteritems(value)}


def _fields(value: t.Any) -> serdes.MarshalledValueT:
    return {
        f.name: marshal(getattr(value, f.name))
        for f in dataclasses.fields(value)
        if not f.name.startswith("_")
    }


def _discrete(space: spaces.DiscreteSpace) -> serdes.MarshalledValueT:
    return {"kind": "discrete", "cells": space.cell_count}


def _grid(space: spaces.GridSpace) -> serdes.MarshalledValueT:
    return {
        "kind": "grid",
        "lower": _sequence(space.lower),
        "upper": _sequence(space.upper),
        "resolution": space.resolution,
    }


def _tagged(kind: str, *names: str) -> MarshallerT:
    def routine(value: t.Any) -> serdes.MarshalledValueT:
        out: dict[str, serdes.MarshalledValueT] = {"kind": kind}
        out.update((name, marshal(getattr(value, name))) for name in names)
        return out

    return routine


def _mixture(prior: priors.Mixture) -> serdes.MarshalledValueT:
    return {
        "kind": "mixture",
        "components": [marshal(c) for c in prior.components],
        "weights": _sequence(prior.weights),
    }


def _exponential(model: detection.ExponentialRate) -> serdes.MarshalledValueT:
    if callable(model.rate):
        raise TypeError("A callable detection rate has no wire form")
    return {"kind": "exponential", "rate": marshal(model.rate)}


def _general(model: detection.GeneralRegular) -> serdes.MarshalledValueT:
    if not model.parameters:
        raise TypeError(f"Detection model {model.name!r} has no wire form")
    return {"kind": model.name, **_mapping(model.parameters)}


def _allocation(alloc: plans.Allocation) -> serdes.MarshalledValueT:
    return {"total": alloc.total, "effort": _sequence(alloc.effort)}


def _truth(truth: plans.GroundTruth) -> serdes.MarshalledValueT:
    return marshal(truth.location)


_HANDLERS: dict[type, MarshallerT] = {
    bool: _scalar,
    int: _scalar,
    str: _scalar,
    type(None): _scalar,
    float: _float,
    spaces.DiscreteSpace: _discrete,
    spaces.GridSpace: _grid,
    priors.DiscretePmf: _tagged("pmf", "weights"),
    priors.Gaussian2D: _tagged("gaussian", "sigma"),
    priors.UniformDisc: _tagged("disc", "radius"),
    priors.UniformInterval: _tagged("interval", "a", "b"),
    priors.GridDensity: _tagged("grid_density", "values"),
    priors.Mixture: _mixture,
    detection.ExponentialRate: _exponential,
    detection.GeneralRegular: _general,
    schedules.Linear: _tagged("linear", "rate"),
    schedules.Affine: _tagged("affine", "offset", "rate"),
    schedules.Table: _tagged("table", "times", "efforts"),
    plans.Allocation: _allocation,
    plans.GroundTruth: _truth,
}
