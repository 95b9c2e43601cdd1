"""Strict conversion of decoded scenario JSON into domain objects.

Object keys are normalized with `inflection.underscore`, so `halfWidth` and
`half_width` are the same key. Unknown keys are rejected with the dotted path at
which they appear. Tagged values select their builder from the `kind` key.

Examples: Typical Usage
    >>> from searchlight import unmarshals
    >>> unmarshals.SpaceUnmarshaller()({"kind": "discrete", "cells": 2})
    DiscreteSpace(cell_count=2)
    >>> unmarshals.ScheduleUnmarshaller()({"kind": "affine", "offset": 1, "rate": 2})
    Affine(offset=1.0, rate=2.0)
"""

from __future__ import annotations

import abc
import contextlib
import dataclasses
import typing as tp

import inflection

from searchlight import constants, errors, serdes
from searchlight.domain import detection, plans, priors, schedules, spaces

T = tp.TypeVar("T")

__all__ = (
    "AbstractUnmarshaller",
    "SpaceUnmarshaller",
    "PriorUnmarshaller",
    "DetectionUnmarshaller",
    "ScheduleUnmarshaller",
    "TruthUnmarshaller",
    "TolerancesUnmarshaller",
    "normalize_keys",
    "number",
    "integer",
)


class AbstractUnmarshaller(abc.ABC, tp.Generic[T]):
    """Common interface for the scenario unmarshallers.

    Attributes:
        path: The dotted key path of the value this unmarshaller reads, for errors.
    """

    path: str

    __slots__ = ("path",)

    def __repr__(self):
        return f"<{self.__class__.__name__}(path={self.path!r})>"

    def __init__(self, *, path: str = ""):
        self.path = path

    @abc.abstractmethod
    def __call__(self, val: tp.Any) -> T:
        """Unmarshal a decoded JSON value."""

    def fail(self, msg: str, key: str | None = None) -> errors.ScenarioError:
        return errors.ScenarioError(msg, path=_join(self.path, key))

    def fields(
        self,
        val: tp.Any,
        *,
        required: tp.Iterable[str] = (),
        optional: tp.Iterable[str] = (),
    ) -> dict[str, tp.Any]:
        """Normalize an object's keys and check them against the allowed set."""
        fields = normalize_keys(val, path=self.path)
        required = frozenset(required)
        allowed = required | frozenset(optional)
        for key in fields:
            if key not in allowed:
                raise self.fail(f"Unknown key {key!r}", key)
        for key in sorted(required - fields.keys()):
            raise self.fail(f"Missing required key {key!r}", key)
        return fields

    @contextlib.contextmanager
    def building(self) -> tp.Iterator[None]:
        """Re-raise domain construction errors as scenario errors at this path."""
        try:
            yield
        except errors.ScenarioError:
            raise
        except (ValueError, TypeError) as e:
            raise self.fail(str(e)) from e


class TaggedUnmarshaller(AbstractUnmarshaller[T]):
    """Select a builder from the `kind` key of an object."""

    __slots__ = ()

    _HANDLERS: tp.ClassVar[tp.Mapping[str, tuple[frozenset[str], frozenset[str]]]] = {}

    def __call__(self, val: tp.Any) -> T:
        kind = self.kind(val)
        required, optional = self._HANDLERS[kind]
        fields = self.fields(val, required=required | {"kind"}, optional=optional)
        fields.pop("kind")
        with self.building():
            return self.build(kind, fields)

    def kind(self, val: tp.Any) -> str:
        fields = normalize_keys(val, path=self.path)
        if "kind" not in fields:
            raise self.fail("Missing required key 'kind'", "kind")
        kind = inflection.underscore(str(fields["kind"]))
        if kind not in self._HANDLERS:
            raise self.fail(
                f"Unknown kind {fields['kind']!r}; expected one of {tuple(self._HANDLERS)}",
                "kind",
            )
        return kind

    @abc.abstractmethod
    def build(self, kind: str, fields: dict[str, tp.Any]) -> T: ...


def _keys(*names: str) -> frozenset[str]:
    return frozenset(names)


class SpaceUnmarshaller(TaggedUnmarshaller[spaces.SearchSpace]):
    """Read a search space.

    Kinds: `discrete` (`cells`), `grid` (`lower`, `upper`, `resolution`), `centered`
    (`half_width`, `resolution`, `dimension`) and `truncated` (`sigma`, `resolution`,
    `truncation`, `dimension`), the last being a centered grid reaching `truncation·σ`.
    """

    __slots__ = ()

    _HANDLERS = {
        "discrete": (_keys("cells"), _keys()),
        "grid": (_keys("lower", "upper", "resolution"), _keys()),
        "centered": (_keys("half_width", "resolution"), _keys("dimension")),
        "truncated": (_keys("sigma", "resolution"), _keys("truncation", "dimension")),
    }

    def build(self, kind, fields):
        if kind == "discrete":
            return spaces.DiscreteSpace(integer(fields["cells"], path=self.path))
        resolution = number(fields["resolution"], path=_join(self.path, "resolution"))
        dimension = integer(fields.get("dimension", 2), path=_join(self.path, "dimension"))
        if kind == "grid":
            return spaces.GridSpace(
                lower=self.vector(fields["lower"], "lower"),
                upper=self.vector(fields["upper"], "upper"),
                resolution=resolution,
            )
        if kind == "centered":
            return spaces.GridSpace.centered(
                number(fields["half_width"], path=_join(self.path, "half_width")),
                resolution,
                dimension,
            )
        return spaces.truncated_grid(
            number(fields["sigma"], path=_join(self.path, "sigma")),
            resolution,
            truncation=number(
                fields.get("truncation", constants.DEFAULT_TRUNCATION),
                path=_join(self.path, "truncation"),
            ),
            dimension=dimension,
        )

    def vector(self, val: tp.Any, key: str) -> tuple[float, ...]:
        if not isinstance(val, list):
            val = [val]
        return tuple(number(v, path=_join(self.path, key)) for v in val)


class PriorUnmarshaller(TaggedUnmarshaller[priors.Prior]):
    """Read a prior on a known space.

    Kinds: `pmf` (`weights`), `gaussian` (`sigma`), `disc` (`radius`), `interval`
    (`a`, `b`), `grid_density` (`values`) and `mixture` (`components`, `weights`).
    """

    __slots__ = ("space",)

    _HANDLERS = {
        "pmf": (_keys("weights"), _keys()),
        "gaussian": (_keys("sigma"), _keys()),
        "disc": (_keys("radius"), _keys()),
        "interval": (_keys("a", "b"), _keys()),
        "grid_density": (_keys("values"), _keys()),
        "mixture": (_keys("components", "weights"), _keys()),
    }

    def __init__(self, space: spaces.SearchSpace, *, path: str = ""):
        super().__init__(path=path)
        self.space = space

    def build(self, kind, fields):
        def num(key: str) -> float:
            return number(fields[key], path=_join(self.path, key))

        if kind == "pmf":
            return priors.DiscretePmf(
                weights=self.numbers(fields["weights"], "weights"), space=self.space
            )
        if kind == "gaussian":
            return priors.Gaussian2D(sigma=num("sigma"), space=self.space)
        if kind == "disc":
            return priors.UniformDisc(radius=num("radius"), space=self.space)
        if kind == "interval":
            return priors.UniformInterval(a=num("a"), b=num("b"), space=self.space)
        if kind == "grid_density":
            return priors.GridDensity(
                values=self.numbers(fields["values"], "values"), space=self.space
            )
        components = fields["components"]
        if not isinstance(components, list):
            raise self.fail("Mixture components must be a list", "components")
        return priors.Mixture(
            components=tuple(
                PriorUnmarshaller(self.space, path=_join(self.path, f"components[{i}]"))(c)
                for i, c in enumerate(components)
            ),
            weights=self.numbers(fields["weights"], "weights"),
        )

    def numbers(self, val: tp.Any, key: str) -> tuple[float, ...]:
        if not isinstance(val, list):
            raise self.fail("Expected a list of numbers", key)
        return tuple(number(v, path=_join(self.path, key)) for v in val)


class DetectionUnmarshaller(TaggedUnmarshaller[detection.DetectionModel]):
    """Read a detection model.

    Kinds: `exponential` (`rate`: a number, a list per cell, or `"coordinate"`) and
    `saturating` (`ceiling`, `rate`).
    """

    __slots__ = ()

    _HANDLERS = {
        "exponential": (_keys(), _keys("rate")),
        "saturating": (_keys("ceiling", "rate"), _keys()),
    }

    def build(self, kind, fields):
        path = _join(self.path, "rate")
        if kind == "saturating":
            return detection.saturating(
                number(fields["ceiling"], path=_join(self.path, "ceiling")),
                number(fields["rate"], path=path),
            )
        rate = fields.get("rate", 1.0)
        if rate == "coordinate":
            return detection.ExponentialRate("coordinate")
        if isinstance(rate, list):
            return detection.ExponentialRate(tuple(number(r, path=path) for r in rate))
        return detection.ExponentialRate(number(rate, path=path))


class ScheduleUnmarshaller(TaggedUnmarshaller[schedules.EffortSchedule]):
    """Read an effort schedule: `linear`, `affine` or `table`."""

    __slots__ = ()

    _HANDLERS = {
        "linear": (_keys("rate"), _keys()),
        "affine": (_keys("offset", "rate"), _keys()),
        "table": (_keys("times", "efforts"), _keys()),
    }

    def build(self, kind, fields):
        values = {
            key: (
                tuple(number(v, path=_join(self.path, key)) for v in val)
                if isinstance(val, list)
                else number(val, path=_join(self.path, key))
            )
            for key, val in fields.items()
        }
        if kind == "linear":
            return schedules.Linear(**values)
        if kind == "affine":
            return schedules.Affine(**values)
        return schedules.Table(**values)


class TruthUnmarshaller(AbstractUnmarshaller[plans.GroundTruth]):
    """Read a ground-truth location: a cell label, or a coordinate list."""

    __slots__ = ("space",)

    def __init__(self, space: spaces.SearchSpace, *, path: str = ""):
        super().__init__(path=path)
        self.space = space

    def __call__(self, val: tp.Any) -> plans.GroundTruth:
        if isinstance(self.space, spaces.DiscreteSpace):
            return plans.GroundTruth(integer(val, path=self.path))
        if isinstance(val, list):
            return plans.GroundTruth(tuple(number(v, path=self.path) for v in val))
        return plans.GroundTruth((number(val, path=self.path),))


class TolerancesUnmarshaller(AbstractUnmarshaller[constants.Tolerances]):
    """Read tolerance overrides on top of the defaults."""

    __slots__ = ()

    def __call__(self, val: tp.Any) -> constants.Tolerances:
        names = [f.name for f in dataclasses.fields(constants.Tolerances)]
        fields = self.fields(val, optional=names)
        overrides = {
            key: (
                integer(v, path=_join(self.path, key))
                if key == "max_iterations"
                else number(v, path=_join(self.path, key))
            )
            for key, v in fields.items()
        }
        return constants.DEFAULT_TOLERANCES.replace(**overrides)


def normalize_keys(val: tp.Any, *, path: str = "") -> dict[str, tp.Any]:
    """Snake-case the keys of a JSON object.

    Raises:
        ScenarioError: If `val` is not an object, or two keys normalize to the same name.
    """
    if not isinstance(val, tp.Mapping):
        raise errors.ScenarioError(f"Expected an object, got {val!r}", path=path)
    out: dict[str, tp.Any] = {}
    for key, value in serdes.iteritems(val):
        name = inflection.underscore(str(key))
        if name in out:
            raise errors.ScenarioError(f"Duplicate key {key!r}", path=_join(path, name))
        out[name] = value
    return out


def number(val: tp.Any, *, path: str = "") -> float:
    """Read a JSON number as a float.

    Raises:
        ScenarioError: If `val` is not a number (booleans are rejected).
    """
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise errors.ScenarioError(f"Expected a number, got {val!r}", path=path)
    return float(val)


def integer(val: tp.Any, *, path: str = "") -> int:
    """Read a JSON number with an integral value as an int."""
    value = number(val, path=path)
    if not value.is_integer():
        raise errors.ScenarioError(f"Expected an integer, got {val!r}", path=path)
    return int(value)


def _join(path: str, key: str | None) -> str:
    if not key:
        return path
    return f"{path}.{key}" if path else key
