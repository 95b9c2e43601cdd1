"""Scenario files: one search problem, the plans to run on it and the outputs wanted.

A scenario is strict JSON with a `version` field. Keys may be written in camelCase or
snake_case. Bundled scenarios reproduce the worked examples and can be loaded by name.

Examples: Typical Usage
    >>> from searchlight import scenario
    >>> config = scenario.load_scenario("example4")
    >>> config.priors[0].sigma, config.schedule, config.truth.location
    (2.0, Linear(rate=1.0), (0.0, 0.0))
"""

from __future__ import annotations

import dataclasses
import importlib.resources
import logging
import os
import pathlib
import typing as t
import warnings

import inflection
import numpy as np
from more_itertools import one

from searchlight import (
    allocator,
    alternatives,
    codecs,
    composite,
    constants,
    errors,
    marshals,
    unmarshals,
)
from searchlight.allocator import routines
from searchlight.domain import detection, plans, priors, schedules, spaces, validation

__all__ = (
    "ScenarioConfig",
    "PlanRequest",
    "TimeRange",
    "ReferenceRequest",
    "ScenarioUnmarshaller",
    "SCENARIO_CODEC",
    "marshal_scenario",
    "load_scenario",
    "bundled",
    "build_plan",
)

logger = logging.getLogger(__name__)

PlanKindT: t.TypeAlias = t.Literal["optimal", "clairvoyant", "composite", "named"]
OutputT: t.TypeAlias = t.Literal["plan", "curves", "compare", "mean_times"]
PLAN_KINDS: t.Final[frozenset[str]] = frozenset(t.get_args(PlanKindT))
OUTPUTS: t.Final[frozenset[str]] = frozenset(t.get_args(OutputT))


@dataclasses.dataclass(frozen=True, slots=True)
class PlanRequest:
    """Which plan to build: the optimal one, the clairvoyant one, the composite of the
    per-prior optimal plans, or a named plan with parameters."""

    kind: PlanKindT = "optimal"
    name: str | None = None
    params: t.Mapping[str, float] = dataclasses.field(default_factory=dict)
    method: routines.MethodT = "auto"


@dataclasses.dataclass(frozen=True, slots=True)
class TimeRange:
    """Evenly spaced sample times `start..stop` inclusive."""

    start: float = 0.0
    stop: float = 20.0
    samples: int = constants.DEFAULT_CURVE_SAMPLES

    def __post_init__(self):
        if not 0 <= self.start < self.stop:
            raise ValueError(f"Time range [{self.start!r}, {self.stop!r}] is not valid")
        if self.samples < 2:
            raise ValueError(f"{self.samples!r} samples cannot span a time range")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.samples)


@dataclasses.dataclass(frozen=True, slots=True)
class ReferenceRequest:
    """The closed-form reference a scenario is checked against."""

    id: str
    params: t.Mapping[str, float] = dataclasses.field(default_factory=dict)


@dataclasses.dataclass(frozen=True, slots=True)
class ScenarioConfig:
    """A fully parsed scenario.

    Every part lives on `space`. With several priors, `prior` is their exact mixture.
    """

    name: str
    space: spaces.SearchSpace
    priors: tuple[priors.Prior, ...]
    weights: tuple[float, ...]
    detection: detection.DetectionModel
    schedule: schedules.EffortSchedule
    truth: plans.GroundTruth
    plan: PlanRequest
    time: TimeRange
    alternative: PlanRequest | None = None
    outputs: tuple[OutputT, ...] = ("curves",)
    tolerances: constants.Tolerances = constants.DEFAULT_TOLERANCES
    seed: int = 0
    moment_matched: bool = False
    reference: ReferenceRequest | None = None
    description: str = ""
    version: int = constants.SCENARIO_VERSION

    @property
    def prior(self) -> priors.Prior:
        if len(self.priors) == 1:
            return self.priors[0]
        return composite.mixture_prior(self.priors, self.weights, tolerances=self.tolerances)

    def validate(self) -> validation.ValidationReport:
        """Check every domain invariant of this scenario."""
        try:
            prior = self.prior
        except errors.ValidationError as e:
            return e.report
        return validation.validate(
            self.space,
            prior,
            self.detection,
            self.schedule,
            self.truth,
            tolerances=self.tolerances,
        )


class PlanRequestUnmarshaller(unmarshals.AbstractUnmarshaller[PlanRequest]):
    """Read `{"<kind>": {...}}` with exactly one kind."""

    __slots__ = ()

    def __call__(self, val: t.Any) -> PlanRequest:
        fields = unmarshals.normalize_keys(val, path=self.path)
        kind, body = one(
            fields.items(),
            too_short=self.fail(f"A plan request needs one of {sorted(PLAN_KINDS)}"),
            too_long=self.fail("A plan request names exactly one plan"),
        )
        if kind not in PLAN_KINDS:
            raise self.fail(f"Unknown plan {kind!r}", kind)
        inner = unmarshals.normalize_keys(body or {}, path=f"{self.path}.{kind}")
        for key in inner:
            if key not in ("name", "params", "method"):
                raise self.fail(f"Unknown key {key!r}", f"{kind}.{key}")
        method = inner.get("method", "auto")
        if method not in t.get_args(routines.MethodT):
            raise self.fail(f"Unknown solve method {method!r}", f"{kind}.method")
        name = inner.get("name")
        if kind == "named" and not isinstance(name, str):
            raise self.fail("A named plan needs a 'name'", f"{kind}.name")
        return PlanRequest(
            kind=kind,  # type: ignore[arg-type]
            name=name,
            params=_params(inner.get("params", {}), path=f"{self.path}.{kind}.params"),
            method=method,
        )


class ScenarioUnmarshaller(unmarshals.AbstractUnmarshaller[ScenarioConfig]):
    """Read a whole scenario document. Nothing is validated beyond structure here."""

    __slots__ = ()

    _REQUIRED: t.ClassVar[tuple[str, ...]] = (
        "version",
        "space",
        "priors",
        "detection",
        "schedule",
        "truth",
        "plan",
        "time",
    )
    _OPTIONAL: t.ClassVar[tuple[str, ...]] = (
        "name",
        "description",
        "weights",
        "alternative",
        "outputs",
        "tolerances",
        "seed",
        "moment_matched",
        "reference",
    )

    def __call__(self, val: t.Any) -> ScenarioConfig:
        fields = self.fields(val, required=self._REQUIRED, optional=self._OPTIONAL)
        version = unmarshals.integer(fields["version"], path="version")
        if version != constants.SCENARIO_VERSION:
            raise self.fail(f"Unsupported scenario version {version}", "version")
        space = unmarshals.SpaceUnmarshaller(path="space")(fields["space"])
        raw_priors = fields["priors"]
        if not isinstance(raw_priors, list) or not raw_priors:
            raise self.fail("Expected a non-empty list of priors", "priors")
        prior_list = tuple(
            unmarshals.PriorUnmarshaller(space, path=f"priors[{i}]")(p)
            for i, p in enumerate(raw_priors)
        )
        weights = self.weights(fields.get("weights"), len(prior_list))
        alternative = fields.get("alternative")
        return ScenarioConfig(
            name=str(fields.get("name", "scenario")),
            description=str(fields.get("description", "")),
            space=space,
            priors=prior_list,
            weights=weights,
            detection=unmarshals.DetectionUnmarshaller(path="detection")(fields["detection"]),
            schedule=unmarshals.ScheduleUnmarshaller(path="schedule")(fields["schedule"]),
            truth=unmarshals.TruthUnmarshaller(space, path="truth")(fields["truth"]),
            plan=PlanRequestUnmarshaller(path="plan")(fields["plan"]),
            alternative=(
                None
                if alternative is None
                else PlanRequestUnmarshaller(path="alternative")(alternative)
            ),
            time=self.time(fields["time"]),
            outputs=self.outputs(fields.get("outputs", ["curves"])),
            tolerances=unmarshals.TolerancesUnmarshaller(path="tolerances")(
                fields.get("tolerances", {})
            ),
            seed=unmarshals.integer(fields.get("seed", 0), path="seed"),
            moment_matched=self.flag(fields.get("moment_matched", False), "moment_matched"),
            reference=self.reference(fields.get("reference")),
            version=version,
        )

    def weights(self, val: t.Any, count: int) -> tuple[float, ...]:
        if val is None:
            if count > 1:
                raise self.fail("Several priors need mixture weights", "weights")
            return (1.0,)
        if not isinstance(val, list) or len(val) != count:
            raise self.fail(f"Expected {count} mixture weights", "weights")
        return tuple(unmarshals.number(w, path="weights") for w in val)

    def time(self, val: t.Any) -> TimeRange:
        path = "time"
        fields = unmarshals.normalize_keys(val, path=path)
        for key in fields:
            if key not in ("start", "stop", "samples"):
                raise errors.ScenarioError(f"Unknown key {key!r}", path=f"{path}.{key}")
        try:
            return TimeRange(
                start=unmarshals.number(fields.get("start", 0.0), path=f"{path}.start"),
                stop=unmarshals.number(fields.get("stop", 20.0), path=f"{path}.stop"),
                samples=unmarshals.integer(
                    fields.get("samples", constants.DEFAULT_CURVE_SAMPLES),
                    path=f"{path}.samples",
                ),
            )
        except ValueError as e:
            if isinstance(e, errors.ScenarioError):
                raise
            raise errors.ScenarioError(str(e), path=path) from e

    def outputs(self, val: t.Any) -> tuple[OutputT, ...]:
        if not isinstance(val, list):
            raise self.fail("Expected a list of outputs", "outputs")
        out = []
        for item in val:
            name = inflection.underscore(str(item))
            if name not in OUTPUTS:
                raise self.fail(f"Unknown output {item!r}", "outputs")
            out.append(name)
        return tuple(out)  # type: ignore[return-value]

    def flag(self, val: t.Any, key: str) -> bool:
        if not isinstance(val, bool):
            raise self.fail(f"Expected true or false, got {val!r}", key)
        return val

    def reference(self, val: t.Any) -> ReferenceRequest | None:
        if val is None:
            return None
        fields = unmarshals.normalize_keys(val, path="reference")
        for key in fields:
            if key not in ("id", "params"):
                raise errors.ScenarioError(f"Unknown key {key!r}", path=f"reference.{key}")
        if not isinstance(fields.get("id"), str):
            raise errors.ScenarioError("A reference needs an 'id'", path="reference.id")
        return ReferenceRequest(
            id=fields["id"],
            params=_params(fields.get("params", {}), path="reference.params"),
        )


def _params(val: t.Any, *, path: str) -> dict[str, float]:
    # Parameter names are case-sensitive (`W`, `H`), so they are not normalized.
    if not isinstance(val, t.Mapping):
        raise errors.ScenarioError(f"Expected an object, got {val!r}", path=path)
    return {str(k): unmarshals.number(v, path=f"{path}.{k}") for k, v in val.items()}


def marshal_scenario(config: ScenarioConfig) -> dict[str, t.Any]:
    """The wire form of a scenario.

    [`load_scenario`][searchlight.scenario.load_scenario] reads it back unchanged.
    """

    def request(req: PlanRequest) -> dict[str, t.Any]:
        body: dict[str, t.Any] = {"method": req.method, "params": dict(req.params)}
        if req.name is not None:
            body["name"] = req.name
        return {req.kind: body}

    out: dict[str, t.Any] = {
        "version": config.version,
        "name": config.name,
        "description": config.description,
        "space": marshals.marshal(config.space),
        "priors": [marshals.marshal(p) for p in config.priors],
        "weights": list(config.weights),
        "detection": marshals.marshal(config.detection),
        "schedule": marshals.marshal(config.schedule),
        "truth": marshals.marshal(config.truth),
        "plan": request(config.plan),
        "time": marshals.marshal(config.time),
        "outputs": list(config.outputs),
        "tolerances": marshals.marshal(config.tolerances),
        "seed": config.seed,
        "moment_matched": config.moment_matched,
    }
    if config.alternative is not None:
        out["alternative"] = request(config.alternative)
    if config.reference is not None:
        out["reference"] = marshals.marshal(config.reference)
    return out


SCENARIO_CODEC: t.Final[codecs.Codec[ScenarioConfig]] = codecs.codec(
    ScenarioUnmarshaller(), marshal=marshal_scenario
)


def bundled() -> tuple[str, ...]:
    """Names of the scenarios shipped with the package."""
    root = importlib.resources.files(f"{constants.PKG_NAME}.scenarios")
    return tuple(
        sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))
    )


def load_scenario(source: str | os.PathLike) -> ScenarioConfig:
    """Load, parse and validate a scenario file or a bundled scenario by name.

    Args:
        source: A path to a JSON file, or the name of a bundled scenario
            (with or without `.json`).

    Raises:
        ScenarioError: If the file cannot be read, is not valid JSON, or does not
            match the scenario structure.
        ValidationError: If a domain invariant fails; the error carries the report.
    """
    data, origin = _read(source)
    try:
        config = SCENARIO_CODEC.decode(data)
    except errors.ScenarioError as e:
        e.args = (f"{origin}: {e.args[0]}",)
        raise
    report = config.validate()
    for message in report.warnings:
        warnings.warn(message, errors.TruthOutsideSupportWarning, stacklevel=2)
    for note in report.notes:
        logger.info("%s: %s", origin, note)
    if not report.passed:
        raise errors.ValidationError(report)
    logger.debug("Loaded scenario %r from %s", config.name, origin)
    return config


def _read(source: str | os.PathLike) -> tuple[bytes, str]:
    path = pathlib.Path(source)
    if path.is_file():
        return path.read_bytes(), str(path)
    name = path.name if path.suffix == ".json" else f"{path.name}.json"
    resource = importlib.resources.files(f"{constants.PKG_NAME}.scenarios").joinpath(name)
    if not str(source).startswith((".", os.sep)) and resource.is_file():
        return resource.read_bytes(), f"<bundled {name}>"
    raise errors.ScenarioError(
        f"No scenario file {str(source)!r} and no bundled scenario of that name; "
        f"bundled: {bundled()}"
    )


def build_plan(
    config: ScenarioConfig, request: PlanRequest | None = None
) -> plans.SearchPlan:
    """Build the requested plan (the primary one by default) for a scenario.

    Raises:
        UnknownReferenceError: If a named plan does not exist.
        ValueError: If a composite plan is requested for a single prior.
    """
    request = request or config.plan
    if request.kind == "optimal":
        return allocator.optimal_plan(
            config.prior,
            config.detection,
            config.schedule,
            method=request.method,
            tolerances=config.tolerances,
        )
    if request.kind == "clairvoyant":
        return allocator.clairvoyant_plan(config.truth, config.schedule, space=config.space)
    if request.kind == "composite":
        if len(config.priors) < 2:
            raise ValueError("A composite plan needs several priors")
        parts = [
            allocator.optimal_plan(
                prior,
                config.detection,
                config.schedule,
                method=request.method,
                tolerances=config.tolerances,
            )
            for prior in config.priors
        ]
        return composite.composite_plan(parts, config.weights)
    return alternatives.named_plan(
        request.name or "", config.prior, config.schedule, **request.params
    )
