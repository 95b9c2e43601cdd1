"""Registry of closed-form detection probabilities for the bundled scenarios.

These are test fixtures: each entry evaluates a known formula and never touches the
allocator, except `remark4`, whose multiplier has no closed form and is found with the
same log-λ bisection the allocator uses.

Formulas are piecewise where the optimal plan funds only part of the space at low
budgets; every entry covers the full range of effort.

Examples: Typical Usage
    >>> from searchlight.oracle import references
    >>> ref = references.closed_form_reference("example4", t=1.0, H=1.0)
    >>> round(ref.P, 6), round(ref.P_true, 6)
    (0.264241, 0.632121)
"""

from __future__ import annotations

import dataclasses
import math
import typing as t

from scipy import integrate

from searchlight import errors
from searchlight.allocator import routines

__all__ = ("Reference", "closed_form_reference", "registered", "REGISTRY")

LN4: t.Final[float] = math.log(4.0)
EXAMPLE7_OFFSET: t.Final[float] = 15.318


@dataclasses.dataclass(frozen=True, slots=True)
class Reference:
    """Reference values at one instant.

    Attributes:
        P: Subjective detection probability of the primary plan.
        P_true: True detection probability of the primary plan.
        P_alt: Subjective detection probability of the alternative plan, if any.
        P_true_alt: True detection probability of the alternative plan, if any.
        allocations: Effort (or density) of the plans at named points.
    """

    P: float | None
    P_true: float | None
    P_alt: float | None = None
    P_true_alt: float | None = None
    allocations: t.Mapping[str, float] = dataclasses.field(default_factory=dict)


ReferenceFn: t.TypeAlias = t.Callable[..., Reference]
REGISTRY: dict[str, ReferenceFn] = {}


def _register(name: str) -> t.Callable[[ReferenceFn], ReferenceFn]:
    def decorator(func: ReferenceFn) -> ReferenceFn:
        REGISTRY[name] = func
        return func

    return decorator


def registered() -> tuple[str, ...]:
    return tuple(sorted(REGISTRY))


def closed_form_reference(
    scenario_id: str,
    t: float | None = None,
    *,
    E: float | None = None,
    **params: float,
) -> Reference:
    """Evaluate the registered formula for `scenario_id` at time `t` or effort `E`.

    Args:
        scenario_id: A registered id, see
            [`registered`][searchlight.oracle.references.registered].
        t: The time; converted to effort with the scenario's own schedule.
        E: The effort directly, instead of `t`.
        **params: Overrides for the scenario's parameters (e.g. `p`, `sigma`, `H`).

    Raises:
        UnknownReferenceError: If `scenario_id` is not registered.
        ValueError: If neither `t` nor `E` is given.
    """
    try:
        func = REGISTRY[scenario_id]
    except KeyError:
        raise errors.UnknownReferenceError(
            f"No closed-form reference for {scenario_id!r}; known: {registered()}"
        ) from None
    if t is None and E is None:
        raise ValueError("Pass either t or E")
    return func(t=t, E=E, **params)


def _effort(
    t: float | None, E: float | None, *, offset: float = 0.0, rate: float = 1.0
) -> float:
    return E if E is not None else offset + rate * t  # type: ignore[operator]


def _time(t: float | None, E: float | None, *, rate: float) -> float:
    return t if t is not None else E / rate  # type: ignore[operator]


def two_cell_optimal(p: float, effort: float, rate: float = 1.0) -> tuple[float, float]:
    """The optimal split of `effort` between two cells with masses `(p, 1 − p)`."""
    first = 0.5 * (effort + math.log(p / (1 - p)) / rate)
    first = min(effort, max(0.0, first))
    return first, effort - first


def _two_cell_prob(p: float, split: tuple[float, float], rate: float) -> float:
    first, second = split
    return p * -math.expm1(-rate * first) + (1 - p) * -math.expm1(-rate * second)


@_register("example1")
def _example1(*, t=None, E=None) -> Reference:
    effort = _effort(t, E)
    prob = -math.expm1(-effort / 2)
    return Reference(
        P=prob,
        P_true=prob,
        allocations={"phi*(1)": effort / 2, "phi*(2)": effort / 2},
    )


@_register("example2")
def _example2(*, t=None, E=None, radius: float = 1.0) -> Reference:
    effort = _effort(t, E)
    density = effort / (math.pi * radius**2)
    prob = -math.expm1(-density)
    return Reference(P=prob, P_true=prob, allocations={"density": density})


@_register("example3")
def _example3(*, t=None, E=None, p: float = 2 / 3) -> Reference:
    effort = _effort(t, E)
    split = two_cell_optimal(p, effort)
    return Reference(
        P=_two_cell_prob(p, split, 1.0),
        P_true=-math.expm1(-split[0]),
        allocations={"phi*(1)": split[0], "phi*(2)": split[1]},
    )


@_register("remark3")
def _remark3(*, t=None, E=None, x0: int = 1) -> Reference:
    effort = _effort(t, E)
    threshold = math.log(2) / 2
    if effort <= threshold:
        first, second = 0.0, effort
    else:
        first = (2 * effort - math.log(2)) / 3
        second = (effort + math.log(2)) / 3
    subjective = 0.5 * -math.expm1(-first) + 0.5 * -math.expm1(-2 * second)
    true = -math.expm1(-first) if x0 == 1 else -math.expm1(-2 * second)
    return Reference(
        P=subjective,
        P_true=true,
        allocations={"phi*(1)": first, "phi*(2)": second},
    )


@_register("remark4")
def _remark4(
    *, t=None, E=None, a: float = 1.0, b: float = 2.0, x0: float = 1.505
) -> Reference:
    effort = _effort(t, E)
    width = b - a
    if effort == 0:
        return Reference(P=0.0, P_true=0.0, allocations={"lambda": 1 / width, "phi*(x0)": 0.0})

    def integrand(x: float, lam: float) -> float:
        return -math.log(lam * width / x) / x

    def aggregate(log_lambda: float) -> float:
        lam = math.exp(log_lambda)
        cut = max(a, lam * width)
        if cut >= b:
            return 0.0
        value, _ = integrate.quad(integrand, cut, b, args=(lam,), epsabs=1e-14, epsrel=1e-13)
        return value

    log_lambda, _ = routines.bisect_log(aggregate, effort, hi=math.log(b / width))
    lam = math.exp(log_lambda)
    cut = max(a, lam * width)
    subjective = (b - cut) / width - lam * math.log(b / cut)
    true = 1 - lam * width / x0 if x0 > cut else 0.0
    return Reference(
        P=subjective,
        P_true=true,
        allocations={"lambda": lam, "phi*(x0)": max(0.0, -math.log(lam * width / x0) / x0)},
    )


def _gaussian_h(sigma: float, W: float, v: float, H: float | None) -> float:
    return H if H is not None else math.sqrt(W * v / (math.pi * sigma**2))


@_register("example4")
def _example4(
    *,
    t=None,
    E=None,
    sigma: float = 2.0,
    W: float = 1.0,
    v: float = 1.0,
    H: float | None = None,
) -> Reference:
    h = _gaussian_h(sigma, W, v, H)
    rate = math.pi * sigma**2 * h**2
    u = h * math.sqrt(_time(t, E, rate=rate))
    return Reference(
        P=1 - (1 + u) * math.exp(-u),
        P_true=-math.expm1(-u),
        allocations={"phi*(0)": u},
    )


@_register("example5")
def _example5(*, t=None, E=None, p: float = 2 / 3) -> Reference:
    effort = _effort(t, E, offset=LN4)
    optimal = two_cell_optimal(p, effort)
    alternative = example5_alternative_split(effort)
    return Reference(
        P=_two_cell_prob(p, optimal, 1.0),
        P_true=-math.expm1(-optimal[0]),
        P_alt=_two_cell_prob(p, alternative, 1.0),
        P_true_alt=-math.expm1(-alternative[0]),
        allocations={
            "phi*(1)": optimal[0],
            "phi*(2)": optimal[1],
            "phi(1)": alternative[0],
            "phi(2)": alternative[1],
        },
    )


def example5_alternative_split(effort: float) -> tuple[float, float]:
    """Cell 1 alone up to ln 4, then ln 4 more on cell 1 than on cell 2."""
    if effort <= LN4:
        return effort, 0.0
    return (effort + LN4) / 2, (effort - LN4) / 2


@_register("example6")
def _example6(
    *, t=None, E=None, sigma: float = 2.0, W: float = 1.0, v: float = 1.0
) -> Reference:
    time = _time(t, E, rate=W * v)
    optimal = _example4(t=time, sigma=sigma, W=W, v=v)
    a = math.sqrt(time / math.pi)
    return Reference(
        P=optimal.P,
        P_true=optimal.P_true,
        P_alt=1 - 4 / 3 * math.exp(-a / 4) + math.exp(-a) / 3,
        P_true_alt=-math.expm1(-a),
        allocations={"phi*(0)": optimal.allocations["phi*(0)"], "phi(0)": a},
    )


@_register("example7")
def _example7(
    *,
    t=None,
    E=None,
    p1: float = 0.99,
    p2: float = 0.17,
    w: float = 0.75,
    c: float = 0.3,
) -> Reference:
    effort = _effort(t, E, offset=EXAMPLE7_OFFSET)
    p = w * p1 + (1 - w) * p2
    optimal = two_cell_optimal(p, effort, c)
    first = two_cell_optimal(p1, effort, c)
    second = two_cell_optimal(p2, effort, c)
    composite = (
        w * first[0] + (1 - w) * second[0],
        w * first[1] + (1 - w) * second[1],
    )
    return Reference(
        P=_two_cell_prob(p, optimal, c),
        P_true=-math.expm1(-c * optimal[0]),
        P_alt=_two_cell_prob(p, composite, c),
        P_true_alt=-math.expm1(-c * composite[0]),
        allocations={
            "p": p,
            "phi*(1)": optimal[0],
            "phi*(2)": optimal[1],
            "phi_c(1)": composite[0],
            "phi_c(2)": composite[1],
        },
    )


@_register("example8")
def _example8(
    *,
    t=None,
    E=None,
    sigma1: float = 2.0,
    sigma2: float = 0.5,
    w: float = 0.5,
    W: float = 1.0,
    v: float = 1.0,
) -> Reference:
    effort = _effort(t, E, rate=W * v)
    sigma = math.sqrt(w * sigma1**2 + (1 - w) * sigma2**2)
    scale = math.sqrt(effort / math.pi)
    u = scale / sigma
    coefficient = w / sigma1 + (1 - w) / sigma2
    return Reference(
        P=1 - (1 + u) * math.exp(-u),
        P_true=-math.expm1(-u),
        P_true_alt=-math.expm1(-coefficient * scale),
        allocations={
            "sigma": sigma,
            "phi*(0)": u,
            "phi_c(0)": coefficient * scale,
            "coefficient*": 1 / sigma,
            "coefficient_c": coefficient,
        },
    )


@_register("counterexample6")
def _counterexample6(*, t=None, E=None, W: float = 1.0, v: float = 1.0) -> Reference:
    time = _time(t, E, rate=W * v)
    return Reference(
        P=None,
        P_true=-math.expm1(-math.exp(-time)),
        allocations={"phi(0)": math.exp(-time)},
    )
