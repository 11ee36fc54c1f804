"""Judicial process: jail / probation / early release over (time, behaviour).

Good behaviour g(t) starts at 1 and loses an exponentially decaying amount
per recorded incident.  Transitions use overlapping stable domains, so a
person near a threshold is not shuttled back and forth: the fold model keeps
them in their current status until g actually leaves its domain.

Two views of the dynamics coexist:

* the time-independent fold over g alone, with Jail stable on [0, b] and
  Probation stable on [a, 1] (the overlap (a, b) is the hysteresis band);
* the three stable domains in the (t, g) square, drawn as polygons between
  the labelled corner points a..g, with early release as a third status.

The map into the jail/probation/release triangle is specified on each
domain's boundary (corner points are pinned to triangle vertices, values
linear along boundary edges) and filled in continuously by inverse-distance
weighting of densely sampled boundary values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..cover import Box, PolygonRegion, StateSpace
from ..engine import Mode, Scenario, StableDomain, hysteresis_transition
from ..errors import InvalidInputError, OutOfDomainError
from ..simplicial import AbstractComplex, Face, SimplexPoint, close_downward

JAIL = "Jail"
PROBATION = "Probation"
RELEASE = "Release"

# corner points of the stable domains in the (t, g) square, read off the
# domain diagram; overridable through JudicialParams
DEFAULT_POINTS = {
    "a": (0.25, 1.0),
    "b": (0.5, 1.0),
    "c": (0.75, 0.75),
    "d": (1.0, 0.5),
    "e": (1.0, 0.625),
    "f": (1.0, 0.25),
    "g": (0.25, 0.5),
}

_VERTEX_POINTS = {
    JAIL: (1.0, 0.0, 0.0),
    PROBATION: (0.0, 1.0, 0.0),
    RELEASE: (0.0, 0.0, 1.0),
}


@dataclass(frozen=True)
class JudicialParams:
    a: float = 0.25
    b: float = 0.5
    decay: float = 10.0
    incidents: tuple[tuple[float, float], ...] = ()  # (t_i, deduction_i)
    points: dict[str, tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_POINTS)
    )

    def __post_init__(self):
        if not 0.0 < self.a < self.b < 1.0:
            raise InvalidInputError(f"need 0 < a < b < 1, got a={self.a}, b={self.b}")
        if self.decay <= 0.0:
            raise InvalidInputError("decay rate must be positive")
        for t, d in self.incidents:
            if d < 0.0 or not 0.0 <= t <= 1.0:
                raise InvalidInputError(f"bad incident ({t}, {d})")


def good_behaviour(params: JudicialParams, t: float) -> float:
    """g(t): 1 minus the decayed sum of incident deductions, clamped."""
    if not 0.0 <= t <= 1.0:
        raise OutOfDomainError(f"t={t} outside [0, 1]")
    total = sum(
        d * math.exp(-params.decay * (t - ti))
        for ti, d in params.incidents
        if ti <= t
    )
    return min(max(1.0 - total, 0.0), 1.0)


def judicial_complex() -> AbstractComplex:
    return close_downward([[JAIL, PROBATION, RELEASE]])


def judicial_space() -> StateSpace:
    return StateSpace([("t", 0.0, 1.0), ("g", 0.0, 1.0)])


# -- the time-independent fold over g alone ------------------------------


def fold_domains(params: JudicialParams) -> tuple[StableDomain, StableDomain]:
    """Jail stable on g in [0, b], Probation on [a, 1], any t."""
    return (
        StableDomain(Face([JAIL]), Box([(0.0, 1.0), (0.0, params.b)])),
        StableDomain(Face([PROBATION]), Box([(0.0, 1.0), (params.a, 1.0)])),
    )


def fold_mode(params: JudicialParams, current: Face, g: float) -> Face:
    """Jail/probation status after observing behaviour level g."""
    return hysteresis_transition(fold_domains(params), current, (0.0, g))


# -- the three stable domains in the (t, g) square -----------------------


def _polygons(params: JudicialParams) -> dict[str, list[tuple[float, float]]]:
    p = params.points
    return {
        JAIL: [(0.0, 0.0), (1.0, 0.0), p["d"], p["c"], p["a"], (0.0, 1.0)],
        PROBATION: [p["a"], p["b"], p["c"], p["e"], p["f"], p["g"]],
        RELEASE: [p["b"], (1.0, 1.0), p["d"]],
    }


def stable_domains(params: JudicialParams) -> tuple[StableDomain, ...]:
    """Declaration order puts Release before Probation so that leaving Jail
    across the release boundary resolves the overlap to Release."""
    polys = _polygons(params)
    return (
        StableDomain(Face([JAIL]), PolygonRegion(polys[JAIL])),
        StableDomain(Face([RELEASE]), PolygonRegion(polys[RELEASE])),
        StableDomain(Face([PROBATION]), PolygonRegion(polys[PROBATION])),
    )


def judicial_mode(
    params: JudicialParams, current: Face, t: float, g: float
) -> Face:
    """Hysteresis over the three stable domains at state (t, g)."""
    if not (0.0 <= t <= 1.0 and 0.0 <= g <= 1.0):
        raise OutOfDomainError(f"({t}, {g}) outside the unit square")
    return hysteresis_transition(stable_domains(params), current, (t, g))


# boundary corner assignments for each domain; values between corners are
# linear along each boundary edge
_CORNER_VALUES = {
    JAIL: [JAIL, JAIL, RELEASE, RELEASE, PROBATION, JAIL],
    PROBATION: [PROBATION, RELEASE, RELEASE, RELEASE, JAIL, JAIL],
    RELEASE: [RELEASE, RELEASE, RELEASE],
}

_SAMPLES_PER_EDGE = 64


def _boundary_samples(params: JudicialParams, mode_name: str):
    poly = _polygons(params)[mode_name]
    labels = _CORNER_VALUES[mode_name]
    pts, vals = [], []
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        v0 = np.array(_VERTEX_POINTS[labels[i]])
        v1 = np.array(_VERTEX_POINTS[labels[(i + 1) % n]])
        for k in range(_SAMPLES_PER_EDGE):
            s = k / _SAMPLES_PER_EDGE
            pts.append((x0 + s * (x1 - x0), y0 + s * (y1 - y0)))
            vals.append(v0 + s * (v1 - v0))
    return np.array(pts), np.array(vals)


def judicial_phi(
    params: JudicialParams, current: Face, t: float, g: float
) -> SimplexPoint:
    """Map a state in the current stable domain into the j/p/r triangle.

    Exact at the sampled boundary points (corner points in particular);
    interior values are inverse-distance-weighted (power 2) blends of the
    boundary values.
    """
    name = current.vertices[0]
    if name not in _CORNER_VALUES:
        raise InvalidInputError(f"unknown judicial mode {current}")
    region = PolygonRegion(_polygons(params)[name])
    if not region.contains((t, g)):
        raise OutOfDomainError(f"({t}, {g}) outside the {name} stable domain")
    pts, vals = _boundary_samples(params, name)
    d2 = np.sum((pts - np.array((t, g))) ** 2, axis=1)
    nearest = int(np.argmin(d2))
    if d2[nearest] < 1e-24:
        weights = vals[nearest]
    else:
        w = 1.0 / d2
        weights = (w[:, None] * vals).sum(axis=0) / w.sum()
    named = {
        v: float(x)
        for v, x in zip((JAIL, PROBATION, RELEASE), weights)
        if x > 1e-15
    }
    total = sum(named.values())
    named = {v: x / total for v, x in named.items()}
    return SimplexPoint(Face(named), named)


def _evaluator(params: JudicialParams):
    def evaluate(face: Face, state) -> SimplexPoint:
        return judicial_phi(params, face, state["t"], state["g"])

    return evaluate


def judicial_scenario(params: JudicialParams | None = None) -> Scenario:
    params = params or JudicialParams()
    return Scenario(
        name="judicial",
        complex=judicial_complex(),
        space=judicial_space(),
        modes=(
            Mode(Face([JAIL]), objective="serve the custodial sentence",
                 oracle_channels=("behaviour",)),
            Mode(Face([PROBATION]), objective="supervised release",
                 oracle_channels=("behaviour",)),
            Mode(Face([RELEASE]), objective="sentence complete",
                 oracle_channels=("behaviour",)),
        ),
        initial=Face([JAIL]),
        evaluator=_evaluator(params),
        channels=(("behaviour", "g"),),
        stable_domains=stable_domains(params),
        layout_hints=(
            (JAIL, (0.0, 0.0)),
            (PROBATION, (1.0, 0.0)),
            (RELEASE, (0.5, 1.0)),
        ),
        initial_state=(("g", 0.0),),
        time_dim="t",
    )
