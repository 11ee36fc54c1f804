"""Offender monitoring: alcohol level and tag distance on [0,1]^2.

Both readings ramp from "clearly OK" below 1/4 to "clearly a problem" above
3/4; the gap between the bands leaves room for a warning before any
intervention fires.
"""

from __future__ import annotations

from ..cover import Box, Cover, StateSpace
from ..engine import Mode, Scenario, Zone, ZoneAtom
from ..errors import InvalidInputError, OutOfDomainError
from ..simplicial import AbstractComplex, Face, SimplexPoint, close_downward

OK = "OK"
ALC = "alcProb"
TAG = "tagProb"

BAND_LO = 0.25
BAND_HI = 0.75


def ramp(x: float, lo: float = BAND_LO, hi: float = BAND_HI) -> float:
    """0 below ``lo``, 1 above ``hi``, linear in between."""
    if not 0.0 <= lo < hi <= 1.0:
        raise InvalidInputError(f"bad ramp bands [{lo}, {hi}]")
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    return (x - lo) / (hi - lo)


def offender_complex() -> AbstractComplex:
    return close_downward([[OK, ALC, TAG]])


def offender_space() -> StateSpace:
    return StateSpace([("x_alc", 0.0, 1.0), ("x_tag", 0.0, 1.0)])


def offender_cover() -> Cover:
    """Three overlapping boxes: a problem band per reading plus an OK box."""
    return Cover(
        offender_space(),
        {
            OK: Box([(0.0, BAND_HI), (0.0, BAND_HI)]),
            ALC: Box([(BAND_LO, 1.0), (0.0, 1.0)]),
            TAG: Box([(0.0, 1.0), (BAND_LO, 1.0)]),
        },
    )


def offender_phi(x_alc: float, x_tag: float) -> SimplexPoint:
    """Map a state to the OK/alcProb/tagProb triangle.

    Weights are proportional to ((1-u)(1-v), u, v) for the two ramp values,
    so each corner of the square lands on its labelled vertex and (1,1)
    lands on the midpoint of the problem edge.
    """
    if not (0.0 <= x_alc <= 1.0 and 0.0 <= x_tag <= 1.0):
        raise OutOfDomainError(f"state ({x_alc}, {x_tag}) outside the unit square")
    u = ramp(x_alc)
    v = ramp(x_tag)
    raw = {OK: (1.0 - u) * (1.0 - v), ALC: u, TAG: v}
    total = sum(raw.values())
    weights = {k: w / total for k, w in raw.items() if w > 0.0}
    return SimplexPoint(Face(weights), weights)


def offender_interventions(x_alc: float, x_tag: float) -> list[str]:
    """Which interventions the monitored state triggers, if any."""
    alc_bad = x_alc >= BAND_HI
    tag_bad = x_tag >= BAND_HI
    if alc_bad and tag_bad:
        return ["police"]
    if alc_bad:
        return ["counsellor"]
    if tag_bad:
        return ["probation-officer"]
    if offender_phi(x_alc, x_tag).weight(OK) < 0.5:
        return ["warning"]
    return []


def _evaluator(face: Face, state) -> SimplexPoint:
    return offender_phi(state["x_alc"], state["x_tag"])


def offender_scenario() -> Scenario:
    """The runtime scenario: monitor mode with intervention/warning zones."""
    monitor = Face([OK, ALC, TAG])
    eps = 1e-9
    zones = (
        Zone(
            name="police",
            atoms=(
                ZoneAtom(kind="weight", vertex=ALC, op=">=", threshold=0.5 - eps),
                ZoneAtom(kind="weight", vertex=TAG, op=">=", threshold=0.5 - eps),
            ),
            action="intervene",
            message="the police are called",
        ),
        Zone(
            name="counsellor",
            atoms=(ZoneAtom(kind="weight", vertex=ALC, op=">", threshold=0.5),),
            action="intervene",
            message="asked to see their counsellor",
        ),
        Zone(
            name="probation-officer",
            atoms=(ZoneAtom(kind="weight", vertex=TAG, op=">", threshold=0.5),),
            action="intervene",
            message="asked to see their probation officer",
        ),
        Zone(
            name="warning",
            atoms=(
                ZoneAtom(kind="weight", vertex=OK, op="<", threshold=0.5),
                ZoneAtom(kind="weight", vertex=OK, op=">", threshold=eps),
            ),
            action="warn",
            message="approaching an intervention",
        ),
    )
    return Scenario(
        name="offender",
        complex=offender_complex(),
        space=offender_space(),
        modes=(
            Mode(
                face=monitor,
                objective="monitor alcohol and tag compliance",
                oracle_channels=("alc", "tag"),
                zones=zones,
            ),
        ),
        initial=monitor,
        evaluator=_evaluator,
        channels=(("alc", "x_alc"), ("tag", "x_tag")),
        layout_hints=(
            (OK, (0.5, 1.0)),
            (ALC, (0.0, 0.0)),
            (TAG, (1.0, 0.0)),
        ),
    )
