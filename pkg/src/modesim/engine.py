"""The mode machine: zones, thresholds, hysteresis, oracle ingestion,
stepping, and the trajectory/explanation records.

Stepping is discrete and driven by reading timestamps; between readings the
state is held (zero-order hold).  Zone transitions are edge-triggered: a
zone fires only when its predicate flips from false to true between
consecutive samples, and at most one transition fires per step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .cover import Region, StateSpace
from .errors import CoverageGapError, EngineError, InvalidInputError
from .simplicial import AbstractComplex, Face, SimplexPoint, in_face


def _fmt(x: float) -> float:
    """Round-trip a float through 12 significant digits (stable JSON)."""
    return float(f"{float(x):.12g}")


@dataclass(frozen=True)
class OracleReading:
    """A time-stamped value from a possibly unreliable channel."""

    channel: str
    time: float
    value: tuple[float, ...]
    reliability: Optional[float] = None


@dataclass(frozen=True)
class ZoneAtom:
    """One barycentric constraint: a weight comparison or face membership."""

    kind: str  # "weight" | "in_face"
    vertex: str = ""
    op: str = ">="
    threshold: float = 0.0
    face: Optional[Face] = None
    tol: float = 1e-9

    def holds(self, point: SimplexPoint) -> bool:
        if self.kind == "in_face":
            return in_face(point, self.face, self.tol)
        w = point.weight(self.vertex)
        if self.op == ">=":
            return w >= self.threshold
        if self.op == ">":
            return w > self.threshold
        if self.op == "<=":
            return w <= self.threshold
        if self.op == "<":
            return w < self.threshold
        raise InvalidInputError(f"unknown zone operator {self.op!r}")

    def margin(self, point: SimplexPoint) -> float:
        """Signed distance to satisfaction; positive means not yet satisfied."""
        if self.kind == "in_face":
            outside = [x for v, x in point.weights.items() if v not in self.face]
            return (max(outside) if outside else 0.0) - self.tol
        w = point.weight(self.vertex)
        if self.op in (">=", ">"):
            return self.threshold - w
        return w - self.threshold


@dataclass(frozen=True)
class Zone:
    """A named region of the realised complex with an attached action."""

    name: str
    atoms: tuple[ZoneAtom, ...]
    action: str  # "warn" | "transition" | "intervene"
    message: str = ""
    target: Optional[Face] = None

    def holds(self, point: SimplexPoint) -> bool:
        return all(a.holds(point) for a in self.atoms)

    def margin(self, point: SimplexPoint) -> float:
        return max(a.margin(point) for a in self.atoms)


@dataclass(frozen=True)
class Mode:
    """A face interpreted as an operational regime."""

    face: Face
    objective: str = ""
    oracle_channels: tuple[str, ...] = ()
    zones: tuple[Zone, ...] = ()


@dataclass(frozen=True)
class StableDomain:
    """A mode's stable state region; overlaps are the hysteresis bands."""

    mode: Face
    region: Region


@dataclass(frozen=True)
class Event:
    kind: str  # "warn" | "transition" | "intervene" | "access-violation"
    name: str
    detail: str = ""


@dataclass(frozen=True)
class TrajectorySample:
    time: float
    mode: Face
    point: SimplexPoint
    confidence: float
    events: tuple[Event, ...]


@dataclass(frozen=True)
class Trajectory:
    samples: tuple[TrajectorySample, ...]

    def __len__(self):
        return len(self.samples)

    def events(self, kind: Optional[str] = None) -> list[Event]:
        out = []
        for s in self.samples:
            out.extend(e for e in s.events if kind is None or e.kind == kind)
        return out


@dataclass(frozen=True)
class ExplanationRecord:
    """Why the engine is where it is: per-zone margins at a sample."""

    time: float
    mode: Face
    point: SimplexPoint
    margins: tuple[tuple[str, float], ...]
    next_likely: Optional[str]


Evaluator = Callable[[Face, Mapping[str, float]], SimplexPoint]


@dataclass(frozen=True)
class Scenario:
    """Everything the engine needs: complex, modes, evaluator, channels."""

    name: str
    complex: AbstractComplex
    space: StateSpace
    modes: tuple[Mode, ...]
    initial: Face
    evaluator: Evaluator
    channels: tuple[tuple[str, str], ...] = ()  # (channel, state dim)
    stable_domains: tuple[StableDomain, ...] = ()
    layout_hints: tuple[tuple[str, tuple[float, float]], ...] = ()
    thresholds: tuple[float, float] = (0.75, 0.90)
    initial_state: tuple[tuple[str, float], ...] = ()
    time_dim: Optional[str] = None

    def mode_of(self, face: Face) -> Mode:
        for m in self.modes:
            if m.face == face:
                return m
        # modes without declared zones are implicit
        return Mode(face=face)

    def channel_dim(self, channel: str) -> Optional[str]:
        for c, d in self.channels:
            if c == channel:
                return d
        return None


def hysteresis_transition(
    domains: Sequence[StableDomain], current: Face, s: Sequence[float]
) -> Face:
    """Stay in the current domain until the state leaves it; then move to the
    first other domain (declaration order) containing the state."""
    for d in domains:
        if d.mode == current and d.region.contains(s):
            return current
    for d in domains:
        if d.region.contains(s):
            return d.mode
    raise CoverageGapError(f"state {tuple(s)} in no stable domain", witness=tuple(s))


class Engine:
    """Single-writer discrete-time mode machine over a scenario."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.mode: Face = scenario.initial
        self.time: float = 0.0
        self.state: dict[str, float] = {
            name: lo for name, lo, _ in scenario.space.dims
        }
        self.state.update(dict(scenario.initial_state))
        self.reliability: dict[str, float] = {}
        self._started = False
        self._active: dict[tuple[Face, str], bool] = {}
        self._channel_times: dict[str, float] = {}

    # -- helpers ---------------------------------------------------------

    def _point(self) -> SimplexPoint:
        return self.scenario.evaluator(self.mode, dict(self.state))

    def _confidence(self) -> float:
        if not self.reliability:
            return 1.0
        return min(self.reliability.values())

    def _initial_sample(self) -> TrajectorySample:
        if self.scenario.time_dim:
            self.state[self.scenario.time_dim] = self.time
        point = self._point()
        mode = self.scenario.mode_of(self.mode)
        for zone in mode.zones:
            self._active[(self.mode, zone.name)] = zone.holds(point)
        self._started = True
        return TrajectorySample(
            time=self.time,
            mode=self.mode,
            point=point,
            confidence=self._confidence(),
            events=(),
        )

    # -- stepping --------------------------------------------------------

    def step(
        self, time: float, readings: Iterable[OracleReading]
    ) -> TrajectorySample:
        """Ingest readings at ``time``, re-evaluate, fire zones, log events."""
        if not self._started:
            self._initial_sample()
        if time <= self.time and self._started and time != 0.0:
            raise EngineError(f"time regression: {time} after {self.time}")
        events: list[Event] = []
        mode = self.scenario.mode_of(self.mode)
        for r in readings:
            if r.time > time + 1e-12:
                raise EngineError(f"reading at {r.time} ahead of step time {time}")
            prev = self._channel_times.get(r.channel)
            if prev is not None and r.time < prev:
                raise EngineError(
                    f"reading times regress on channel {r.channel!r}"
                )
            if mode.oracle_channels and r.channel not in mode.oracle_channels:
                events.append(
                    Event(
                        kind="access-violation",
                        name=r.channel,
                        detail=f"mode {mode.face} may not read {r.channel!r}",
                    )
                )
                continue
            self._channel_times[r.channel] = r.time
            dim = self.scenario.channel_dim(r.channel)
            if dim is None:
                raise EngineError(f"channel {r.channel!r} is not declared")
            self.state[dim] = float(r.value[0])
            self.reliability[r.channel] = (
                1.0 if r.reliability is None else float(r.reliability)
            )
        self.time = time
        if self.scenario.time_dim:
            self.state[self.scenario.time_dim] = time

        # hysteresis over stable domains, if the scenario declares them
        if self.scenario.stable_domains:
            svec = [self.state[n] for n in self.scenario.space.names]
            new_mode = hysteresis_transition(
                self.scenario.stable_domains, self.mode, svec
            )
            if new_mode != self.mode:
                events.append(
                    Event(
                        kind="transition",
                        name=str(new_mode),
                        detail=f"{self.mode} -> {new_mode} (stable-domain exit)",
                    )
                )
                self.mode = new_mode
                mode = self.scenario.mode_of(self.mode)

        point = self._point()

        # zones in declaration order; edge-triggered; one transition max
        transitioned = False
        for zone in mode.zones:
            key = (mode.face, zone.name)
            was = self._active.get(key, False)
            now = zone.holds(point)
            self._active[key] = now
            if now and not was:
                if zone.action == "transition":
                    if not transitioned:
                        events.append(
                            Event("transition", zone.name, str(zone.target))
                        )
                        self.mode = zone.target
                        transitioned = True
                elif zone.action == "warn":
                    events.append(Event("warn", zone.name, zone.message))
                else:
                    events.append(Event("intervene", zone.name, zone.message))

        return TrajectorySample(
            time=time,
            mode=self.mode,
            point=point,
            confidence=self._confidence(),
            events=tuple(events),
        )


def run(
    scenario: Scenario,
    trace: Sequence[OracleReading],
    t_end: Optional[float] = None,
) -> Trajectory:
    """Replay a time-sorted trace through a fresh engine."""
    times = [r.time for r in trace]
    if times != sorted(times):
        raise InvalidInputError("trace must be time-sorted")
    engine = Engine(scenario)
    by_time: dict[float, list[OracleReading]] = {}
    for r in trace:
        by_time.setdefault(r.time, []).append(r)
    ordered = [t for t in sorted(by_time) if t_end is None or t <= t_end]
    samples = []
    if not ordered or ordered[0] > 0.0:
        samples.append(engine._initial_sample())
    for t in ordered:
        samples.append(engine.step(t, by_time[t]))
    return Trajectory(samples=tuple(samples))


def explain(
    scenario: Scenario, trajectory: Trajectory, time: float
) -> ExplanationRecord:
    """Margins against the then-active mode's zones at the nearest sample
    at or before ``time``."""
    if not trajectory.samples:
        raise InvalidInputError("empty trajectory: nothing to explain")
    eligible = [s for s in trajectory.samples if s.time <= time + 1e-12]
    if not eligible:
        raise InvalidInputError(f"time {time} precedes the trajectory")
    sample = eligible[-1]
    mode = scenario.mode_of(sample.mode)
    margins = tuple(
        (z.name, _fmt(z.margin(sample.point))) for z in mode.zones
    )
    positive = [(name, m) for name, m in margins if m > 0.0]
    next_likely = min(positive, key=lambda nm: nm[1])[0] if positive else None
    return ExplanationRecord(
        time=sample.time,
        mode=sample.mode,
        point=sample.point,
        margins=margins,
        next_likely=next_likely,
    )


# -- trajectory serialization -------------------------------------------


def trajectory_to_obj(trajectory: Trajectory) -> list[dict]:
    out = []
    for s in trajectory.samples:
        out.append(
            {
                "t": _fmt(s.time),
                "mode": list(s.mode.vertices),
                "weights": {v: _fmt(x) for v, x in sorted(s.point.weights.items())},
                "confidence": _fmt(s.confidence),
                "events": [
                    {"kind": e.kind, "name": e.name, "detail": e.detail}
                    for e in s.events
                ],
            }
        )
    return out


def trajectory_to_json(trajectory: Trajectory) -> str:
    return json.dumps(trajectory_to_obj(trajectory), indent=2) + "\n"


def trajectory_from_json(text: str) -> Trajectory:
    data = json.loads(text)
    samples = []
    for item in data:
        face = Face(item["mode"])
        point = SimplexPoint(
            Face([v for v, x in item["weights"].items() if x > 0.0] or item["mode"]),
            {v: x for v, x in item["weights"].items() if x > 0.0},
        )
        samples.append(
            TrajectorySample(
                time=float(item["t"]),
                mode=face,
                point=point,
                confidence=float(item["confidence"]),
                events=tuple(
                    Event(e["kind"], e["name"], e.get("detail", ""))
                    for e in item["events"]
                ),
            )
        )
    return Trajectory(samples=tuple(samples))
