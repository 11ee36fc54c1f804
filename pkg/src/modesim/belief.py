"""Generalised Dempster-Shafer belief functions and their visualisation.

Belief values are stored densely, indexed by subset bitmask over an ordered
statement set.  Super-additivity is checked exhaustively over subset pairs,
so keep the statement set small when validating.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .errors import InvalidInputError, InvalidSubsetError, ZeroConfidenceError
from .simplicial import Face, SimplexPoint

TOL = 1e-9

MAX_STATEMENTS = 16


@dataclass(frozen=True, init=False)
class StatementSet:
    """An ordered set of statement names; order fixes subset bitmasks."""

    statements: tuple[str, ...]

    def __init__(self, statements: Iterable[str]):
        ss = tuple(statements)
        if not ss:
            raise InvalidInputError("statement set must be non-empty")
        if len(set(ss)) != len(ss):
            raise InvalidInputError("duplicate statements")
        if len(ss) > MAX_STATEMENTS:
            raise InvalidInputError(f"more than {MAX_STATEMENTS} statements")
        object.__setattr__(self, "statements", ss)

    def __len__(self):
        return len(self.statements)

    def __iter__(self):
        return iter(self.statements)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.statements)) - 1

    def mask_of(self, subset: Iterable[str]) -> int:
        mask = 0
        for s in subset:
            try:
                mask |= 1 << self.statements.index(s)
            except ValueError:
                raise InvalidSubsetError(f"unknown statement {s!r}") from None
        return mask

    def subset_of(self, mask: int) -> tuple[str, ...]:
        return tuple(s for i, s in enumerate(self.statements) if mask >> i & 1)


class Violation(NamedTuple):
    """One failed invariant, with the offending subsets and side values."""

    kind: str
    subsets: tuple[tuple[str, ...], ...]
    lhs: float
    rhs: float

    def __str__(self):
        names = " , ".join("{" + ",".join(s) + "}" for s in self.subsets)
        return f"{self.kind} at {names}: {self.lhs:.6g} vs {self.rhs:.6g}"


@dataclass(frozen=True, init=False)
class BeliefFunction:
    """A super-additive set function with Bel(empty)=0, not necessarily
    normalised to Bel(X)=1."""

    over: StatementSet
    values: tuple[float, ...]

    def __init__(self, over: StatementSet, values: Iterable[float]):
        vals = tuple(float(v) for v in values)
        if len(vals) != 1 << len(over):
            raise InvalidInputError(
                f"need {1 << len(over)} subset values, got {len(vals)}"
            )
        object.__setattr__(self, "over", over)
        object.__setattr__(self, "values", vals)

    def __call__(self, subset: Iterable[str]) -> float:
        return self.values[self.over.mask_of(subset)]

    def at_mask(self, mask: int) -> float:
        return self.values[mask]

    @property
    def total(self) -> float:
        """Belief in the whole statement set."""
        return self.values[self.over.full_mask]


@dataclass(frozen=True, init=False)
class MassFunction:
    """Non-negative masses on non-empty subsets, total at most one."""

    over: StatementSet
    masses: tuple[float, ...]

    def __init__(self, over: StatementSet, masses: Mapping[int, float] | Iterable[float]):
        n = 1 << len(over)
        if isinstance(masses, Mapping):
            dense = [0.0] * n
            for mask, m in masses.items():
                dense[mask] = float(m)
        else:
            dense = [float(m) for m in masses]
            if len(dense) != n:
                raise InvalidInputError(f"need {n} masses, got {len(dense)}")
        if dense[0] > 0.0:
            raise InvalidInputError("mass on the empty set must be zero")
        if any(m < 0.0 for m in dense):
            raise InvalidInputError("negative mass")
        if sum(dense) > 1.0 + TOL:
            raise InvalidInputError(f"total mass {sum(dense)} exceeds 1")
        object.__setattr__(self, "over", over)
        object.__setattr__(self, "masses", tuple(dense))

    @classmethod
    def from_named(cls, over: StatementSet, named: Mapping[frozenset | tuple, float]):
        return cls(over, {over.mask_of(k): v for k, v in named.items()})

    @property
    def total(self) -> float:
        return sum(self.masses)


@dataclass(frozen=True)
class BeliefVisualisation:
    """The two visualisation pieces: overall confidence and a simplex point."""

    confidence: float
    position: SimplexPoint


def validate(bel: BeliefFunction) -> list[Violation]:
    """All invariant violations; empty list means the function is sound.

    Never raises.  The super-additivity sweep is quadratic in the number of
    subsets, so this is meant for small statement sets.
    """
    out: list[Violation] = []
    ss = bel.over
    n = 1 << len(ss)
    if abs(bel.values[0]) > TOL:
        out.append(Violation("empty-set", ((),), bel.values[0], 0.0))
    for mask in range(n):
        v = bel.values[mask]
        if v < -TOL or v > 1.0 + TOL:
            out.append(Violation("range", (ss.subset_of(mask),), v, v))
    for y in range(n):
        for z in range(y, n):
            lhs = bel.values[y | z] + bel.values[y & z]
            rhs = bel.values[y] + bel.values[z]
            if lhs < rhs - TOL:
                out.append(
                    Violation(
                        "super-additivity",
                        (ss.subset_of(y), ss.subset_of(z)),
                        lhs,
                        rhs,
                    )
                )
    return out


def from_mass(m: MassFunction) -> BeliefFunction:
    """Bel(Y) = sum of masses of non-empty subsets of Y (zeta transform)."""
    n = len(m.over)
    vals = list(m.masses)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                vals[mask] += vals[mask ^ bit]
    vals[0] = 0.0
    return BeliefFunction(m.over, vals)


def plausibility(bel: BeliefFunction, subset: Iterable[str]) -> float:
    """Pla(Y) = Bel(X) - Bel(X minus Y)."""
    mask = bel.over.mask_of(subset)
    full = bel.over.full_mask
    return bel.values[full] - bel.values[full & ~mask]


def is_normalised(bel: BeliefFunction) -> bool:
    return abs(bel.total - 1.0) <= TOL


def visualise(bel: BeliefFunction) -> BeliefVisualisation:
    """Confidence Bel(X) plus the normalised singleton-plausibility point."""
    if bel.total <= TOL:
        raise ZeroConfidenceError("Bel(X) = 0: visualisation undefined")
    plas = {s: plausibility(bel, (s,)) for s in bel.over}
    denom = sum(plas.values())
    weights = {s: p / denom for s, p in plas.items()}
    support = [s for s, w in weights.items() if w > 0.0]
    point = SimplexPoint(Face(support), {s: weights[s] for s in support})
    return BeliefVisualisation(confidence=bel.total, position=point)


def confidence_band(
    confidence: float, thresholds: tuple[float, float] = (0.75, 0.90)
) -> str:
    """Colour-code a confidence value: green / orange / red."""
    low, high = thresholds
    if not (0.0 <= low < high <= 1.0):
        raise InvalidInputError(f"bad thresholds {thresholds}")
    if confidence >= high:
        return "green"
    if confidence >= low:
        return "orange"
    return "red"
