"""Abstract simplicial complexes and points of their standard realisation.

Vertices are non-empty strings, faces are canonically sorted vertex tuples,
and a complex is a downward-closed family of faces.  A ``SimplexPoint`` is a
barycentric weight vector supported on one face.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import networkx as nx

from .errors import (
    DegeneratePointError,
    GeometricConsistencyError,
    InvalidInputError,
    InvalidWeightsError,
)

WEIGHT_TOL = 1e-9

MAX_VERTICES = 24
MAX_FACES = 1 << 16


@dataclass(frozen=True, order=True, init=False)
class Face:
    """A face: a non-empty set of vertices stored in sorted order."""

    vertices: tuple[str, ...]

    def __init__(self, vertices: Iterable[str]):
        vs = tuple(sorted(set(vertices)))
        if not vs:
            raise InvalidInputError("a face needs at least one vertex")
        for v in vs:
            if not isinstance(v, str) or not v:
                raise InvalidInputError(f"bad vertex name: {v!r}")
        object.__setattr__(self, "vertices", vs)

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def __contains__(self, vertex: str) -> bool:
        return vertex in self.vertices

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def issubset(self, other: "Face") -> bool:
        return set(self.vertices) <= set(other.vertices)

    def __str__(self) -> str:
        return "{" + ",".join(self.vertices) + "}"


@dataclass(frozen=True)
class AbstractComplex:
    """A downward-closed set of faces over a finite vertex set."""

    vertex_set: tuple[str, ...]
    faces: frozenset[Face]

    def is_face(self, candidate: Iterable[str]) -> bool:
        vs = tuple(sorted(set(candidate)))
        if not vs or any(v not in self.vertex_set for v in vs):
            return False
        return Face(vs) in self.faces

    def faces_of_dim(self, dim: int) -> list[Face]:
        return sorted(f for f in self.faces if f.dim == dim)

    @property
    def dim(self) -> int:
        return max(f.dim for f in self.faces)

    def __contains__(self, face: Face) -> bool:
        return face in self.faces


@dataclass(frozen=True, init=False, unsafe_hash=False, eq=True)
class SimplexPoint:
    """A point of the standard realisation: carrier face + barycentric weights.

    Weights are renormalised to sum exactly to one at construction.
    """

    carrier: Face
    weights: dict[str, float]

    def __init__(self, carrier: Face, weights: Mapping[str, float]):
        w = {v: float(weights.get(v, 0.0)) for v in carrier.vertices}
        if any(x < -WEIGHT_TOL for x in w.values()):
            raise InvalidWeightsError(f"negative weight in {w}")
        total = sum(w.values())
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InvalidWeightsError(f"weights sum to {total}, expected 1")
        w = {v: max(x, 0.0) / total for v, x in w.items()}
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "weights", w)

    def weight(self, vertex: str) -> float:
        return self.weights.get(vertex, 0.0)

    def __str__(self) -> str:
        inner = ", ".join(f"{v}: {x:.6g}" for v, x in self.weights.items())
        return "(" + inner + ")"


def close_downward(faces: Iterable[Iterable[str]]) -> AbstractComplex:
    """Downward closure: the complex generated by the given faces."""
    generators = [Face(f) for f in faces]
    if not generators:
        raise InvalidInputError("no faces given")
    vertices = sorted({v for f in generators for v in f})
    if len(vertices) > MAX_VERTICES:
        raise InvalidInputError(
            f"{len(vertices)} vertices exceeds the cap of {MAX_VERTICES}"
        )
    closed: set[Face] = set()
    for f in generators:
        vs = f.vertices
        for k in range(1, len(vs) + 1):
            for sub in itertools.combinations(vs, k):
                closed.add(Face(sub))
    if len(closed) > MAX_FACES:
        raise InvalidInputError(f"{len(closed)} faces exceeds the cap of {MAX_FACES}")
    return AbstractComplex(vertex_set=tuple(vertices), faces=frozenset(closed))


def is_face(complex: AbstractComplex, candidate: Iterable[str]) -> bool:
    """Membership query; unknown vertices simply give False."""
    return complex.is_face(candidate)


def realize_point(
    complex: AbstractComplex, weights: Mapping[str, float]
) -> SimplexPoint:
    """Build the point of the realisation with the given barycentric weights.

    The support (vertices with positive weight) must be a face.
    """
    support = tuple(sorted(v for v, x in weights.items() if x > 0.0))
    if any(x < -WEIGHT_TOL for x in weights.values()):
        raise InvalidWeightsError(f"negative weight in {dict(weights)}")
    total = sum(weights.values())
    if abs(total - 1.0) > WEIGHT_TOL:
        raise InvalidWeightsError(f"weights sum to {total}, expected 1")
    if not support or not complex.is_face(support):
        raise GeometricConsistencyError(
            f"support {{{','.join(support)}}} is not a face of the complex"
        )
    return SimplexPoint(Face(support), weights)


def carrier_face(point: SimplexPoint, tol: float = WEIGHT_TOL) -> Face:
    """Smallest face containing every vertex whose weight exceeds ``tol``."""
    if tol < 0:
        raise InvalidInputError("tol must be non-negative")
    support = [v for v, x in point.weights.items() if x > tol]
    if not support:
        raise DegeneratePointError(f"all weights at or below tol={tol}")
    return Face(support)


def in_face(point: SimplexPoint, face: Face, tol: float = WEIGHT_TOL) -> bool:
    """True iff every vertex outside ``face`` carries weight at most ``tol``."""
    return all(x <= tol for v, x in point.weights.items() if v not in face)


def layout(
    complex: AbstractComplex,
    hints: Optional[Mapping[str, tuple[float, float]]] = None,
) -> dict[str, tuple[float, float]]:
    """Deterministic 2D coordinates for every vertex.

    Hinted vertices are fixed; the rest are placed by a seeded force layout
    on the 1-skeleton, so repeated calls give identical results.
    """
    hints = dict(hints or {})
    vertices = list(complex.vertex_set)
    unhinted = [v for v in vertices if v not in hints]
    if not unhinted:
        return {v: (float(x), float(y)) for v, (x, y) in hints.items()}
    if len(vertices) == 1 and not hints:
        return {vertices[0]: (0.0, 0.0)}
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    for f in complex.faces_of_dim(1):
        a, b = f.vertices
        graph.add_edge(a, b)
    fixed = list(hints) or None
    pos = dict(hints) if hints else None
    placed = nx.spring_layout(graph, pos=pos, fixed=fixed, seed=7, dim=2)
    return {v: (float(p[0]), float(p[1])) for v, p in sorted(placed.items())}
