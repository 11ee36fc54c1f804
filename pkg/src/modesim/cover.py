"""State spaces, covers, the nerve complex, and partitions of unity.

Regions are axis-aligned boxes, half-planes, 2D polygons, or unions of
those.  Nerve intersections are decided exactly for boxes and half-planes
(interval arithmetic / LP feasibility) and by dense grid sampling otherwise.

The partition of unity is the normalised linear-ramp bump: a region's raw
bump is 0 outside it, 1 at depth >= margin inside it, and linear in the
distance to the region boundary in between.  Parts of a region boundary that
lie on the state-space boundary do not count as boundary for the depth, so
a region that reaches the edge of the box stays fully active there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linprog
from shapely.geometry import LineString, Point, Polygon as ShapelyPolygon, box as shapely_box

from .errors import (
    CoverageGapError,
    InvalidInputError,
    OutOfDomainError,
    ResolutionError,
)
from .simplicial import AbstractComplex, Face, SimplexPoint, close_downward

State = Sequence[float]


@dataclass(frozen=True, init=False)
class StateSpace:
    """An axis-aligned box of named dimensions."""

    dims: tuple[tuple[str, float, float], ...]

    def __init__(self, dims: Iterable[tuple[str, float, float]]):
        ds = tuple((str(n), float(lo), float(hi)) for n, lo, hi in dims)
        if not 1 <= len(ds) <= 8:
            raise InvalidInputError("state space must have 1..8 dimensions")
        names = [n for n, _, _ in ds]
        if len(set(names)) != len(names):
            raise InvalidInputError("duplicate dimension names")
        for n, lo, hi in ds:
            if not lo < hi:
                raise InvalidInputError(f"dimension {n}: need lower < upper")
        object.__setattr__(self, "dims", ds)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _, _ in self.dims)

    def contains(self, s: State) -> bool:
        return all(lo - 1e-12 <= x <= hi + 1e-12 for x, (_, lo, hi) in zip(s, self.dims))

    def grid(self, resolution: int) -> np.ndarray:
        """Regular grid of shape (resolution**n, n) including both ends."""
        axes = [np.linspace(lo, hi, resolution) for _, lo, hi in self.dims]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


class Region:
    """Base class; closed point sets inside a state space."""

    def contains(self, s: State) -> bool:
        raise NotImplementedError

    def depth(self, s: State, space: StateSpace) -> float:
        """Distance from s to the region boundary (0 outside), ignoring the
        parts of the boundary shared with the state-space boundary."""
        raise NotImplementedError

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        return np.array([self.contains(p) for p in pts], dtype=bool)

    def depth_many(self, pts: np.ndarray, space: StateSpace) -> np.ndarray:
        return np.array([self.depth(p, space) for p in pts], dtype=float)


@dataclass(frozen=True, init=False)
class Box(Region):
    """Per-axis closed intervals."""

    intervals: tuple[tuple[float, float], ...]

    def __init__(self, intervals: Iterable[tuple[float, float]]):
        iv = tuple((float(a), float(b)) for a, b in intervals)
        for a, b in iv:
            if not a <= b:
                raise InvalidInputError(f"bad interval [{a}, {b}]")
        object.__setattr__(self, "intervals", iv)

    def contains(self, s: State) -> bool:
        return all(a <= x <= b for x, (a, b) in zip(s, self.intervals))

    def depth(self, s: State, space: StateSpace) -> float:
        d = np.inf
        for x, (a, b), (_, lo, hi) in zip(s, self.intervals, space.dims):
            dlo = x - a if a > lo else np.inf
            dhi = b - x if b < hi else np.inf
            d = min(d, dlo, dhi)
        if d < 0.0:
            return 0.0
        return float(d) if np.isfinite(d) else max(hi - lo for _, lo, hi in space.dims)

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        ok = np.ones(len(pts), dtype=bool)
        for i, (a, b) in enumerate(self.intervals):
            ok &= (pts[:, i] >= a) & (pts[:, i] <= b)
        return ok

    def depth_many(self, pts: np.ndarray, space: StateSpace) -> np.ndarray:
        big = max(hi - lo for _, lo, hi in space.dims)
        d = np.full(len(pts), np.inf)
        for i, ((a, b), (_, lo, hi)) in enumerate(zip(self.intervals, space.dims)):
            if a > lo:
                d = np.minimum(d, pts[:, i] - a)
            if b < hi:
                d = np.minimum(d, b - pts[:, i])
        d = np.where(np.isinf(d), big, d)
        return np.maximum(d, 0.0)


@dataclass(frozen=True, init=False)
class HalfPlane(Region):
    """The closed set normal . x <= offset."""

    normal: tuple[float, ...]
    offset: float

    def __init__(self, normal: Iterable[float], offset: float):
        nv = tuple(float(x) for x in normal)
        if all(x == 0.0 for x in nv):
            raise InvalidInputError("half-plane normal must be non-zero")
        object.__setattr__(self, "normal", nv)
        object.__setattr__(self, "offset", float(offset))

    def contains(self, s: State) -> bool:
        return float(np.dot(self.normal, s)) <= self.offset + 1e-12

    def depth(self, s: State, space: StateSpace) -> float:
        norm = float(np.linalg.norm(self.normal))
        d = (self.offset - float(np.dot(self.normal, s))) / norm
        return max(d, 0.0)

    def depth_many(self, pts: np.ndarray, space: StateSpace) -> np.ndarray:
        norm = float(np.linalg.norm(self.normal))
        d = (self.offset - pts @ np.asarray(self.normal)) / norm
        return np.maximum(d, 0.0)

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        return pts @ np.asarray(self.normal) <= self.offset + 1e-12


@dataclass(frozen=True, init=False)
class PolygonRegion(Region):
    """A simple 2D polygon given by its vertex list."""

    points: tuple[tuple[float, float], ...]

    def __init__(self, points: Iterable[tuple[float, float]]):
        ps = tuple((float(x), float(y)) for x, y in points)
        if len(ps) < 3:
            raise InvalidInputError("polygon needs at least 3 vertices")
        poly = ShapelyPolygon(ps)
        if not poly.is_valid or poly.area <= 0.0:
            raise InvalidInputError("polygon must be simple and non-degenerate")
        object.__setattr__(self, "points", ps)

    @property
    def shapely(self) -> ShapelyPolygon:
        return ShapelyPolygon(self.points)

    def contains(self, s: State) -> bool:
        poly = self.shapely
        p = Point(s[0], s[1])
        return poly.contains(p) or poly.boundary.distance(p) <= 1e-12

    def _inner_boundary(self, space: StateSpace):
        # boundary of the polygon minus the part lying on the space boundary
        (_, x0, x1), (_, y0, y1) = space.dims
        frame = shapely_box(x0, y0, x1, y1).boundary.buffer(1e-12)
        return self.shapely.boundary.difference(frame)

    def depth(self, s: State, space: StateSpace) -> float:
        if not self.contains(s):
            return 0.0
        inner = self._inner_boundary(space)
        if inner.is_empty:
            return max(hi - lo for _, lo, hi in space.dims)
        return float(Point(s[0], s[1]).distance(inner))


@dataclass(frozen=True, init=False)
class UnionRegion(Region):
    """Union of member regions."""

    members: tuple[Region, ...]

    def __init__(self, members: Iterable[Region]):
        ms = tuple(members)
        if not ms:
            raise InvalidInputError("union needs at least one member")
        object.__setattr__(self, "members", ms)

    def contains(self, s: State) -> bool:
        return any(m.contains(s) for m in self.members)

    def depth(self, s: State, space: StateSpace) -> float:
        return max(m.depth(s, space) for m in self.members)

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        out = np.zeros(len(pts), dtype=bool)
        for m in self.members:
            out |= m.contains_many(pts)
        return out

    def depth_many(self, pts: np.ndarray, space: StateSpace) -> np.ndarray:
        return np.maximum.reduce([m.depth_many(pts, space) for m in self.members])


@dataclass(frozen=True, init=False)
class Cover:
    """One region per basic mode; the union must be the whole state space."""

    space: StateSpace
    entries: tuple[tuple[str, Region], ...]

    def __init__(self, space: StateSpace, entries: Mapping[str, Region]):
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "entries", tuple(sorted(entries.items())))

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.entries)

    def region(self, vertex: str) -> Region:
        for v, r in self.entries:
            if v == vertex:
                return r
        raise InvalidInputError(f"no cover region for vertex {vertex!r}")


def _boxes_intersect(boxes: Sequence[Box]) -> bool:
    for axis in range(len(boxes[0].intervals)):
        lo = max(b.intervals[axis][0] for b in boxes)
        hi = min(b.intervals[axis][1] for b in boxes)
        if lo > hi:
            return False
    return True


def _halfplanes_feasible(regions: Sequence[Region], space: StateSpace) -> bool:
    """Exact feasibility of an intersection of boxes/half-planes via LP."""
    a_ub, b_ub = [], []
    bounds = [(lo, hi) for _, lo, hi in space.dims]
    for r in regions:
        if isinstance(r, Box):
            for axis, (a, b) in enumerate(r.intervals):
                lo, hi = bounds[axis]
                bounds[axis] = (max(lo, a), min(hi, b))
        elif isinstance(r, HalfPlane):
            a_ub.append(list(r.normal))
            b_ub.append(r.offset)
        else:
            raise InvalidInputError("exact test only for boxes/half-planes")
    if any(lo > hi for lo, hi in bounds):
        return False
    if not a_ub:
        return True
    res = linprog(
        c=[0.0] * space.n,
        A_ub=np.array(a_ub),
        b_ub=np.array(b_ub),
        bounds=bounds,
        method="highs",
    )
    return res.status == 0


def nerve(cover: Cover, resolution: int = 256) -> AbstractComplex:
    """The complex of vertex subsets whose regions intersect.

    Exact for boxes and half-planes; polygon and union regions fall back to
    grid sampling at ``resolution`` points per axis.  A sampled region that
    hits no grid point at all is reported as a resolution error.
    """
    entries = cover.entries
    exact = all(isinstance(r, (Box, HalfPlane)) for _, r in entries)
    masks: dict[str, np.ndarray] = {}
    if not exact:
        pts = cover.space.grid(resolution)
        for v, r in entries:
            masks[v] = r.contains_many(pts)
            if not masks[v].any():
                raise ResolutionError(
                    f"region {{{v}}} hits no grid point at resolution {resolution}"
                )
    faces: list[tuple[str, ...]] = []
    names = [v for v, _ in entries]
    for k in range(1, len(names) + 1):
        for combo in itertools.combinations(range(len(names)), k):
            # downward closure lets us skip supersets of empty intersections,
            # but the sets here are tiny; test every subset directly
            regions = [entries[i][1] for i in combo]
            if exact:
                if all(isinstance(r, Box) for r in regions):
                    hit = _boxes_intersect(regions)
                else:
                    hit = _halfplanes_feasible(regions, cover.space)
            else:
                m = np.logical_and.reduce([masks[names[i]] for i in combo])
                hit = bool(m.any())
            if hit:
                faces.append(tuple(names[i] for i in combo))
    return close_downward(faces)


def localise(cover: Cover, face: Face, resolution: int = 256) -> Region:
    """The intersection region of a face's cover sets."""
    if not nerve(cover, resolution).is_face(face.vertices):
        raise InvalidInputError(f"{face} is not a face of the nerve")
    regions = [cover.region(v) for v in face]
    if all(isinstance(r, Box) for r in regions):
        intervals = []
        for axis in range(cover.space.n):
            lo = max(r.intervals[axis][0] for r in regions)
            hi = min(r.intervals[axis][1] for r in regions)
            intervals.append((lo, hi))
        return Box(intervals)
    if cover.space.n == 2:
        shapes = []
        for r in regions:
            shapes.append(_to_shapely(r, cover.space))
        inter = shapes[0]
        for s in shapes[1:]:
            inter = inter.intersection(s)
        return PolygonRegion(list(inter.exterior.coords)[:-1])
    raise InvalidInputError("localise supports boxes, or any regions in 2D")


def _to_shapely(region: Region, space: StateSpace):
    if isinstance(region, PolygonRegion):
        return region.shapely
    if isinstance(region, Box):
        (xlo, xhi), (ylo, yhi) = region.intervals
        return shapely_box(xlo, ylo, xhi, yhi)
    if isinstance(region, HalfPlane):
        (_, x0, x1), (_, y0, y1) = space.dims
        frame = shapely_box(x0, y0, x1, y1)
        return frame.intersection(_halfplane_poly(region, space))
    if isinstance(region, UnionRegion):
        parts = [_to_shapely(m, space) for m in region.members]
        out = parts[0]
        for p in parts[1:]:
            out = out.union(p)
        return out
    raise InvalidInputError(f"cannot convert {type(region).__name__}")


def _halfplane_poly(region: HalfPlane, space: StateSpace) -> ShapelyPolygon:
    (_, x0, x1), (_, y0, y1) = space.dims
    span = max(x1 - x0, y1 - y0) * 4.0
    nx, ny = region.normal
    norm = float(np.hypot(nx, ny))
    nx, ny = nx / norm, ny / norm
    c = region.offset / norm
    # point on the boundary line, tangent direction (-ny, nx)
    px, py = nx * c, ny * c
    tx, ty = -ny, nx
    p1 = (px - tx * span, py - ty * span)
    p2 = (px + tx * span, py + ty * span)
    p3 = (p2[0] - nx * span, p2[1] - ny * span)
    p4 = (p1[0] - nx * span, p1[1] - ny * span)
    return ShapelyPolygon([p1, p2, p3, p4])


@dataclass(frozen=True)
class PartitionOfUnity:
    """Normalised linear-ramp weights over a cover."""

    cover: Cover
    margin: float
    complex: AbstractComplex

    def weights(self, s: State) -> dict[str, float]:
        if not self.cover.space.contains(s):
            raise OutOfDomainError(f"state {tuple(s)} outside the state space")
        bumps = {
            v: min(r.depth(s, self.cover.space) / self.margin, 1.0)
            for v, r in self.cover.entries
        }
        total = sum(bumps.values())
        if total <= 0.0:
            raise CoverageGapError(
                f"all bumps vanish at {tuple(s)}", witness=tuple(s)
            )
        return {v: b / total for v, b in bumps.items()}

    def weights_many(self, pts: np.ndarray) -> np.ndarray:
        """Vectorised weights, one row per point, columns in vertex order."""
        bumps = np.stack(
            [
                np.minimum(r.depth_many(pts, self.cover.space) / self.margin, 1.0)
                for _, r in self.cover.entries
            ],
            axis=-1,
        )
        totals = bumps.sum(axis=-1)
        if (totals <= 0.0).any():
            i = int(np.argmin(totals))
            raise CoverageGapError(
                f"all bumps vanish at {tuple(pts[i])}", witness=tuple(pts[i])
            )
        return bumps / totals[:, None]


def build_pou(
    cover: Cover,
    margin: float | None = None,
    check_resolution: int = 64,
) -> PartitionOfUnity:
    """Build the linear-ramp partition of unity for a cover.

    ``margin`` defaults to 5% of the shortest state-space axis.  A sampled
    coverage check runs at construction and reports a witness state if the
    cover has a gap.
    """
    if margin is None:
        margin = 0.05 * min(hi - lo for _, lo, hi in cover.space.dims)
    if margin <= 0.0:
        raise InvalidInputError("margin must be positive")
    pou = PartitionOfUnity(cover=cover, margin=margin, complex=nerve(cover))
    pts = cover.space.grid(check_resolution)
    pou.weights_many(pts)  # raises CoverageGapError with a witness on a gap
    return pou


def evaluate(pou: PartitionOfUnity, s: State) -> SimplexPoint:
    """The state classified as a point of the nerve's realisation."""
    weights = pou.weights(s)
    support = sorted(v for v, w in weights.items() if w > 0.0)
    return SimplexPoint(Face(support), {v: weights[v] for v in support})
