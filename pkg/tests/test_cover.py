import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modesim.cover import (
    Box,
    Cover,
    HalfPlane,
    PolygonRegion,
    StateSpace,
    UnionRegion,
    build_pou,
    evaluate,
    localise,
    nerve,
)
from modesim.errors import (
    CoverageGapError,
    InvalidInputError,
    OutOfDomainError,
)
from modesim.scenarios.offender import offender_cover
from modesim.simplicial import Face

UNIT_SQUARE = StateSpace([("x", 0.0, 1.0), ("y", 0.0, 1.0)])
UNIT_LINE = StateSpace([("x", 0.0, 1.0)])


def four_set_cover() -> Cover:
    """Four overlapping boxes whose nerve has one 2-face and a pendant edge."""
    return Cover(
        UNIT_SQUARE,
        {
            "alpha": Box([(0.0, 0.6), (0.5, 1.0)]),
            "beta": Box([(0.4, 1.0), (0.5, 1.0)]),
            "gamma": Box([(0.0, 1.0), (0.25, 0.6)]),
            "delta": Box([(0.0, 1.0), (0.0, 0.3)]),
        },
    )


class TestStateSpace:
    def test_bad_bounds_rejected(self):
        with pytest.raises(InvalidInputError):
            StateSpace([("x", 1.0, 0.0)])

    def test_dimension_caps(self):
        with pytest.raises(InvalidInputError):
            StateSpace([(f"d{i}", 0.0, 1.0) for i in range(9)])

    def test_grid_shape(self):
        assert UNIT_SQUARE.grid(8).shape == (64, 2)


class TestNerve:
    def test_four_set_cover_structure(self):
        n = nerve(four_set_cover())
        got = {f.vertices for f in n.faces}
        assert got == {
            ("alpha",), ("beta",), ("gamma",), ("delta",),
            ("alpha", "beta"), ("alpha", "gamma"), ("beta", "gamma"),
            ("delta", "gamma"), ("alpha", "beta", "gamma"),
        }

    def test_single_region(self):
        c = Cover(UNIT_LINE, {"only": Box([(0.0, 1.0)])})
        n = nerve(c)
        assert len(n.faces) == 1

    def test_disjoint_boxes_have_no_edge(self):
        c = Cover(UNIT_LINE, {"lo": Box([(0.0, 0.4)]), "hi": Box([(0.6, 1.0)])})
        n = nerve(c)
        assert {f.vertices for f in n.faces} == {("lo",), ("hi",)}

    def test_halfplane_nerve_is_exact(self):
        c = Cover(
            UNIT_SQUARE,
            {
                "low": HalfPlane((1.0, 1.0), 1.0),   # x + y <= 1
                "high": HalfPlane((-1.0, -1.0), -1.0),  # x + y >= 1
            },
        )
        n = nerve(c)
        assert n.is_face(("high", "low"))

    def test_polygon_nerve_by_sampling(self):
        c = Cover(
            UNIT_SQUARE,
            {
                "left": PolygonRegion([(0, 0), (0.6, 0), (0.6, 1), (0, 1)]),
                "right": PolygonRegion([(0.4, 0), (1, 0), (1, 1), (0.4, 1)]),
            },
        )
        n = nerve(c, resolution=64)
        assert n.is_face(("left", "right"))


class TestLocalise:
    def test_single_vertex_is_its_region(self):
        cover = four_set_cover()
        assert localise(cover, Face(["alpha"])) == cover.region("alpha")

    def test_two_overlapping_boxes(self):
        c = Cover(
            UNIT_SQUARE,
            {
                "a": Box([(0.0, 1.0), (0.0, 1.0)]),
                "b": Box([(0.5, 1.5), (0.0, 1.0)]),
            },
        )
        got = localise(c, Face(["a", "b"]))
        assert got == Box([(0.5, 1.0), (0.0, 1.0)])

    def test_offender_problem_corner(self):
        got = localise(offender_cover(), Face(["alcProb", "tagProb"]))
        assert got == Box([(0.25, 1.0), (0.25, 1.0)])

    def test_non_face_rejected(self):
        c = Cover(UNIT_LINE, {"lo": Box([(0.0, 0.4)]), "hi": Box([(0.6, 1.0)])})
        with pytest.raises(InvalidInputError):
            localise(c, Face(["lo", "hi"]))


class TestBuildPou:
    def test_single_region_is_identically_one(self):
        c = Cover(UNIT_LINE, {"only": Box([(0.0, 1.0)])})
        pou = build_pou(c)
        for x in (0.0, 0.25, 0.5, 1.0):
            assert pou.weights((x,)) == {"only": 1.0}

    def test_two_interval_crossfade(self):
        c = Cover(UNIT_LINE, {"a": Box([(0.0, 0.6)]), "b": Box([(0.4, 1.0)])})
        pou = build_pou(c, margin=0.05)
        assert pou.weights((0.2,)) == pytest.approx({"a": 1.0, "b": 0.0})
        assert pou.weights((0.8,)) == pytest.approx({"a": 0.0, "b": 1.0})
        mid = pou.weights((0.5,))
        assert mid["a"] == pytest.approx(0.5)
        assert mid["b"] == pytest.approx(0.5)
        # linear ramp inside b's boundary margin
        w = pou.weights((0.425,))
        assert w["b"] == pytest.approx(0.5 / 1.5)
        w = pou.weights((0.575,))
        assert w["a"] == pytest.approx(0.5 / 1.5)

    def test_offender_origin_is_all_ok(self):
        pou = build_pou(offender_cover())
        assert pou.weights((0.0, 0.0)) == pytest.approx(
            {"OK": 1.0, "alcProb": 0.0, "tagProb": 0.0}
        )

    def test_gap_is_reported_with_witness(self):
        c = Cover(UNIT_LINE, {"lo": Box([(0.0, 0.4)]), "hi": Box([(0.6, 1.0)])})
        with pytest.raises(CoverageGapError) as exc:
            build_pou(c)
        assert exc.value.witness is not None

    def test_bad_margin_rejected(self):
        c = Cover(UNIT_LINE, {"only": Box([(0.0, 1.0)])})
        with pytest.raises(InvalidInputError):
            build_pou(c, margin=0.0)


class TestEvaluate:
    def test_single_region_vertex_point(self):
        c = Cover(UNIT_LINE, {"only": Box([(0.0, 1.0)])})
        pou = build_pou(c)
        p = evaluate(pou, (0.3,))
        assert p.weights == {"only": 1.0}

    def test_crossfade_midpoint_is_edge_midpoint(self):
        c = Cover(UNIT_LINE, {"a": Box([(0.0, 0.6)]), "b": Box([(0.4, 1.0)])})
        pou = build_pou(c, margin=0.05)
        p = evaluate(pou, (0.5,))
        assert p.carrier == Face(["a", "b"])
        assert p.weight("a") == pytest.approx(0.5)

    def test_offender_alcohol_corner(self):
        pou = build_pou(offender_cover())
        p = evaluate(pou, (0.95, 0.05))
        assert p.weights == {"alcProb": 1.0}

    def test_outside_space_rejected(self):
        pou = build_pou(offender_cover())
        with pytest.raises(OutOfDomainError):
            evaluate(pou, (1.5, 0.5))

    def test_support_is_always_a_nerve_face(self):
        pou = build_pou(offender_cover())
        for s in pou.cover.space.grid(21):
            p = evaluate(pou, s)
            assert pou.complex.is_face(p.carrier.vertices)


class TestPouInvariants:
    def test_sums_and_support_on_grid(self):
        pou = build_pou(offender_cover())
        pts = pou.cover.space.grid(100)
        w = pou.weights_many(pts)
        assert np.all(np.abs(w.sum(axis=1) - 1.0) <= 1e-9)
        for j, (v, region) in enumerate(pou.cover.entries):
            inside = region.contains_many(pts)
            assert not np.any((w[:, j] > 0.0) & ~inside)

    def test_lipschitz_bound(self):
        pou = build_pou(offender_cover())
        res = 201
        pts = pou.cover.space.grid(res)
        w = pou.weights_many(pts).reshape(res, res, -1)
        h = 1.0 / (res - 1)
        bound = (2.0 / pou.margin) * h + 1e-9
        assert np.max(np.abs(np.diff(w, axis=0))) <= bound
        assert np.max(np.abs(np.diff(w, axis=1))) <= bound


class TestUnionRegion:
    def test_contains_and_depth(self):
        u = UnionRegion([Box([(0.0, 0.4)]), Box([(0.6, 1.0)])])
        assert u.contains((0.2,))
        assert not u.contains((0.5,))
        assert u.depth((0.2,), UNIT_LINE) == pytest.approx(0.2)


@given(
    st.floats(0.0, 1.0, allow_nan=False),
    st.floats(0.0, 1.0, allow_nan=False),
)
@settings(max_examples=150, deadline=None)
def test_offender_pou_pointwise(x, y):
    pou = build_pou(offender_cover())
    w = pou.weights((x, y))
    assert sum(w.values()) == pytest.approx(1.0, abs=1e-9)
    for v, value in w.items():
        if value > 0.0:
            assert pou.cover.region(v).contains((x, y))
