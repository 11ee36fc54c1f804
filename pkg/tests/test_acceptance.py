"""Acceptance gate: every release criterion, one printed pass/fail line each."""

import itertools
import json
import random
import time

import numpy as np
import pytest

from modesim.belief import (
    MassFunction,
    StatementSet,
    confidence_band,
    from_mass,
    plausibility,
    validate,
    visualise,
)
from modesim.cli import main as cli_main
from modesim.cover import Box, Cover, StateSpace, build_pou, nerve
from modesim.render import render_belief_points
from modesim.scenarios.judicial import JudicialParams, fold_mode, judicial_phi
from modesim.scenarios.offender import (
    offender_cover,
    offender_interventions,
    offender_phi,
)
from modesim.scenarios.triage import load_tree_file, triage_decide
from modesim.simplicial import Face, close_downward, in_face

from conftest import FIXTURES


def _report(capsys, number, description, check):
    try:
        check()
    except BaseException:
        with capsys.disabled():
            print(f"[FAIL] criterion {number}: {description}")
        raise
    with capsys.disabled():
        print(f"[PASS] criterion {number}: {description}")


def _random_mass_population(count=1000, seed=20240817):
    rng = random.Random(seed)
    population = []
    for _ in range(count):
        n = rng.choice((2, 3, 4))
        ss = StatementSet("abcd"[:n])
        size = (1 << n) - 1
        raw = [rng.random() for _ in range(size)]
        scale = rng.uniform(0.3, 1.0) / sum(raw)
        population.append(
            MassFunction(ss, {k + 1: x * scale for k, x in enumerate(raw)})
        )
    return population


def test_criterion_1_belief_soundness(capsys):
    def check():
        start = time.perf_counter()
        for m in _random_mass_population():
            assert validate(from_mass(m)) == []
        assert time.perf_counter() - start < 5.0

    _report(capsys, 1, "1000 random mass functions all pass exhaustive "
            "super-additivity validation in < 5 s", check)


def test_criterion_2_plausibility_duality(capsys):
    def check():
        for m in _random_mass_population():
            bel = from_mass(m)
            ss = bel.over
            n = 1 << len(ss)
            pla = [plausibility(bel, ss.subset_of(k)) for k in range(n)]
            for y in range(n):
                assert bel.at_mask(y) <= pla[y] + 1e-9
                for z in range(y, n):
                    assert pla[y | z] + pla[y & z] <= pla[y] + pla[z] + 1e-9

    _report(capsys, 2, "belief <= plausibility and plausibility "
            "sub-additivity hold exhaustively over the same population", check)


def _integer_masses(parts, total):
    if parts == 1:
        for k in range(total + 1):
            yield (k,)
        return
    for k in range(total + 1):
        for rest in _integer_masses(parts - 1, total - k):
            yield (k,) + rest


def test_criterion_3_face_theorem_exhaustive(capsys):
    def check():
        start = time.perf_counter()
        checked = 0
        for n in range(1, 5):
            ss = StatementSet("abcd"[:n])
            size = (1 << n) - 1
            full = ss.full_mask
            seen = set()
            for denom in (6, 5, 4):
                for masses in _integer_masses(size, denom):
                    total = sum(masses)
                    if total == 0:
                        continue
                    key = tuple(m / denom for m in masses)
                    if key in seen:
                        continue
                    seen.add(key)
                    # integer zeta transform: exact belief values
                    bel_int = [0] * (1 << n)
                    for mask in range(1, 1 << n):
                        bel_int[mask] = masses[mask - 1]
                    for i in range(n):
                        bit = 1 << i
                        for mask in range(1 << n):
                            if mask & bit:
                                bel_int[mask] += bel_int[mask ^ bit]
                    vis = visualise(
                        from_mass(MassFunction(ss, {
                            k + 1: m / denom for k, m in enumerate(masses)
                        }))
                    )
                    for y in range(1, full + 1):
                        algebraic = bel_int[y] == bel_int[full]
                        geometric = in_face(
                            vis.position, Face(ss.subset_of(y)), 1e-9
                        )
                        assert algebraic == geometric, (n, denom, masses, y)
                    checked += 1
        assert checked > 50000
        assert time.perf_counter() - start < 60.0

    _report(capsys, 3, "face theorem holds in both directions for every "
            "rational mass function (denominator <= 6, up to 4 statements) "
            "in < 60 s", check)


def test_criterion_4_confidence_figure(capsys):
    def check():
        ss = StatementSet("abc")
        named = {
            "x": {("c",): 0.95},
            "w": {("b",): 0.3, ("c",): 0.3, ("b", "c"): 0.35},
            "y": {("a",): 0.02, ("b",): 0.4, ("c",): 0.4, ("b", "c"): 0.13},
            "z": {("a",): 0.2, ("b",): 0.2, ("c",): 0.2, ("a", "b", "c"): 0.25},
            "u": {("a",): 0.15, ("b",): 0.15, ("c",): 0.15, ("a", "b", "c"): 0.2},
        }
        points = [
            (label, visualise(from_mass(MassFunction.from_named(ss, spec))))
            for label, spec in named.items()
        ]
        bands = [confidence_band(vis.confidence) for _, vis in points]
        assert bands == ["green", "green", "green", "orange", "red"]
        # described positions
        by_label = dict(points)
        assert by_label["x"].position.weights == {"c": 1.0}
        assert in_face(by_label["w"].position, Face(["b", "c"]), 1e-9)
        assert by_label["y"].position.weight("a") <= 0.03
        assert all(w > 0.05 for w in by_label["z"].position.weights.values())
        complex = close_downward([["a", "b", "c"]])
        hints = {"a": (0.0, 0.0), "b": (1.0, 0.0), "c": (0.5, 1.0)}
        svg = render_belief_points(complex, hints, points)
        for label, pct in (("x", "95%"), ("w", "95%"), ("y", "95%"),
                           ("z", "85%"), ("u", "65%")):
            assert f"{label} {pct}" in svg

    _report(capsys, 4, "the five reference belief points render with bands "
            "green/green/green/orange/red and labels 95/95/95/85/65 percent",
            check)


def test_criterion_5_partition_of_unity_contract(capsys):
    def check():
        pou = build_pou(offender_cover())
        pts = pou.cover.space.grid(512)
        weights = pou.weights_many(pts)
        assert np.max(np.abs(weights.sum(axis=1) - 1.0)) <= 1e-9
        for j, (_, region) in enumerate(pou.cover.entries):
            inside = region.contains_many(pts)
            assert int(np.sum((weights[:, j] > 0.0) & ~inside)) == 0

    _report(capsys, 5, "partition of unity sums to 1 within 1e-9 and is "
            "supported inside its regions on a 512x512 grid", check)


def test_criterion_6_offender_point_checks(capsys):
    def check():
        assert offender_interventions(0.9, 0.1) == ["counsellor"]
        assert offender_interventions(0.1, 0.9) == ["probation-officer"]
        assert offender_interventions(0.9, 0.9) == ["police"]
        assert offender_interventions(0.2, 0.2) == []
        for (x, y), vertex in (((0, 0), "OK"), ((1, 0), "alcProb"),
                               ((0, 1), "tagProb")):
            p = offender_phi(x, y)
            assert abs(p.weight(vertex) - 1.0) <= 1e-9

    _report(capsys, 6, "offender interventions and corner images match the "
            "reference points to 1e-9", check)


def test_criterion_7_triage_thresholds(capsys):
    def check():
        tree = load_tree_file(FIXTURES / "triage_tree.json")
        assert len(tree.nodes) == 12
        for node in tree.nodes:
            assert abs(sum(node.scores) - 1.0) <= 1e-9
        point = tree.node("n9").point
        assert point.weight("admit") == pytest.approx(0.85)
        assert triage_decide(point, busy=False) == "admit"
        assert triage_decide(point, busy=True) == "continue"

    _report(capsys, 7, "admit weight 0.85 admits on a quiet day and "
            "continues on a busy day over the bundled 12-node tree", check)


def test_criterion_8_judicial_hysteresis(capsys):
    def check():
        params = JudicialParams()
        # 100-step oscillation strictly inside (a, b): zero transitions
        mode = Face(["Jail"])
        rng = random.Random(3)
        for _ in range(100):
            g = rng.uniform(params.a + 0.01, params.b - 0.01)
            new = fold_mode(params, mode, g)
            assert new == mode
        # crossing b then falling below a: Jail -> Probation -> Jail
        path = [0.1, 0.3, 0.45, 0.55, 0.6, 0.4, 0.3, 0.2]
        modes = []
        mode = Face(["Jail"])
        for g in path:
            mode = fold_mode(params, mode, g)
            modes.append(mode.vertices[0])
        distinct = [m for m, _ in itertools.groupby(modes)]
        assert distinct == ["Jail", "Probation", "Jail"]
        # boundary labels of the probation domain
        probation = Face(["Probation"])
        for corner, vertex in (("g", "Jail"), ("f", "Jail"), ("e", "Release"),
                               ("c", "Release"), ("b", "Release"),
                               ("a", "Probation")):
            t, g = params.points[corner]
            assert judicial_phi(params, probation, t, g).weights == {vertex: 1.0}

    _report(capsys, 8, "hysteresis: oscillation inside the overlap gives 0 "
            "transitions, the crossing path gives Jail-Probation-Jail, and "
            "the boundary labels are exact", check)


def test_criterion_9_determinism_and_round_trips(capsys, tmp_path):
    def check():
        from modesim import dsl

        for name in ("offender", "judicial", "trigger"):
            source = (FIXTURES / f"{name}.mode").read_text()
            doc, diags = dsl.parse(source)
            assert doc is not None, [str(d) for d in diags]
            twin = dsl.to_json(doc)
            doc2, _ = dsl.from_json(twin)
            assert dsl.to_obj(doc2) == dsl.to_obj(doc)
            assert dsl.to_json(doc2) == twin
        runs = [
            ("offender", FIXTURES / "offender_cross.json"),
            ("offender", FIXTURES / "offender_return.json"),
            ("judicial", FIXTURES / "judicial_oscillation.json"),
            ("trigger", None),
        ]
        for i, (scenario, trace) in enumerate(runs):
            blobs = []
            for attempt in range(2):
                out = tmp_path / f"run{i}-{attempt}.json"
                argv = ["run", "--scenario", scenario, "--out", str(out)]
                if trace is not None:
                    argv += ["--trace", str(trace)]
                assert cli_main(argv) == 0
                blobs.append(out.read_bytes())
            assert blobs[0] == blobs[1]
            json.loads(blobs[0])  # well-formed machine artifact

    _report(capsys, 9, "every bundled fixture runs byte-identically twice "
            "and round-trips between the text and JSON forms", check)


def test_criterion_10_closure_and_nerve(capsys):
    def check():
        tetra = close_downward([["fire", "police", "ambulance", "coastguard"]])
        assert len(tetra.faces) == 15
        cover = Cover(
            StateSpace([("x", 0.0, 1.0), ("y", 0.0, 1.0)]),
            {
                "alpha": Box([(0.0, 0.6), (0.5, 1.0)]),
                "beta": Box([(0.4, 1.0), (0.5, 1.0)]),
                "gamma": Box([(0.0, 1.0), (0.25, 0.6)]),
                "delta": Box([(0.0, 1.0), (0.0, 0.3)]),
            },
        )
        n = nerve(cover)
        assert n.is_face(("alpha", "beta", "gamma"))
        assert n.is_face(("gamma", "delta"))
        assert not n.is_face(("beta", "delta"))

    _report(capsys, 10, "tetrahedron closure has 15 faces and the four-set "
            "cover nerve contains the expected 2-face and pendant edge", check)
