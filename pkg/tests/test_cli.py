import json

import pytest

from modesim.cli import main


def run_cli(*argv):
    return main(list(argv))


class TestValidate:
    def test_valid_fixture(self, fixtures, capsys):
        assert run_cli("validate", "--scenario", str(fixtures / "offender.mode")) == 0
        assert "ok" in capsys.readouterr().out

    def test_builtin_name(self):
        assert run_cli("validate", "--scenario", "offender") == 0

    def test_invalid_fixture(self, fixtures, capsys):
        code = run_cli(
            "validate", "--scenario", str(fixtures / "bad_zone_target.mode")
        )
        assert code == 1
        err = capsys.readouterr().err
        assert err.count("error:") == 1

    def test_missing_file(self):
        assert run_cli("validate", "--scenario", "/no/such/file.mode") == 2

    def test_strict_fails_on_warnings(self, fixtures):
        path = str(fixtures / "orphan_vertex.mode")
        assert run_cli("validate", "--scenario", path) == 0
        assert run_cli("validate", "--scenario", path, "--strict") == 1


class TestRun:
    def test_offender_cross_summary(self, fixtures, tmp_path, capsys):
        out = tmp_path / "traj.json"
        code = run_cli(
            "run",
            "--scenario", "offender",
            "--trace", str(fixtures / "offender_cross.json"),
            "--out", str(out),
        )
        assert code == 0
        assert "interventions=1 warnings=1" in capsys.readouterr().out
        data = json.loads(out.read_text())
        names = [e["name"] for s in data for e in s["events"]]
        assert names == ["warning", "police"]

    def test_empty_trace_single_sample(self, tmp_path):
        out = tmp_path / "traj.json"
        assert run_cli("run", "--scenario", "trigger", "--out", str(out)) == 0
        assert len(json.loads(out.read_text())) == 1

    def test_judicial_oscillation_zero_transitions(self, fixtures, tmp_path, capsys):
        out = tmp_path / "traj.json"
        code = run_cli(
            "run",
            "--scenario", "judicial",
            "--trace", str(fixtures / "judicial_oscillation.json"),
            "--out", str(out),
        )
        assert code == 0
        assert "transitions=0" in capsys.readouterr().out

    def test_byte_determinism(self, fixtures, tmp_path):
        outs = []
        for i in range(2):
            out = tmp_path / f"t{i}.json"
            run_cli(
                "run",
                "--scenario", "offender",
                "--trace", str(fixtures / "offender_cross.json"),
                "--out", str(out),
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestRender:
    def test_complex_svg(self, tmp_path):
        out = tmp_path / "c.svg"
        assert run_cli("render", "--scenario", "offender", "--out", str(out)) == 0
        assert out.read_text().startswith("<?xml")

    def test_trajectory_svg(self, fixtures, tmp_path):
        traj = tmp_path / "t.json"
        run_cli(
            "run", "--scenario", "offender",
            "--trace", str(fixtures / "offender_cross.json"),
            "--out", str(traj),
        )
        out = tmp_path / "t.svg"
        code = run_cli(
            "render", "--scenario", "offender",
            "--trace", str(traj), "--out", str(out),
        )
        assert code == 0
        assert "<polyline" in out.read_text()


class TestExplain:
    def test_explains_a_sample(self, fixtures, tmp_path, capsys):
        traj = tmp_path / "t.json"
        run_cli(
            "run", "--scenario", "offender",
            "--trace", str(fixtures / "offender_return.json"),
            "--out", str(traj),
        )
        capsys.readouterr()
        code = run_cli(
            "explain", "--scenario", "offender",
            "--trace", str(traj), "--time", "0.2",
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "zone warning: active" in out
        assert "next likely: police" in out

    def test_requires_trace(self):
        assert run_cli("explain", "--scenario", "offender") == 2


class TestGenTrace:
    def test_ramp_is_monotone(self, tmp_path):
        out = tmp_path / "trace.json"
        assert run_cli(
            "gen-trace", "--scenario", "offender",
            "--generator", "ramp", "--steps", "100", "--out", str(out),
        ) == 0
        data = json.loads(out.read_text())
        alc = [r["value"][0] for r in data if r["channel"] == "alc"]
        assert len(alc) == 100
        assert alc == sorted(alc)
        assert alc[-1] == 1.0

    def test_same_seed_identical(self, tmp_path):
        blobs = []
        for i in range(2):
            out = tmp_path / f"w{i}.json"
            run_cli(
                "gen-trace", "--scenario", "offender",
                "--generator", "random-walk", "--seed", "7", "--out", str(out),
            )
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_random_walk_clamped(self, tmp_path):
        out = tmp_path / "w.json"
        run_cli(
            "gen-trace", "--scenario", "offender",
            "--generator", "random-walk", "--steps", "1000",
            "--seed", "1", "--out", str(out),
        )
        data = json.loads(out.read_text())
        assert all(0.0 <= r["value"][0] <= 1.0 for r in data)
        times = [r["t"] for r in data]
        assert times == sorted(times)

    def test_unknown_generator_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run_cli(
                "gen-trace", "--scenario", "offender",
                "--generator", "bogus", "--out", str(tmp_path / "x.json"),
            )
        assert exc.value.code == 2

    def test_scripted_offender_ends_in_police(self, tmp_path, capsys):
        trace = tmp_path / "s.json"
        run_cli(
            "gen-trace", "--scenario", "offender",
            "--generator", "scripted", "--out", str(trace),
        )
        capsys.readouterr()
        run_cli(
            "run", "--scenario", "offender",
            "--trace", str(trace), "--out", str(tmp_path / "t.json"),
        )
        assert "interventions=1" in capsys.readouterr().out
