"""Command line front end: validate, run, render, explain, gen-trace.

Exit codes: 0 success, 1 domain/validation failure, 2 usage or IO failure.
All randomness flows from the --seed flag (default 0); outputs are
deterministic and written only to the requested path.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import dsl
from .engine import (
    OracleReading,
    Scenario,
    explain as engine_explain,
    run as engine_run,
    trajectory_from_json,
    trajectory_to_json,
)
from .errors import ModesimError
from .loader import compile_scenario, load_scenario_file
from .render import render_complex, render_trajectory
from .simplicial import layout as make_layout

USAGE_ERROR = 2
DOMAIN_ERROR = 1

_BUILTIN_SCENARIOS = ("offender", "judicial", "trigger")


def _fixture_path(name: str) -> Optional[Path]:
    ref = resources.files("modesim").joinpath("fixtures", f"{name}.mode")
    with resources.as_file(ref) as p:
        return Path(p) if p.exists() else None


def _resolve_scenario_path(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    if arg in _BUILTIN_SCENARIOS:
        fp = _fixture_path(arg)
        if fp is not None:
            return fp
    raise FileNotFoundError(f"no such scenario file or built-in: {arg}")


def _load_scenario(arg: str) -> Scenario:
    scenario, _ = load_scenario_file(_resolve_scenario_path(arg))
    return scenario


def load_trace(path) -> list[OracleReading]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        OracleReading(
            channel=r["channel"],
            time=float(r["t"]),
            value=tuple(float(x) for x in r["value"]),
            reliability=(
                float(r["reliability"]) if r.get("reliability") is not None else None
            ),
        )
        for r in data
    ]


def dump_trace(readings: Sequence[OracleReading]) -> str:
    out = []
    for r in readings:
        item = {
            "channel": r.channel,
            "t": float(f"{r.time:.12g}"),
            "value": [float(f"{x:.12g}") for x in r.value],
        }
        if r.reliability is not None:
            item["reliability"] = float(f"{r.reliability:.12g}")
        out.append(item)
    return json.dumps(out, indent=2) + "\n"


def _write(out: Optional[str], text: str) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------


def _cmd_validate(args) -> int:
    try:
        path = _resolve_scenario_path(args.scenario)
        text = path.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if str(path).endswith(".json"):
        doc, diags = dsl.from_json(text)
    else:
        doc, diags = dsl.parse(text)
    warnings = list(dsl.lint(doc)) if doc is not None else []
    for d in diags + warnings:
        print(str(d), file=sys.stderr)
    if doc is None:
        return DOMAIN_ERROR
    if args.strict and warnings:
        return DOMAIN_ERROR
    print(f"{path.name}: ok ({len(warnings)} warning(s))")
    return 0


def _cmd_run(args) -> int:
    scenario = _load_scenario(args.scenario)
    trace = load_trace(args.trace) if args.trace else []
    trajectory = engine_run(scenario, trace)
    text = trajectory_to_json(trajectory)
    _write(args.out, text)
    transitions = len(trajectory.events("transition"))
    interventions = len(trajectory.events("intervene"))
    warns = len(trajectory.events("warn"))
    print(
        f"samples={len(trajectory)} transitions={transitions} "
        f"interventions={interventions} warnings={warns}"
    )
    return 0


def _cmd_render(args) -> int:
    scenario = _load_scenario(args.scenario)
    layout = make_layout(scenario.complex, dict(scenario.layout_hints))
    if args.trace:
        trajectory = trajectory_from_json(
            Path(args.trace).read_text(encoding="utf-8")
        )
        svg = render_trajectory(
            scenario.complex, layout, trajectory, scenario.thresholds
        )
    else:
        svg = render_complex(scenario.complex, layout)
    _write(args.out, svg)
    return 0


def _cmd_explain(args) -> int:
    scenario = _load_scenario(args.scenario)
    if not args.trace:
        print("error: explain needs --trace (a trajectory file)", file=sys.stderr)
        return USAGE_ERROR
    trajectory = trajectory_from_json(Path(args.trace).read_text(encoding="utf-8"))
    record = engine_explain(scenario, trajectory, args.time)
    lines = [
        f"t={record.time:g} mode={record.mode}",
        f"point={record.point}",
    ]
    for name, m in record.margins:
        state = "active" if m <= 0 else f"margin {m:g}"
        lines.append(f"zone {name}: {state}")
    if record.next_likely:
        lines.append(f"next likely: {record.next_likely}")
    text = "\n".join(lines) + "\n"
    _write(args.out, text)
    return 0


def _scripted_trace(scenario: Scenario) -> list[OracleReading]:
    if scenario.name == "offender":
        path = [
            (0.2, 0.2), (0.35, 0.3), (0.5, 0.45), (0.65, 0.65),
            (0.8, 0.8), (0.9, 0.9),
        ]
        out = []
        for i, (a, b) in enumerate(path, start=1):
            t = i / len(path)
            out.append(OracleReading("alc", t, (a,)))
            out.append(OracleReading("tag", t, (b,)))
        return out
    if scenario.name == "judicial":
        gs = [0.2, 0.3, 0.45, 0.6, 0.55, 0.45, 0.35, 0.2, 0.15, 0.1]
        return [
            OracleReading("behaviour", (i + 1) / (len(gs) + 1), (g,))
            for i, g in enumerate(gs)
        ]
    raise ModesimError(f"no built-in script for scenario {scenario.name!r}")


def _cmd_gen_trace(args) -> int:
    scenario = _load_scenario(args.scenario)
    steps = args.steps
    bounds = {name: (lo, hi) for name, lo, hi in scenario.space.dims}
    channels = [
        (c, d) for c, d in scenario.channels if d != scenario.time_dim
    ]
    readings: list[OracleReading] = []
    if args.generator == "ramp":
        for k in range(1, steps + 1):
            t = k / steps
            for c, d in channels:
                lo, hi = bounds[d]
                readings.append(OracleReading(c, t, (lo + (hi - lo) * k / steps,)))
    elif args.generator == "random-walk":
        rng = random.Random(args.seed)
        current = {c: (bounds[d][0] + bounds[d][1]) / 2 for c, d in channels}
        for k in range(1, steps + 1):
            t = k / steps
            for c, d in channels:
                lo, hi = bounds[d]
                step = rng.uniform(-0.05, 0.05) * (hi - lo)
                current[c] = min(max(current[c] + step, lo), hi)
                readings.append(OracleReading(c, t, (current[c],)))
    else:  # scripted
        readings = _scripted_trace(scenario)
    _write(args.out, dump_trace(readings))
    return 0


# -- entry point ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modesim",
        description="Mode-based monitoring over simplicial complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trace_help="trace or trajectory file"):
        p.add_argument("--scenario", required=True,
                       help="scenario file or built-in name")
        p.add_argument("--trace", help=trace_help)
        p.add_argument("--out", help="output path (default: standard output)")
        p.add_argument("--format", choices=("json", "svg"), default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--busy", action="store_true",
                       help="use the busy-day triage threshold")
        p.add_argument("--strict", action="store_true",
                       help="treat warnings as failures")

    p = sub.add_parser("validate", help="check a scenario file")
    common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("run", help="replay a trace and write the trajectory")
    common(p, "oracle readings JSON file")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("render", help="draw the complex or a trajectory")
    common(p, "trajectory JSON file to overlay")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("explain", help="zone margins at a trajectory time")
    common(p, "trajectory JSON file")
    p.add_argument("--time", type=float, default=float("inf"),
                   help="explain the last sample at or before this time")
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("gen-trace", help="generate a synthetic oracle trace")
    common(p)
    p.add_argument("--generator", choices=("random-walk", "ramp", "scripted"),
                   default="ramp")
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(func=_cmd_gen_trace)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ModesimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
