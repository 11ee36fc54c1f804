"""The scenario language and its canonical JSON twin.

The text form is line oriented: one declaration per line, `mode ... end`
blocks for zones, `#` comments, no indentation significance.  Parsing is
total: it returns a document or positioned diagnostics, never raises.
JSON is the canonical machine form; the text form is sugar over it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from typing import Any, Optional

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    column: int
    message: str
    hint: str = ""

    def __str__(self):
        tail = f" ({self.hint})" if self.hint else ""
        return f"{self.severity}: {self.line}:{self.column}: {self.message}{tail}"


@dataclass
class ZoneDecl:
    name: str
    action: str  # warn | transition | intervene
    argument: str  # message, label, or target face "v1+v2"
    atoms: list[dict] = field(default_factory=list)


@dataclass
class ModeDecl:
    face: list[str]
    objective: str = ""
    channels: list[str] = field(default_factory=list)
    zones: list[ZoneDecl] = field(default_factory=list)


@dataclass
class ScenarioDoc:
    name: str
    vertices: list[str] = field(default_factory=list)
    hints: dict[str, tuple[float, float]] = field(default_factory=dict)
    faces: list[list[str]] = field(default_factory=list)
    dims: list[tuple[str, float, float]] = field(default_factory=list)
    time_dim: Optional[str] = None
    regions: dict[str, dict] = field(default_factory=dict)
    evaluator: dict = field(default_factory=lambda: {"kind": "pou"})
    channels: list[tuple[str, str]] = field(default_factory=list)
    modes: list[ModeDecl] = field(default_factory=list)
    domains: list[dict] = field(default_factory=list)
    initial: list[str] = field(default_factory=list)
    initial_state: dict[str, float] = field(default_factory=dict)
    thresholds: tuple[float, float] = (0.75, 0.90)


def _num(tok: str) -> float:
    # up to 12 significant decimal digits, matching trajectory output
    return float(f"{float(tok):.12g}")


class _Parser:
    def __init__(self, source: str):
        self.lines = source.splitlines()
        self.diags: list[Diagnostic] = []
        self.doc: Optional[ScenarioDoc] = None

    def error(self, line: int, col: int, message: str, hint: str = ""):
        self.diags.append(Diagnostic(ERROR, line, col, message, hint))

    def parse(self) -> tuple[Optional[ScenarioDoc], list[Diagnostic]]:
        doc: Optional[ScenarioDoc] = None
        mode: Optional[ModeDecl] = None
        for lineno, raw in enumerate(self.lines, start=1):
            text = raw.split("#", 1)[0].rstrip()
            if not text.strip():
                continue
            col = len(text) - len(text.lstrip()) + 1
            toks = text.split()
            head = toks[0]
            if doc is None and head != "scenario":
                self.error(lineno, col, f"expected 'scenario', got {head!r}")
                continue
            try:
                if head == "scenario":
                    if doc is not None:
                        self.error(lineno, col, "duplicate scenario declaration")
                        continue
                    if len(toks) != 2:
                        self.error(lineno, col, "usage: scenario NAME")
                        continue
                    doc = ScenarioDoc(name=toks[1])
                elif mode is not None and head != "end":
                    self._mode_line(doc, mode, lineno, col, toks, text)
                elif head == "end":
                    if mode is None:
                        self.error(lineno, col, "'end' outside a mode block")
                    else:
                        doc.modes.append(mode)
                        mode = None
                elif head == "vertex":
                    if len(toks) not in (2, 4):
                        self.error(lineno, col, "usage: vertex NAME [X Y]")
                        continue
                    doc.vertices.append(toks[1])
                    if len(toks) == 4:
                        doc.hints[toks[1]] = (_num(toks[2]), _num(toks[3]))
                elif head == "face":
                    if len(toks) < 2:
                        self.error(lineno, col, "usage: face V1 [V2 ...]")
                        continue
                    doc.faces.append(toks[1:])
                elif head == "dim":
                    if len(toks) != 4:
                        self.error(lineno, col, "usage: dim NAME LO HI")
                        continue
                    doc.dims.append((toks[1], _num(toks[2]), _num(toks[3])))
                elif head == "timedim":
                    doc.time_dim = toks[1]
                elif head == "region":
                    self._region(doc, lineno, col, toks)
                elif head == "evaluator":
                    self._evaluator(doc, lineno, col, toks)
                elif head == "channel":
                    if len(toks) == 2:
                        doc.channels.append((toks[1], toks[1]))
                    elif len(toks) == 4 and toks[2] == "dim":
                        doc.channels.append((toks[1], toks[3]))
                    else:
                        self.error(lineno, col, "usage: channel NAME [dim DIM]")
                elif head == "mode":
                    if len(toks) < 2:
                        self.error(lineno, col, "usage: mode V1 [V2 ...]")
                        continue
                    mode = ModeDecl(face=toks[1:])
                elif head == "domain":
                    self._domain(doc, lineno, col, toks)
                elif head == "initial":
                    if len(toks) < 2:
                        self.error(lineno, col, "usage: initial V1 [V2 ...]")
                        continue
                    doc.initial = toks[1:]
                elif head == "init":
                    if len(toks) != 3:
                        self.error(lineno, col, "usage: init DIM VALUE")
                        continue
                    doc.initial_state[toks[1]] = _num(toks[2])
                elif head == "thresholds":
                    if len(toks) != 3:
                        self.error(lineno, col, "usage: thresholds LOW HIGH")
                        continue
                    doc.thresholds = (_num(toks[1]), _num(toks[2]))
                else:
                    self.error(lineno, col, f"unknown declaration {head!r}")
            except ValueError as exc:
                self.error(lineno, col, f"bad number: {exc}")
        if mode is not None:
            self.error(len(self.lines) or 1, 1, "mode block not closed with 'end'")
        if doc is None:
            self.error(1, 1, "no scenario declared")
            return None, self.diags
        _validate(doc, self.diags)
        if any(d.severity == ERROR for d in self.diags):
            return None, self.diags
        return doc, self.diags

    def _region(self, doc, lineno, col, toks):
        if len(toks) < 4:
            self.error(lineno, col, "usage: region VERTEX SHAPE NUMS...")
            return
        vertex, shape = toks[1], toks[2]
        nums = [_num(t) for t in toks[3:]]
        if shape == "box":
            if len(nums) % 2 != 0 or not nums:
                self.error(lineno, col, "box needs LO HI per dimension")
                return
            spec = {"shape": "box", "intervals": [
                [nums[i], nums[i + 1]] for i in range(0, len(nums), 2)
            ]}
        elif shape == "halfplane":
            if len(nums) < 2:
                self.error(lineno, col, "halfplane needs N1 .. Nk OFFSET")
                return
            spec = {"shape": "halfplane", "normal": nums[:-1], "offset": nums[-1]}
        elif shape == "polygon":
            if len(nums) < 6 or len(nums) % 2 != 0:
                self.error(lineno, col, "polygon needs at least 3 X Y pairs")
                return
            spec = {"shape": "polygon", "points": [
                [nums[i], nums[i + 1]] for i in range(0, len(nums), 2)
            ]}
        else:
            self.error(lineno, col, f"unknown region shape {shape!r}")
            return
        doc.regions[vertex] = spec

    def _evaluator(self, doc, lineno, col, toks):
        if len(toks) >= 2 and toks[1] == "pou":
            doc.evaluator = {"kind": "pou"}
            if len(toks) == 3:
                doc.evaluator["margin"] = _num(toks[2])
        elif len(toks) == 3 and toks[1] == "map":
            doc.evaluator = {"kind": "map", "name": toks[2]}
        else:
            self.error(lineno, col, "usage: evaluator pou [MARGIN] | evaluator map NAME")

    def _domain(self, doc, lineno, col, toks):
        if len(toks) < 4:
            self.error(lineno, col, "usage: domain FACE SHAPE NUMS...")
            return
        face = toks[1].split("+")
        shape = toks[2]
        nums = [_num(t) for t in toks[3:]]
        if shape == "box":
            spec = {"shape": "box", "intervals": [
                [nums[i], nums[i + 1]] for i in range(0, len(nums), 2)
            ]}
        elif shape == "polygon":
            spec = {"shape": "polygon", "points": [
                [nums[i], nums[i + 1]] for i in range(0, len(nums), 2)
            ]}
        else:
            self.error(lineno, col, f"unknown domain shape {shape!r}")
            return
        doc.domains.append({"face": face, "region": spec})

    def _mode_line(self, doc, mode, lineno, col, toks, text):
        head = toks[0]
        if head == "objective":
            mode.objective = " ".join(toks[1:])
        elif head == "channels":
            mode.channels = toks[1:]
        elif head == "zone":
            self._zone(mode, lineno, col, toks, text)
        else:
            self.error(lineno, col, f"unknown mode declaration {head!r}")

    def _zone(self, mode, lineno, col, toks, text):
        if "when" not in toks:
            self.error(lineno, col, "zone needs a 'when' clause")
            return
        w = toks.index("when")
        header, atoms_toks = toks[:w], toks[w + 1:]
        if len(header) < 3:
            self.error(lineno, col, "usage: zone NAME ACTION [ARG] when ...")
            return
        name, action = header[1], header[2]
        if action not in ("warn", "transition", "intervene"):
            self.error(lineno, col, f"unknown zone action {action!r}")
            return
        argument = " ".join(header[3:])
        atoms: list[dict] = []
        parts: list[list[str]] = [[]]
        for t in atoms_toks:
            if t == "and":
                parts.append([])
            else:
                parts[-1].append(t)
        for part in parts:
            if not part:
                self.error(lineno, col, "empty zone condition")
                return
            if part[0] == "weight" and len(part) == 4:
                if part[2] not in (">=", "<=", ">", "<"):
                    self.error(lineno, col, f"bad comparison {part[2]!r}")
                    return
                atoms.append({
                    "kind": "weight",
                    "vertex": part[1],
                    "op": part[2],
                    "threshold": _num(part[3]),
                })
            elif part[0] == "in_face" and len(part) in (2, 3):
                atom = {"kind": "in_face", "face": part[1].split("+")}
                if len(part) == 3:
                    atom["tol"] = _num(part[2])
                atoms.append(atom)
            else:
                self.error(lineno, col, f"bad zone condition {' '.join(part)!r}")
                return
        mode.zones.append(ZoneDecl(name=name, action=action,
                                   argument=argument, atoms=atoms))


def _validate(doc: ScenarioDoc, diags: list[Diagnostic]) -> None:
    """Reference resolution and structural checks; appends error diagnostics."""

    def err(message, hint=""):
        diags.append(Diagnostic(ERROR, 1, 1, message, hint))

    if len(set(doc.vertices)) != len(doc.vertices):
        err("duplicate vertex declarations")
    vset = set(doc.vertices)
    if not doc.faces and not doc.vertices:
        err("scenario declares no complex")
        return
    for f in doc.faces:
        for v in f:
            if v not in vset:
                err(f"face uses undeclared vertex {v!r}")
    dim_names = {d[0] for d in doc.dims}
    if doc.time_dim and doc.time_dim not in dim_names:
        err(f"timedim {doc.time_dim!r} is not a declared dimension")
    for v in doc.regions:
        if v not in vset:
            err(f"cover region for undeclared vertex {v!r}")
    for c, d in doc.channels:
        if d not in dim_names:
            err(f"channel {c!r} maps to undeclared dimension {d!r}")
    face_sets = _closed_face_sets(doc)
    for m in doc.modes:
        if frozenset(m.face) not in face_sets:
            err(f"mode face {{{','.join(m.face)}}} is not a declared face")
        declared_channels = {c for c, _ in doc.channels}
        for c in m.channels:
            if c not in declared_channels:
                err(f"mode reads undeclared channel {c!r}")
        for z in m.zones:
            for a in z.atoms:
                if a["kind"] == "weight" and a["vertex"] not in vset:
                    err(f"zone {z.name!r} references undeclared vertex "
                        f"{a['vertex']!r}")
                if a["kind"] == "in_face" and frozenset(a["face"]) not in face_sets:
                    err(f"zone {z.name!r} references undeclared face "
                        f"{{{','.join(a['face'])}}}")
            if z.action == "transition":
                if frozenset(z.argument.split("+")) not in face_sets:
                    err(f"zone {z.name!r} targets undeclared face {z.argument!r}")
    for d in doc.domains:
        if frozenset(d["face"]) not in face_sets:
            err(f"stable domain for undeclared face {{{','.join(d['face'])}}}")
    if not doc.initial:
        err("no initial mode declared", hint="add a line: initial V1 [V2 ...]")
    elif frozenset(doc.initial) not in face_sets:
        err(f"initial mode {{{','.join(doc.initial)}}} is not a declared face")
    if doc.evaluator.get("kind") == "pou" and doc.regions:
        uncovered = vset - set(doc.regions)
        if uncovered:
            err(f"vertices without cover regions: {sorted(uncovered)}")
    low, high = doc.thresholds
    if not 0.0 <= low < high <= 1.0:
        err(f"bad colour thresholds {doc.thresholds}")
    for name, lo, hi in doc.dims:
        if not lo < hi:
            err(f"dimension {name!r}: lower bound must be below upper")


def _closed_face_sets(doc: ScenarioDoc) -> set[frozenset]:
    import itertools

    out: set[frozenset] = {frozenset((v,)) for v in doc.vertices}
    for f in doc.faces:
        vs = sorted(set(f))
        for k in range(1, len(vs) + 1):
            for sub in itertools.combinations(vs, k):
                out.add(frozenset(sub))
    return out


def parse(source: str) -> tuple[Optional[ScenarioDoc], list[Diagnostic]]:
    """Parse DSL text: a validated document, or error diagnostics."""
    return _Parser(source).parse()


# -- JSON twin -----------------------------------------------------------


def to_obj(doc: ScenarioDoc) -> dict[str, Any]:
    """Canonical JSON object form with stable key order."""
    return {
        "name": doc.name,
        "vertices": list(doc.vertices),
        "hints": {v: list(doc.hints[v]) for v in sorted(doc.hints)},
        "faces": [list(f) for f in doc.faces],
        "dims": [[n, lo, hi] for n, lo, hi in doc.dims],
        "time_dim": doc.time_dim,
        "regions": {v: doc.regions[v] for v in sorted(doc.regions)},
        "evaluator": doc.evaluator,
        "channels": [[c, d] for c, d in doc.channels],
        "modes": [
            {
                "face": list(m.face),
                "objective": m.objective,
                "channels": list(m.channels),
                "zones": [
                    {
                        "name": z.name,
                        "action": z.action,
                        "argument": z.argument,
                        "atoms": z.atoms,
                    }
                    for z in m.zones
                ],
            }
            for m in doc.modes
        ],
        "domains": doc.domains,
        "initial": list(doc.initial),
        "initial_state": {k: doc.initial_state[k] for k in sorted(doc.initial_state)},
        "thresholds": list(doc.thresholds),
    }


def to_json(doc: ScenarioDoc) -> str:
    return json.dumps(to_obj(doc), indent=2) + "\n"


def from_obj(obj: Any) -> tuple[Optional[ScenarioDoc], list[Diagnostic]]:
    diags: list[Diagnostic] = []

    def err(pointer: str, message: str):
        diags.append(Diagnostic(ERROR, 1, 1, message, hint=pointer))

    if not isinstance(obj, dict):
        err("", "scenario JSON must be an object")
        return None, diags
    required = ["name", "vertices", "faces", "initial"]
    for key in required:
        if key not in obj:
            err(f"/{key}", f"missing required key {key!r}")
    if diags:
        return None, diags
    try:
        doc = ScenarioDoc(
            name=obj["name"],
            vertices=list(obj["vertices"]),
            hints={v: tuple(xy) for v, xy in obj.get("hints", {}).items()},
            faces=[list(f) for f in obj["faces"]],
            dims=[(n, float(lo), float(hi)) for n, lo, hi in obj.get("dims", [])],
            time_dim=obj.get("time_dim"),
            regions=dict(obj.get("regions", {})),
            evaluator=dict(obj.get("evaluator", {"kind": "pou"})),
            channels=[(c, d) for c, d in obj.get("channels", [])],
            modes=[
                ModeDecl(
                    face=list(m["face"]),
                    objective=m.get("objective", ""),
                    channels=list(m.get("channels", [])),
                    zones=[
                        ZoneDecl(
                            name=z["name"],
                            action=z["action"],
                            argument=z.get("argument", ""),
                            atoms=list(z.get("atoms", [])),
                        )
                        for z in m.get("zones", [])
                    ],
                )
                for m in obj.get("modes", [])
            ],
            domains=list(obj.get("domains", [])),
            initial=list(obj["initial"]),
            initial_state={
                k: float(v) for k, v in obj.get("initial_state", {}).items()
            },
            thresholds=tuple(obj.get("thresholds", (0.75, 0.90))),
        )
    except (KeyError, TypeError, ValueError) as exc:
        err("", f"malformed scenario JSON: {exc}")
        return None, diags
    _validate(doc, diags)
    if any(d.severity == ERROR for d in diags):
        return None, diags
    return doc, diags


def from_json(text: str) -> tuple[Optional[ScenarioDoc], list[Diagnostic]]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [Diagnostic(ERROR, exc.lineno, exc.colno, f"bad JSON: {exc.msg}")]
    return from_obj(obj)


# -- text printer --------------------------------------------------------


def _fmt_num(x: float) -> str:
    s = f"{x:.12g}"
    return s


def to_text(doc: ScenarioDoc) -> str:
    """Print a document back to DSL text; reparses to an equal document."""
    out = [f"scenario {doc.name}", ""]
    for v in doc.vertices:
        if v in doc.hints:
            x, y = doc.hints[v]
            out.append(f"vertex {v} {_fmt_num(x)} {_fmt_num(y)}")
        else:
            out.append(f"vertex {v}")
    for f in doc.faces:
        out.append("face " + " ".join(f))
    for n, lo, hi in doc.dims:
        out.append(f"dim {n} {_fmt_num(lo)} {_fmt_num(hi)}")
    if doc.time_dim:
        out.append(f"timedim {doc.time_dim}")
    for v in sorted(doc.regions):
        out.append("region " + v + " " + _region_text(doc.regions[v]))
    ev = doc.evaluator
    if ev.get("kind") == "pou":
        line = "evaluator pou"
        if "margin" in ev:
            line += f" {_fmt_num(ev['margin'])}"
        out.append(line)
    else:
        out.append(f"evaluator map {ev['name']}")
    for c, d in doc.channels:
        out.append(f"channel {c} dim {d}")
    for k in sorted(doc.initial_state):
        out.append(f"init {k} {_fmt_num(doc.initial_state[k])}")
    for m in doc.modes:
        out.append("")
        out.append("mode " + " ".join(m.face))
        if m.objective:
            out.append(f"objective {m.objective}")
        if m.channels:
            out.append("channels " + " ".join(m.channels))
        for z in m.zones:
            head = f"zone {z.name} {z.action}"
            if z.argument:
                head += f" {z.argument}"
            conds = []
            for a in z.atoms:
                if a["kind"] == "weight":
                    conds.append(
                        f"weight {a['vertex']} {a['op']} {_fmt_num(a['threshold'])}"
                    )
                else:
                    cond = "in_face " + "+".join(a["face"])
                    if "tol" in a:
                        cond += f" {_fmt_num(a['tol'])}"
                    conds.append(cond)
            out.append(head + " when " + " and ".join(conds))
        out.append("end")
    for d in doc.domains:
        out.append("domain " + "+".join(d["face"]) + " " + _region_text(d["region"]))
    if doc.initial:
        out.append("initial " + " ".join(doc.initial))
    out.append(f"thresholds {_fmt_num(doc.thresholds[0])} {_fmt_num(doc.thresholds[1])}")
    return "\n".join(out) + "\n"


def _region_text(spec: dict) -> str:
    if spec["shape"] == "box":
        nums = [x for iv in spec["intervals"] for x in iv]
        return "box " + " ".join(_fmt_num(x) for x in nums)
    if spec["shape"] == "halfplane":
        nums = list(spec["normal"]) + [spec["offset"]]
        return "halfplane " + " ".join(_fmt_num(x) for x in nums)
    nums = [x for p in spec["points"] for x in p]
    return "polygon " + " ".join(_fmt_num(x) for x in nums)


# -- lint ----------------------------------------------------------------


def lint(doc: ScenarioDoc) -> list[Diagnostic]:
    """Warnings for suspicious but legal scenarios."""
    warnings: list[Diagnostic] = []

    def warn(message, hint=""):
        warnings.append(Diagnostic(WARNING, 1, 1, message, hint))

    # unreachable modes: no inbound transition zone and not the initial mode
    declared = [frozenset(m.face) for m in doc.modes]
    inbound: set[frozenset] = {frozenset(doc.initial)} if doc.initial else set()
    for d in doc.domains:
        inbound.add(frozenset(d["face"]))
    for m in doc.modes:
        for z in m.zones:
            if z.action == "transition":
                inbound.add(frozenset(z.argument.split("+")))
    for m in doc.modes:
        if frozenset(m.face) not in inbound:
            warn(f"mode {{{','.join(m.face)}}} is unreachable",
                 hint="no inbound transition and not the initial mode")

    # zones that can never fire
    for m in doc.modes:
        for z in m.zones:
            for a in z.atoms:
                if a["kind"] != "weight":
                    continue
                if a["op"] in (">=", ">") and a["threshold"] > 1.0:
                    warn(f"zone {z.name!r} can never fire",
                         hint=f"threshold {a['threshold']} exceeds the maximum weight 1")
                if a["op"] in ("<=", "<") and a["threshold"] < 0.0:
                    warn(f"zone {z.name!r} can never fire",
                         hint=f"threshold {a['threshold']} is below the minimum weight 0")

    # cover gaps, by sampling
    if doc.evaluator.get("kind") == "pou" and doc.regions and doc.dims:
        from .loader import build_cover

        try:
            from .cover import build_pou

            build_pou(build_cover(doc), check_resolution=32)
        except Exception as exc:  # lint never raises
            warn(f"cover check failed: {exc}")

    # overlapping stable domains whose boundaries never meet
    if len(doc.domains) >= 2:
        try:
            from .loader import build_domain_region
            from shapely.geometry import Polygon

            shapes = []
            for d in doc.domains:
                shapes.append(("+".join(d["face"]), _domain_shape(d, doc)))
            for i in range(len(shapes)):
                for j in range(i + 1, len(shapes)):
                    ni, si = shapes[i]
                    nj, sj = shapes[j]
                    if si is None or sj is None:
                        continue
                    inter = si.intersection(sj)
                    if inter.area > 0 and not si.boundary.intersects(sj.boundary):
                        warn(f"stable domains {ni} and {nj} overlap with no "
                             f"shared boundary")
        except Exception as exc:
            warn(f"domain check failed: {exc}")
    return warnings


def _domain_shape(domain: dict, doc: ScenarioDoc):
    from shapely.geometry import Polygon, box as shapely_box

    spec = domain["region"]
    if spec["shape"] == "polygon":
        return Polygon([tuple(p) for p in spec["points"]])
    if spec["shape"] == "box" and len(spec["intervals"]) == 2:
        (x0, x1), (y0, y1) = spec["intervals"]
        return shapely_box(x0, y0, x1, y1)
    return None
