"""Compile a scenario document into a runnable scenario.

Bridges the declarative form (parsed text or JSON) to the runtime objects:
complex, state space, cover and partition of unity (or a named built-in
classification map), modes with zones, and stable domains.
"""

from __future__ import annotations

from pathlib import Path

from . import dsl
from .cover import Box, Cover, HalfPlane, PolygonRegion, Region, StateSpace, build_pou
from .engine import Mode, Scenario, StableDomain, Zone, ZoneAtom
from .errors import InvalidInputError
from .simplicial import Face, close_downward


def build_region(spec: dict) -> Region:
    if spec["shape"] == "box":
        return Box([tuple(iv) for iv in spec["intervals"]])
    if spec["shape"] == "halfplane":
        return HalfPlane(spec["normal"], spec["offset"])
    if spec["shape"] == "polygon":
        return PolygonRegion([tuple(p) for p in spec["points"]])
    raise InvalidInputError(f"unknown region shape {spec['shape']!r}")


def build_space(doc: dsl.ScenarioDoc) -> StateSpace:
    if not doc.dims:
        raise InvalidInputError("scenario declares no state dimensions")
    return StateSpace(doc.dims)


def build_cover(doc: dsl.ScenarioDoc) -> Cover:
    return Cover(
        build_space(doc), {v: build_region(s) for v, s in doc.regions.items()}
    )


def build_domain_region(spec: dict) -> Region:
    return build_region(spec)


def _build_zone(z: dsl.ZoneDecl) -> Zone:
    atoms = []
    for a in z.atoms:
        if a["kind"] == "weight":
            atoms.append(
                ZoneAtom(
                    kind="weight",
                    vertex=a["vertex"],
                    op=a["op"],
                    threshold=float(a["threshold"]),
                )
            )
        else:
            atoms.append(
                ZoneAtom(
                    kind="in_face",
                    face=Face(a["face"]),
                    tol=float(a.get("tol", 1e-9)),
                )
            )
    if z.action == "transition":
        return Zone(
            name=z.name,
            atoms=tuple(atoms),
            action="transition",
            target=Face(z.argument.split("+")),
        )
    return Zone(name=z.name, atoms=tuple(atoms), action=z.action, message=z.argument)


def _builtin_evaluator(name: str):
    if name == "offender":
        from .scenarios.offender import offender_phi

        def ev(face, state):
            return offender_phi(state["x_alc"], state["x_tag"])

        return ev
    if name == "judicial":
        from .scenarios.judicial import JudicialParams, judicial_phi

        params = JudicialParams()

        def ev(face, state):
            return judicial_phi(params, face, state["t"], state["g"])

        return ev
    raise InvalidInputError(f"unknown classification map {name!r}")


def compile_scenario(doc: dsl.ScenarioDoc) -> Scenario:
    """Turn a validated document into a runnable scenario."""
    generators = list(doc.faces) + [[v] for v in doc.vertices]
    complex = close_downward(generators)
    space = build_space(doc)

    ev_kind = doc.evaluator.get("kind", "pou")
    if ev_kind == "pou":
        pou = build_pou(build_cover(doc), margin=doc.evaluator.get("margin"))
        from .cover import evaluate as pou_evaluate

        def evaluator(face, state):
            return pou_evaluate(pou, [state[n] for n in space.names])

    else:
        evaluator = _builtin_evaluator(doc.evaluator["name"])

    modes = tuple(
        Mode(
            face=Face(m.face),
            objective=m.objective,
            oracle_channels=tuple(m.channels),
            zones=tuple(_build_zone(z) for z in m.zones),
        )
        for m in doc.modes
    )
    domains = tuple(
        StableDomain(Face(d["face"]), build_region(d["region"]))
        for d in doc.domains
    )
    return Scenario(
        name=doc.name,
        complex=complex,
        space=space,
        modes=modes,
        initial=Face(doc.initial),
        evaluator=evaluator,
        channels=tuple(doc.channels),
        stable_domains=domains,
        layout_hints=tuple(
            (v, doc.hints[v]) for v in doc.vertices if v in doc.hints
        ),
        thresholds=tuple(doc.thresholds),
        initial_state=tuple(sorted(doc.initial_state.items())),
        time_dim=doc.time_dim,
    )


def load_scenario_file(path) -> tuple[Scenario, list[dsl.Diagnostic]]:
    """Parse, validate, and compile a ``.mode`` or ``.json`` scenario file."""
    text = Path(path).read_text(encoding="utf-8")
    if str(path).endswith(".json"):
        doc, diags = dsl.from_json(text)
    else:
        doc, diags = dsl.parse(text)
    if doc is None:
        raise InvalidInputError(
            "scenario file is invalid:\n" + "\n".join(str(d) for d in diags)
        )
    return compile_scenario(doc), diags
