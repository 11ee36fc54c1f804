"""Hand-emitted SVG 1.1 renderings of complexes, trajectories, and belief
points.

Output is byte-deterministic: the same inputs produce the same bytes, so
renders can be diffed and cached.  Coordinates are formatted with two fixed
decimals; elements are emitted in sorted order.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional, Sequence

from .belief import BeliefVisualisation, confidence_band
from .engine import Trajectory
from .errors import RenderError
from .simplicial import AbstractComplex, SimplexPoint

BAND_COLOURS = {"green": "#2e8b57", "orange": "#e8860c", "red": "#c0392b"}

_EVENT_COLOURS = {
    "warn": "#e8860c",
    "intervene": "#c0392b",
    "transition": "#2456a8",
    "access-violation": "#7d3c98",
}


def _f(x: float) -> str:
    return f"{x:.2f}"


class _Canvas:
    """Maps model coordinates into a padded pixel viewport."""

    def __init__(self, points: Iterable[tuple[float, float]],
                 width: int = 480, height: int = 420, pad: float = 48.0):
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        if not xs:
            raise RenderError("nothing to render")
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        self.width, self.height, self.pad = width, height, pad
        self.x0, self.y0 = x0, y0
        self.sx = (width - 2 * pad) / (x1 - x0 or 1.0)
        self.sy = (height - 2 * pad) / (y1 - y0 or 1.0)

    def to_px(self, p: tuple[float, float]) -> tuple[float, float]:
        x = self.pad + (p[0] - self.x0) * self.sx
        # SVG y axis points down; model y points up
        y = self.height - self.pad - (p[1] - self.y0) * self.sy
        return x, y


def _document(canvas: _Canvas, body: list[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{canvas.width}" height="{canvas.height}" '
        f'viewBox="0 0 {canvas.width} {canvas.height}">\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _require_layout(
    complex: AbstractComplex, layout: Mapping[str, tuple[float, float]]
) -> None:
    missing = [v for v in complex.vertex_set if v not in layout]
    if missing:
        raise RenderError(f"no layout coordinates for vertices: {missing}")


def render_complex(
    complex: AbstractComplex,
    layout: Mapping[str, tuple[float, float]],
    width: int = 480,
    height: int = 420,
    overlays: Sequence[
        tuple[tuple[float, float], tuple[float, float], str]
    ] = (),
) -> str:
    """Draw a complex: labelled vertex dots, edges, translucent triangles.

    Faces of dimension three or more cannot be drawn flat; they are listed
    in a textual badge under the figure instead.  ``overlays`` are extra
    labelled dashed segments in model coordinates (zone boundaries and the
    like).
    """
    _require_layout(complex, layout)
    canvas = _Canvas(layout.values(), width, height)
    body: list[str] = []

    for f in complex.faces_of_dim(2):
        pts = " ".join(
            f"{_f(px)},{_f(py)}"
            for px, py in (canvas.to_px(layout[v]) for v in f.vertices)
        )
        body.append(
            f'<polygon points="{pts}" fill="#4a78c4" fill-opacity="0.25" '
            'stroke="none"/>'
        )
    for f in complex.faces_of_dim(1):
        a, b = f.vertices
        ax, ay = canvas.to_px(layout[a])
        bx, by = canvas.to_px(layout[b])
        body.append(
            f'<line x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
            'stroke="#333333" stroke-width="1.5"/>'
        )
    for v in sorted(complex.vertex_set):
        x, y = canvas.to_px(layout[v])
        body.append(
            f'<circle cx="{_f(x)}" cy="{_f(y)}" r="4" fill="#1a1a1a"/>'
        )
        body.append(
            f'<text x="{_f(x + 7)}" y="{_f(y - 7)}" font-size="13" '
            f'font-family="sans-serif" fill="#1a1a1a">{v}</text>'
        )
    for (p0, p1, label) in overlays:
        ax, ay = canvas.to_px(p0)
        bx, by = canvas.to_px(p1)
        body.append(
            f'<line x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
            'stroke="#c0392b" stroke-width="1.5" stroke-dasharray="6,4"/>'
        )
        if label:
            body.append(
                f'<text x="{_f((ax + bx) / 2 + 6)}" y="{_f((ay + by) / 2 - 6)}" '
                f'font-size="11" font-family="sans-serif" '
                f'fill="#c0392b">{label}</text>'
            )
    higher = sorted(
        "{" + ",".join(f.vertices) + "}"
        for f in complex.faces
        if f.dim >= 3
    )
    if higher:
        badge = "higher faces: " + ", ".join(higher)
        body.append(
            f'<text x="{_f(canvas.pad)}" y="{_f(canvas.height - 12)}" '
            f'font-size="12" font-family="sans-serif" fill="#555555">{badge}</text>'
        )
    return _document(canvas, body)


def _position_px(
    canvas: _Canvas,
    layout: Mapping[str, tuple[float, float]],
    point: SimplexPoint,
) -> tuple[float, float]:
    x = sum(w * layout[v][0] for v, w in point.weights.items())
    y = sum(w * layout[v][1] for v, w in point.weights.items())
    return canvas.to_px((x, y))


def render_trajectory(
    complex: AbstractComplex,
    layout: Mapping[str, tuple[float, float]],
    trajectory: Trajectory,
    thresholds: tuple[float, float] = (0.75, 0.90),
    width: int = 480,
    height: int = 420,
) -> str:
    """Overlay a trajectory on the complex.

    The path is a polyline through the realised points; each sample gets a
    dot coloured by its confidence band; events get labelled markers; the
    final sample carries its confidence as a percentage.
    """
    _require_layout(complex, layout)
    if not trajectory.samples:
        raise RenderError("empty trajectory")
    base = render_complex(complex, layout, width, height)
    canvas = _Canvas(layout.values(), width, height)
    body: list[str] = []

    px_points = [
        _position_px(canvas, layout, s.point) for s in trajectory.samples
    ]
    path = " ".join(f"{_f(x)},{_f(y)}" for x, y in px_points)
    body.append(
        f'<polyline points="{path}" fill="none" stroke="#2456a8" '
        'stroke-width="2" stroke-opacity="0.8"/>'
    )
    for s, (x, y) in zip(trajectory.samples, px_points):
        colour = BAND_COLOURS[confidence_band(s.confidence, thresholds)]
        body.append(
            f'<circle cx="{_f(x)}" cy="{_f(y)}" r="3.5" fill="{colour}"/>'
        )
        for i, e in enumerate(s.events):
            ec = _EVENT_COLOURS.get(e.kind, "#555555")
            body.append(
                f'<rect x="{_f(x - 4)}" y="{_f(y - 4)}" width="8" height="8" '
                f'fill="none" stroke="{ec}" stroke-width="2"/>'
            )
            body.append(
                f'<text x="{_f(x + 8)}" y="{_f(y + 4 + 12 * i)}" font-size="11" '
                f'font-family="sans-serif" fill="{ec}">{e.name}</text>'
            )
    fx, fy = px_points[-1]
    final = trajectory.samples[-1]
    pct = f"{round(final.confidence * 100)}%"
    body.append(
        f'<text x="{_f(fx + 8)}" y="{_f(fy - 8)}" font-size="12" '
        f'font-family="sans-serif" font-weight="bold" fill="#1a1a1a">{pct}</text>'
    )
    closing = "\n</svg>\n"
    return base[: -len(closing)] + "\n" + "\n".join(body) + closing


def render_belief_points(
    complex: AbstractComplex,
    layout: Mapping[str, tuple[float, float]],
    points: Sequence[tuple[str, BeliefVisualisation]],
    thresholds: tuple[float, float] = (0.75, 0.90),
    width: int = 480,
    height: int = 420,
) -> str:
    """Plot visualised belief states on the complex.

    Each point is drawn at its simplex position, coloured by the confidence
    band of its overall belief, and labelled with the name and the belief as
    a percentage.
    """
    _require_layout(complex, layout)
    base = render_complex(complex, layout, width, height)
    canvas = _Canvas(layout.values(), width, height)
    body: list[str] = []
    for name, vis in points:
        x, y = _position_px(canvas, layout, vis.position)
        colour = BAND_COLOURS[confidence_band(vis.confidence, thresholds)]
        pct = f"{round(vis.confidence * 100)}%"
        body.append(
            f'<circle cx="{_f(x)}" cy="{_f(y)}" r="5" fill="{colour}"/>'
        )
        body.append(
            f'<text x="{_f(x + 8)}" y="{_f(y + 4)}" font-size="12" '
            f'font-family="sans-serif" fill="#1a1a1a">{name} {pct}</text>'
        )
    closing = "\n</svg>\n"
    return base[: -len(closing)] + "\n" + "\n".join(body) + closing
