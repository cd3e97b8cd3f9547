"""Minimal SVG emitter for trees, currents, partitions, graphs and transport plans.

World coordinates are y-up; the viewport is the bounding box of everything
drawn, padded by 10% on each side.  Multiplicities are labelled by their
coefficient vectors.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .calibration import PiecewiseForm
from .currents import PolyCurrent
from .flows import ClassicalBoundary, GraphCurrent, MetricGraph, SegmentPlan

PADDING = 0.10

_CELL_FILLS = ["#fde7e7", "#e5f0fb", "#e8f6e4", "#fdf3da", "#efe6f7", "#e1f5f4", "#f4f4f4", "#fbe8f3"]


class Canvas:
    """Collects primitives in world coordinates and renders them into one SVG document."""

    def __init__(self, width: int = 600):
        self.width = width
        self.items: list[tuple] = []
        self.xs: list[float] = []
        self.ys: list[float] = []

    def _extend(self, *pts):
        for x, y in pts:
            self.xs.append(float(x))
            self.ys.append(float(y))

    def line(self, a, b, color="#222", width=2.0, dash=False):
        self._extend(a, b)
        self.items.append(("line", a, b, color, width, dash))

    def arrow(self, a, b, color="#222", width=2.0):
        self._extend(a, b)
        self.items.append(("arrow", a, b, color, width))

    def dot(self, p, r=4.0, color="#222"):
        self._extend(p)
        self.items.append(("dot", p, r, color))

    def text(self, p, s, size=12, color="#000"):
        self._extend(p)
        self.items.append(("text", p, str(s), size, color))

    def polygon(self, pts, fill="#eee", stroke="#999"):
        if len(pts) >= 3:
            self._extend(*pts)
            self.items.append(("polygon", list(pts), fill, stroke))

    # -- rendering -----------------------------------------------------------
    def _frame(self):
        if not self.xs:
            return 0.0, 0.0, 1.0, 1.0
        x0, x1, y0, y1 = min(self.xs), max(self.xs), min(self.ys), max(self.ys)
        w = max(x1 - x0, 1e-9)
        h = max(y1 - y0, 1e-9)
        side = max(w, h)
        # keep degenerate (collinear) drawings from collapsing to a line
        w, h = max(w, 0.2 * side), max(h, 0.2 * side)
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        w *= 1 + 2 * PADDING
        h *= 1 + 2 * PADDING
        return cx - w / 2, cy - h / 2, w, h

    def render(self) -> str:
        fx, fy, fw, fh = self._frame()
        scale = self.width / fw
        height = fh * scale

        def tx(p):
            # y-up world -> y-down screen
            return (p[0] - fx) * scale, height - (p[1] - fy) * scale

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{height:.1f}" '
            f'viewBox="0 0 {self.width} {height:.1f}">',
            "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"7\" "
            "markerHeight=\"7\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>",
            f'<rect width="{self.width}" height="{height:.1f}" fill="white"/>',
        ]
        for item in sorted(self.items, key=lambda it: {"polygon": 0, "line": 1, "arrow": 1, "dot": 2, "text": 3}[it[0]]):
            kind = item[0]
            if kind == "polygon":
                pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(tx, item[1]))
                out.append(f'<polygon points="{pts}" fill="{item[2]}" stroke="{item[3]}" stroke-dasharray="4 3"/>')
            elif kind in ("line", "arrow"):
                (x1, y1), (x2, y2) = tx(item[1]), tx(item[2])
                attrs = f'stroke="{item[3]}" stroke-width="{item[4]}"'
                if kind == "line" and item[5]:
                    attrs += ' stroke-dasharray="5 4"'
                if kind == "arrow":
                    # arrowhead at the midpoint keeps it clear of the endpoint dots
                    mx, my = (x1 + x2) / 2, (y1 + y2) / 2
                    out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" {attrs}/>')
                    out.append(
                        f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{mx:.2f}" y2="{my:.2f}" {attrs} marker-end="url(#head)"/>'
                    )
                else:
                    out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" {attrs}/>')
            elif kind == "dot":
                x, y = tx(item[1])
                out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{item[2]}" fill="{item[3]}"/>')
            elif kind == "text":
                x, y = tx(item[1])
                out.append(
                    f'<text x="{x:.2f}" y="{y:.2f}" font-size="{item[3]}" font-family="sans-serif" '
                    f'fill="{item[4]}" text-anchor="middle">{escape(item[2])}</text>'
                )
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def save(self, path) -> str:
        text = self.render()
        Path(path).write_text(text)
        return text


def _label(theta) -> str:
    return "(" + ",".join(str(int(c)) for c in theta) + ")"


def _mid(a, b):
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


def draw_current(canvas: Canvas, T: PolyCurrent, terminals=(), labels: bool = True, color="#1f4e9c"):
    for s in T.segments:
        canvas.arrow(s.a[:2], s.b[:2], color=color)
        if labels:
            canvas.text(_mid(s.a, s.b), _label(s.theta), size=11, color=color)
    for k, p in enumerate(terminals, start=1):
        canvas.dot(p, r=5, color="#b00")
        canvas.text((p[0], p[1]), f"p{k}", size=13, color="#b00")
    return canvas


def current_svg(T: PolyCurrent, terminals=(), path=None) -> str:
    c = draw_current(Canvas(), T, terminals)
    return c.save(path) if path else c.render()


def form_svg(form: PiecewiseForm, T: PolyCurrent | None = None, terminals=(), path=None) -> str:
    c = Canvas()
    for k, cell in enumerate(form.cells):
        c.polygon(cell.polygon, fill=_CELL_FILLS[k % len(_CELL_FILLS)])
        if cell.polygon:
            cx = sum(p[0] for p in cell.polygon) / len(cell.polygon)
            cy = sum(p[1] for p in cell.polygon) / len(cell.polygon)
            c.text((cx, cy), f"omega_{k + 1}", size=12, color="#555")
    if T is not None:
        draw_current(c, T, terminals)
    return c.save(path) if path else c.render()


def graph_svg(g: MetricGraph, current: GraphCurrent | None = None, path=None) -> str:
    c = Canvas()
    pos = g.pos or _circle_layout(g.vertices)
    thetas = current.theta if current is not None else [None] * len(g.edges)
    for (u, v, ell), t in zip(g.edges, thetas):
        if t is not None and not t.is_zero():
            c.arrow(pos[u], pos[v], color="#1f4e9c", width=2.5)
            c.text(_mid(pos[u], pos[v]), f"{ell}: {_label(t)}", size=11, color="#1f4e9c")
        else:
            c.line(pos[u], pos[v], color="#999", width=1.2, dash=True)
            c.text(_mid(pos[u], pos[v]), str(ell), size=11, color="#777")
    for v in g.vertices:
        is_term = v in g.terminals
        c.dot(pos[v], r=5 if is_term else 3, color="#b00" if is_term else "#333")
        c.text(pos[v], v + (" " + _label(g.terminals[v]) if is_term else ""), size=12)
    return c.save(path) if path else c.render()


def plan_svg(B: ClassicalBoundary, plan: SegmentPlan, path=None) -> str:
    c = Canvas()
    for (i, j), w in sorted(plan.weights.items()):
        a, b = B.sources[i][0], B.sinks[j][0]
        c.arrow(a[:2], b[:2], color="#1f4e9c")
        c.text(_mid(a, b), str(w), size=12, color="#1f4e9c")
    for p, a in B.sources:
        c.dot(p[:2], r=5, color="#b00")
        c.text(p[:2], f"-{a}", size=12, color="#b00")
    for p, b in B.sinks:
        c.dot(p[:2], r=5, color="#070")
        c.text(p[:2], f"+{b}", size=12, color="#070")
    return c.save(path) if path else c.render()


def _circle_layout(vertices):
    k = max(len(vertices), 1)
    return {v: (math.cos(2 * math.pi * i / k), math.sin(2 * math.pi * i / k)) for i, v in enumerate(vertices)}
