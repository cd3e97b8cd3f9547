"""JSON formats for points, currents, piecewise forms, metric graphs and transport boundaries.

Every ``*_to_json`` returns plain JSON data and the matching
``*_from_json`` parses it back into an equal value.  Rationals (graph
lengths, transport weights) travel as strings ``"p/q"`` so no precision
is lost.  Malformed input raises :class:`InputError` naming the offending
field.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

from .calibration import Cell, PiecewiseForm
from .currents import PolyCurrent, Segment
from .flows import ClassicalBoundary, GraphCurrent, MetricGraph, SegmentPlan
from .group import GroupSetup
from .steiner import SteinerSolution


class InputError(ValueError):
    """A file or JSON value does not have the expected shape."""


# -- primitives ----------------------------------------------------------------


def load_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"{p}: cannot read file ({exc.strerror or exc})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{p}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def dump_json(obj: Any, path: str | Path | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def rational_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise InputError(f"{where}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputError(f"{where}: non-finite number {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{where}: cannot parse rational {value!r}") from None
    raise InputError(f"{where}: expected a rational, got {type(value).__name__}")


def _field(obj, key: str, where: str):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise InputError(f"{where}: missing field {key!r}")
    return obj[key]


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list, got {type(value).__name__}")
    return value


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise InputError(f"{where}: non-finite number {value!r}")
    return float(value)


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise InputError(f"{where}: expected an integer, got {value!r}")
    return value


def _point(value, where: str, dim: int | None = 2) -> tuple[float, ...]:
    coords = _list(value, where)
    if dim is not None and len(coords) != dim:
        raise InputError(f"{where}: expected {dim} coordinates, got {len(coords)}")
    return tuple(_number(c, f"{where}[{k}]") for k, c in enumerate(coords))


def _ints(value, where: str, length: int) -> list[int]:
    coeffs = _list(value, where)
    if len(coeffs) != length:
        raise InputError(f"{where}: expected {length} coefficients, got {len(coeffs)}")
    return [_int(c, f"{where}[{k}]") for k, c in enumerate(coeffs)]


def _setup(obj, where: str) -> GroupSetup:
    n = _int(_field(obj, "n", where), f"{where}.n")
    if n < 2:
        raise InputError(f"{where}.n: must be >= 2, got {n}")
    return GroupSetup(n)


# -- points ----------------------------------------------------------------------


def points_from_json(obj, where: str = "points file") -> list[tuple[float, float]]:
    pts = _list(_field(obj, "points", where), f"{where}.points")
    return [_point(p, f"{where}.points[{k}]") for k, p in enumerate(pts)]


def points_to_json(points) -> dict:
    return {"points": [list(map(float, p)) for p in points]}


# -- currents --------------------------------------------------------------------


def current_to_json(T: PolyCurrent) -> dict:
    return {
        "n": T.setup.n,
        "d": T.d if T.d is not None else 2,
        "segments": [{"a": list(s.a), "b": list(s.b), "theta": list(s.theta)} for s in T.segments],
    }


def current_from_json(obj, where: str = "current file", tol: float | None = None) -> PolyCurrent:
    setup = _setup(obj, where)
    d = obj.get("d")
    if d is not None:
        d = _int(d, f"{where}.d")
        if d < 1:
            raise InputError(f"{where}.d: must be >= 1, got {d}")
    segs = []
    for k, s in enumerate(_list(_field(obj, "segments", where), f"{where}.segments")):
        w = f"{where}.segments[{k}]"
        a = _point(_field(s, "a", w), f"{w}.a", d)
        b = _point(_field(s, "b", w), f"{w}.b", len(a))
        theta = _ints(_field(s, "theta", w), f"{w}.theta", setup.dim)
        segs.append(Segment(a, b, setup.element(theta)))
    kwargs = {} if tol is None else {"tol": tol}
    return PolyCurrent(setup, segs, **kwargs)


# -- piecewise forms -------------------------------------------------------------


def form_to_json(form: PiecewiseForm) -> dict:
    return {
        "n": form.setup.n,
        "name": form.name,
        "box": list(form.box),
        "cells": [
            {"halfplanes": [list(h) for h in cell.halfplanes], "omega": cell.omega.tolist()} for cell in form.cells
        ],
    }


def form_from_json(obj, where: str = "calibration file", default_box=None) -> PiecewiseForm:
    """Parse a calibration file; ``box`` may be omitted when ``default_box`` is given."""
    setup = _setup(obj, where)
    if "box" not in obj and default_box is not None:
        box = list(default_box)
    else:
        box = _list(_field(obj, "box", where), f"{where}.box")
    if len(box) != 4:
        raise InputError(f"{where}.box: expected [xmin, ymin, xmax, ymax]")
    box = tuple(_number(v, f"{where}.box[{k}]") for k, v in enumerate(box))
    if not (box[0] < box[2] and box[1] < box[3]):
        raise InputError(f"{where}.box: empty box {box}")
    cells = []
    for k, c in enumerate(_list(_field(obj, "cells", where), f"{where}.cells")):
        w = f"{where}.cells[{k}]"
        hps = [_point(h, f"{w}.halfplanes[{i}]", 3) for i, h in enumerate(_list(_field(c, "halfplanes", w), f"{w}.halfplanes"))]
        rows = _list(_field(c, "omega", w), f"{w}.omega")
        if len(rows) != setup.dim:
            raise InputError(f"{w}.omega: expected {setup.dim} rows, got {len(rows)}")
        omega = [list(_point(r, f"{w}.omega[{i}]", 2)) for i, r in enumerate(rows)]
        cells.append(Cell(hps, omega))
    name = obj.get("name", "")
    return PiecewiseForm(setup, cells, box, str(name))


# -- Steiner solutions -----------------------------------------------------------


def solution_to_json(sol: SteinerSolution) -> dict:
    return {
        "terminals": [list(p) for p in sol.terminals],
        "segments": [[list(a), list(b)] for a, b in sol.segments],
        "steiner_points": [list(p) for p in sol.steiner_points],
        "length": sol.length,
        "topology": None if sol.topology is None else [list(e) for e in sol.topology.edges],
    }


def solution_from_json(obj, where: str = "solution") -> SteinerSolution:
    from .steiner import SteinerTopology

    terms = [_point(p, f"{where}.terminals[{k}]") for k, p in enumerate(_list(_field(obj, "terminals", where), where))]
    segs = []
    for k, s in enumerate(_list(_field(obj, "segments", where), f"{where}.segments")):
        pair = _list(s, f"{where}.segments[{k}]")
        if len(pair) != 2:
            raise InputError(f"{where}.segments[{k}]: expected two endpoints")
        segs.append((_point(pair[0], f"{where}.segments[{k}][0]"), _point(pair[1], f"{where}.segments[{k}][1]")))
    steiner = [_point(p, f"{where}.steiner_points[{k}]") for k, p in enumerate(obj.get("steiner_points", []))]
    topo = obj.get("topology")
    topology = None if topo is None else SteinerTopology(len(terms), tuple(tuple(e) for e in topo))
    length = _number(_field(obj, "length", where), f"{where}.length")
    return SteinerSolution(terms, segs, length, topology, steiner)


# -- metric graphs ---------------------------------------------------------------


def graph_to_json(g: MetricGraph) -> dict:
    verts = []
    for v in g.vertices:
        entry = {"id": v}
        if v in g.pos:
            entry["pos"] = list(g.pos[v])
        verts.append(entry)
    return {
        "n": g.n,
        "vertices": verts,
        "edges": [{"u": u, "v": v, "len": rational_str(ell)} for u, v, ell in g.edges],
        "terminals": [{"id": v, "g": list(t)} for v, t in g.terminals.items()],
    }


def graph_from_json(obj, where: str = "graph file") -> MetricGraph:
    setup = _setup(obj, where)
    verts, pos = [], {}
    for k, v in enumerate(_list(_field(obj, "vertices", where), f"{where}.vertices")):
        w = f"{where}.vertices[{k}]"
        vid = _field(v, "id", w)
        if not isinstance(vid, str):
            raise InputError(f"{w}.id: expected a string")
        verts.append(vid)
        if "pos" in v:
            pos[vid] = _point(v["pos"], f"{w}.pos")
    edges = []
    for k, e in enumerate(_list(_field(obj, "edges", where), f"{where}.edges")):
        w = f"{where}.edges[{k}]"
        edges.append((str(_field(e, "u", w)), str(_field(e, "v", w)), parse_rational(_field(e, "len", w), f"{w}.len")))
    terms = {}
    for k, t in enumerate(_list(_field(obj, "terminals", where), f"{where}.terminals")):
        w = f"{where}.terminals[{k}]"
        tid = str(_field(t, "id", w))
        if tid in terms:
            raise InputError(f"{w}.id: terminal {tid!r} listed twice")
        terms[tid] = _ints(_field(t, "g", w), f"{w}.g", setup.dim)
    return MetricGraph(setup.n, verts, edges, terms, pos)


def graph_current_to_json(cur: GraphCurrent) -> dict:
    return {
        "edges": [{"u": u, "v": v, "theta": list(t)} for (u, v, _), t in zip(cur.graph.edges, cur.theta)],
        "mass": rational_str(cur.mass()),
    }


# -- transport boundaries and plans ----------------------------------------------


def boundary_to_json(B: ClassicalBoundary) -> dict:
    return {
        "sources": [{"p": list(p), "mult": a} for p, a in B.sources],
        "sinks": [{"p": list(p), "mult": b} for p, b in B.sinks],
    }


def boundary_from_json(obj, where: str = "boundary file") -> ClassicalBoundary:
    def side(key):
        out = []
        for k, item in enumerate(_list(_field(obj, key, where), f"{where}.{key}")):
            w = f"{where}.{key}[{k}]"
            out.append((_point(_field(item, "p", w), f"{w}.p", None), _int(_field(item, "mult", w), f"{w}.mult")))
        return out

    return ClassicalBoundary(side("sources"), side("sinks"))


def plan_to_json(plan: SegmentPlan) -> dict:
    return {
        "weights": [{"i": i, "j": j, "w": rational_str(w)} for (i, j), w in sorted(plan.weights.items())],
        "mass": plan.mass(),
    }


def plan_from_json(obj, B: ClassicalBoundary, where: str = "plan") -> SegmentPlan:
    weights = {}
    for k, item in enumerate(_list(_field(obj, "weights", where), f"{where}.weights")):
        w = f"{where}.weights[{k}]"
        weights[(_int(_field(item, "i", w), f"{w}.i"), _int(_field(item, "j", w), f"{w}.j"))] = parse_rational(
            _field(item, "w", w), f"{w}.w"
        )
    return SegmentPlan(B, weights)
