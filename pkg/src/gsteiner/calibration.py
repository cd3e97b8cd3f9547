"""Piecewise-constant E*-valued 1-forms on polygonal partitions of the plane.

A form is a list of convex cells (half-plane intersections ``a x + b y <= c``)
clipped to a bounding box, each carrying a constant covector: an
``(n-1) x 2`` matrix whose row ``j`` is ``omega_{j,1} dx_1 + omega_{j,2} dx_2``.
:func:`verify_calibration` checks the three conditions that make such a form
a calibration of a polyhedral current:

(i)   on the current, ``<omega; tau, theta> = ||theta||_E``;
(ii)  across every shared cell edge with tangent ``tau``,
      ``(omega_r - omega_s)(tau, .) = 0``;
(iii) every cell has comass at most 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .currents import TOL_GEOM, PolyCurrent, Segment, boundary, mass
from .group import GroupSetup

TOL_CALIB = 1e-7

SQ3 = math.sqrt(3.0)


class CalibrationError(ValueError):
    pass


def evaluate(omega, tau: Sequence[float], v: Sequence[float], tol: float = 1e-9) -> float:
    """``<omega; tau, v> = sum_i v_i (omega_{i,1} tau_1 + omega_{i,2} tau_2)``."""
    omega = np.asarray(omega, float)
    if abs(math.hypot(*tau) - 1.0) > tol:
        raise CalibrationError(f"tau must be a unit vector, |tau| = {math.hypot(*tau)}")
    if omega.shape != (len(v), 2):
        raise CalibrationError(f"covector shape {omega.shape} does not match {len(v)} coefficients")
    return float(np.asarray(v, float) @ (omega @ np.asarray(tau, float)))


def comass(setup: GroupSetup, omega) -> float:
    """Largest Euclidean length of ``omega^T g`` over the extreme points ``g`` of the E unit ball.

    Maximizing first over unit ``tau`` and then over the unit ball of E
    (whose extreme points suffice) gives the comass exactly.
    """
    omega = np.asarray(omega, float)
    if omega.shape != (setup.dim, 2):
        raise CalibrationError(f"covector shape {omega.shape}, expected {(setup.dim, 2)}")
    ext = np.asarray(setup.extreme_points(), float)
    return float(np.hypot(*(ext @ omega).T).max())


def comass_witness(setup: GroupSetup, omega):
    """``(value, extreme point, maximizing unit tau)`` for :func:`comass`."""
    omega = np.asarray(omega, float)
    ext = setup.extreme_points()
    vecs = np.asarray(ext, float) @ omega
    norms = np.hypot(vecs[:, 0], vecs[:, 1])
    k = int(norms.argmax())
    tau = tuple(vecs[k] / norms[k]) if norms[k] > 0 else (1.0, 0.0)
    return float(norms[k]), ext[k], tau


# -- convex cells -----------------------------------------------------------


def clip_polygon(poly: list[tuple[float, float]], a: float, b: float, c: float, eps: float = 1e-12):
    """Sutherland-Hodgman clip of a convex polygon by ``a x + b y <= c``."""
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp <= eps:
            out.append(p)
        if (fp < -eps and fq > eps) or (fp > eps and fq < -eps):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def polygon_area(poly) -> float:
    return 0.5 * sum(p[0] * q[1] - q[0] * p[1] for p, q in zip(poly, poly[1:] + poly[:1]))


@dataclass
class Cell:
    halfplanes: list[tuple[float, float, float]]
    omega: np.ndarray
    polygon: list[tuple[float, float]] = field(default_factory=list)

    def contains(self, p, tol: float = TOL_GEOM) -> bool:
        return all(a * p[0] + b * p[1] <= c + tol * max(1.0, math.hypot(a, b)) for a, b, c in self.halfplanes)

    def clip_segment(self, a, b, tol: float = TOL_GEOM) -> tuple[float, float] | None:
        """Parameter interval of segment ``a -> b`` inside the cell, if of positive length."""
        t0, t1 = 0.0, 1.0
        d = (b[0] - a[0], b[1] - a[1])
        for ha, hb, hc in self.halfplanes:
            num = hc - (ha * a[0] + hb * a[1])
            den = ha * d[0] + hb * d[1]
            scale = math.hypot(ha, hb)
            # parallel to the boundary line, up to rounding of the line's coefficients
            if abs(den) <= 1e-12 * scale * math.hypot(*d):
                if num < -tol * scale:
                    return None
                continue
            t = num / den
            if den > 0:
                t1 = min(t1, t)
            else:
                t0 = max(t0, t)
        length = math.hypot(*d)
        if (t1 - t0) * length <= tol:
            return None
        return t0, t1


@dataclass
class PiecewiseForm:
    """Constant covectors on convex cells covering a bounding box."""

    setup: GroupSetup
    cells: list[Cell]
    box: tuple[float, float, float, float]
    name: str = ""

    def __post_init__(self):
        x0, y0, x1, y1 = self.box
        square = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        for cell in self.cells:
            cell.omega = np.asarray(cell.omega, float)
            if cell.omega.shape != (self.setup.dim, 2):
                raise CalibrationError(f"cell covector shape {cell.omega.shape}, expected {(self.setup.dim, 2)}")
            if not np.all(np.isfinite(cell.omega)):
                raise CalibrationError("non-finite covector entry")
            poly = square
            for hp in cell.halfplanes:
                poly = clip_polygon(poly, *hp)
                if not poly:
                    break
            cell.polygon = poly

    @classmethod
    def from_cells(cls, setup, cells, box, name=""):
        return cls(setup, [Cell([tuple(map(float, h)) for h in hps], np.asarray(om, float)) for hps, om in cells], box, name)

    def locate(self, p) -> int:
        for k, cell in enumerate(self.cells):
            if cell.contains(p):
                return k
        raise CalibrationError(f"point {p} outside every cell")

    def check_partition(self, tol: float = 1e-9) -> float:
        """Relative gap/overlap of the cell areas against the box area."""
        x0, y0, x1, y1 = self.box
        box_area = (x1 - x0) * (y1 - y0)
        total = sum(abs(polygon_area(c.polygon)) for c in self.cells if len(c.polygon) >= 3)
        return abs(total - box_area) / box_area

    def shared_edges(self, tol: float = TOL_GEOM):
        """``(r, s, p, q)`` for every pair of cells sharing the boundary piece ``p q``."""
        out = []
        for r, cr in enumerate(self.cells):
            poly = cr.polygon
            for p, q in zip(poly, poly[1:] + poly[:1]):
                if math.dist(p, q) <= tol:
                    continue
                for s, cs in enumerate(self.cells):
                    if s <= r:
                        continue
                    span = cs.clip_segment(p, q, tol)
                    if span is None:
                        continue
                    t0, t1 = span
                    a = (p[0] + t0 * (q[0] - p[0]), p[1] + t0 * (q[1] - p[1]))
                    b = (p[0] + t1 * (q[0] - p[0]), p[1] + t1 * (q[1] - p[1]))
                    out.append((r, s, a, b))
        return out

    def split(self, T: PolyCurrent) -> list[tuple[int, Segment]]:
        """Pieces of T, each inside a single cell.

        A piece lying on an edge between two cells goes to the first of them;
        by the compatibility condition either choice pairs the same way.
        """
        pieces = []
        for seg in T.segments:
            cuts = {0.0, 1.0}
            for cell in self.cells:
                span = cell.clip_segment(seg.a, seg.b, T.tol)
                if span is not None:
                    cuts.update(span)
            ts = sorted(cuts)
            for t0, t1 in zip(ts, ts[1:]):
                if (t1 - t0) * seg.length <= T.tol:
                    continue
                a = tuple(x + t0 * (y - x) for x, y in zip(seg.a, seg.b))
                b = tuple(x + t1 * (y - x) for x, y in zip(seg.a, seg.b))
                mid = tuple((x + y) / 2 for x, y in zip(a, b))
                pieces.append((self.locate(mid), Segment(a, b, seg.theta)))
        return pieces

    def pairing(self, T: PolyCurrent) -> float:
        """``<T, omega>``: integral of ``<omega; tau, theta>`` over T."""
        return math.fsum(
            piece.length * evaluate(self.cells[k].omega, piece.tangent, piece.theta) for k, piece in self.split(T)
        )


# -- reports ------------------------------------------------------------------


@dataclass
class ConditionReport:
    name: str
    passed: bool
    max_residual: float
    witness: object = None
    checked: int = 0

    def to_dict(self):
        return {
            "condition": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "checked": self.checked,
            "witness": _jsonable(self.witness),
        }


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


@dataclass
class Certificate:
    passed: bool
    condition_reports: list[ConditionReport]
    mass: float
    pairing: float
    competitors_checked: int = 0
    worst_competitor_gap: float | None = None

    def to_dict(self):
        return {
            "passed": self.passed,
            "mass": self.mass,
            "pairing": self.pairing,
            "competitors_checked": self.competitors_checked,
            "worst_competitor_gap": self.worst_competitor_gap,
            "conditions": [r.to_dict() for r in self.condition_reports],
        }


def check_support(form: PiecewiseForm, T: PolyCurrent, tol: float = TOL_CALIB) -> ConditionReport:
    """Condition (i): ``max |<omega; tau, theta> - ||theta||_E|`` over the pieces of T."""
    if T.setup != form.setup:
        raise CalibrationError(f"current has n={T.setup.n}, form has n={form.setup.n}")
    worst, witness = 0.0, None
    pieces = form.split(T)
    for k, piece in pieces:
        res = abs(evaluate(form.cells[k].omega, piece.tangent, piece.theta) - form.setup.norm(piece.theta))
        if res > worst:
            worst, witness = res, {"cell": k, "a": piece.a, "b": piece.b, "theta": list(piece.theta)}
    return ConditionReport("(i) support", worst < tol, worst, witness, len(pieces))


def check_compatibility(form: PiecewiseForm, tol: float = TOL_CALIB, partition_tol: float = 1e-9) -> ConditionReport:
    """Condition (ii): tangential jumps ``(omega_r - omega_s)(tau, .)`` vanish on shared edges."""
    gap = form.check_partition()
    if gap > partition_tol:
        raise CalibrationError(f"cells do not tile the box (relative area mismatch {gap:.3g})")
    worst, witness = 0.0, None
    edges = form.shared_edges()
    for r, s, a, b in edges:
        tau = np.subtract(b, a) / math.dist(a, b)
        jump = (form.cells[r].omega - form.cells[s].omega) @ tau
        res = float(np.abs(jump).max())
        if res > worst:
            worst, witness = res, {"cells": (r, s), "a": a, "b": b}
    return ConditionReport("(ii) compatibility", worst < tol, worst, witness, len(edges))


def check_comass(form: PiecewiseForm, tol: float = TOL_CALIB) -> ConditionReport:
    """Condition (iii): every cell covector has comass at most 1."""
    worst, witness = 0.0, None
    top = 0.0
    for k, cell in enumerate(form.cells):
        value, g, tau = comass_witness(form.setup, cell.omega)
        top = max(top, value)
        if value - 1.0 > worst:
            worst, witness = value - 1.0, {"cell": k, "comass": value, "g": list(g), "tau": tau}
    return ConditionReport("(iii) comass", worst <= tol, worst, witness or {"max_comass": top}, len(form.cells))


def verify_calibration(
    form: PiecewiseForm,
    T: PolyCurrent,
    competitors: Sequence[PolyCurrent] = (),
    tol: float = TOL_CALIB,
) -> Certificate:
    """Run conditions (i)-(iii) and the mass lower bound on the given competitors.

    Every competitor must have the boundary of T.  Its mass is compared
    with its pairing against the form, which a valid calibration forces to
    equal ``mass(T)``.
    """
    reports = [check_support(form, T, tol), check_compatibility(form, tol), check_comass(form, tol)]
    m = mass(T)
    value = form.pairing(T)
    bd = boundary(T)
    worst_gap = None
    lower_bound_ok = True
    for comp in competitors:
        if boundary(comp) != bd:
            raise CalibrationError("competitor boundary differs from the calibrated current")
        pc = form.pairing(comp)
        mc = mass(comp)
        gap = mc - m
        worst_gap = gap if worst_gap is None else min(worst_gap, gap)
        if mc < pc - tol or abs(pc - m) > tol * max(1.0, m) or gap < -tol:
            lower_bound_ok = False
    if competitors:
        reports.append(
            ConditionReport("lower bound", lower_bound_ok, max(0.0, -(worst_gap or 0.0)), None, len(competitors))
        )
    passed = all(r.passed for r in reports)
    return Certificate(passed, reports, m, value, len(competitors), worst_gap)


# -- the worked forms ---------------------------------------------------------


def box_around(points, factor: float = 2.0):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    hw = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9) / 2 * factor
    return (cx - hw, cy - hw, cx + hw, cy + hw)


TRIANGLE_POINTS = [(0.5, SQ3 / 2), (0.5, -SQ3 / 2), (-1.0, 0.0)]
SQUARE_POINTS = [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0)]
HEXAGON_POINTS = [
    (0.5, SQ3 / 2), (1.0, 0.0), (0.5, -SQ3 / 2),
    (-0.5, -SQ3 / 2), (-1.0, 0.0), (-0.5, SQ3 / 2), (0.0, 0.0),
]
# The hexagon covectors calibrate the tree only when generator g_j sits at
# hexagon vertex p_{j-1} (g_1 at p_6); the centre p_7 carries g_7.
HEXAGON_TERMINALS = [HEXAGON_POINTS[(j - 2) % 6] for j in range(1, 7)] + [HEXAGON_POINTS[6]]


def triangle_form() -> PiecewiseForm:
    setup = GroupSetup(3)
    omega = [[0.5, SQ3 / 2], [0.5, -SQ3 / 2]]
    return PiecewiseForm.from_cells(setup, [([], omega)], box_around(TRIANGLE_POINTS), "triangle")


def square_form() -> PiecewiseForm:
    """Four covectors on the sectors cut out by the two diagonals."""
    setup = GroupSetup(4)
    a, b = SQ3 / 2, 1 - SQ3 / 2
    top = [[a, 0.5], [b, -0.5], [-b, -0.5]]
    right = [[0.5, a], [0.5, -a], [-0.5, -b]]
    bottom = [[b, 0.5], [a, -0.5], [-a, -0.5]]
    left = [[0.5, b], [0.5, -b], [-0.5, -a]]
    cells = [
        ([(1, -1, 0), (-1, -1, 0)], top),  # y >= |x|
        ([(-1, 1, 0), (-1, -1, 0)], right),  # x >= |y|
        ([(-1, 1, 0), (1, 1, 0)], bottom),  # -y >= |x|
        ([(1, -1, 0), (1, 1, 0)], left),  # -x >= |y|
    ]
    return PiecewiseForm.from_cells(setup, cells, box_around(SQUARE_POINTS), "square")


def hexagon_form() -> PiecewiseForm:
    """Six covectors on the cones of angle pi/3 bounded by the rays through the hexagon vertices.

    Cone 1 contains (0, 1); cones are numbered clockwise.
    """
    setup = GroupSetup(7)
    h = 0.5
    rows = {
        1: {1: (-SQ3 / 2, h), 2: (SQ3 / 2, h)},
        2: {2: (0.0, 1.0), 3: (SQ3 / 2, -h)},
        3: {3: (SQ3 / 2, h), 4: (0.0, -1.0)},
        4: {4: (SQ3 / 2, -h), 5: (-SQ3 / 2, -h)},
        5: {5: (0.0, -1.0), 6: (-SQ3 / 2, h)},
        6: {1: (0.0, 1.0), 6: (-SQ3 / 2, -h)},
    }
    cells = []
    for k in range(1, 7):
        # cone k spans directions [120 - 60k, 180 - 60k] degrees
        lo = math.radians(120 - 60 * k)
        hi = math.radians(180 - 60 * k)
        halfplanes = [
            (math.sin(lo), -math.cos(lo), 0.0),  # left of the ray at angle lo
            (-math.sin(hi), math.cos(hi), 0.0),  # right of the ray at angle hi
        ]
        omega = [list(rows[k].get(j, (0.0, 0.0))) for j in range(1, 7)]
        cells.append((halfplanes, omega))
    return PiecewiseForm.from_cells(setup, cells, box_around(HEXAGON_POINTS), "hexagon7")


BUILTIN_FORMS = {"triangle": triangle_form, "square": square_form, "hexagon7": hexagon_form}

BUILTIN_TERMINALS = {
    "triangle": TRIANGLE_POINTS,
    "square": SQUARE_POINTS,
    "hexagon7": HEXAGON_TERMINALS,
}


def builtin_form(name: str) -> PiecewiseForm:
    try:
        return BUILTIN_FORMS[name]()
    except KeyError:
        raise CalibrationError(f"unknown built-in form {name!r}; choose from {sorted(BUILTIN_FORMS)}") from None
