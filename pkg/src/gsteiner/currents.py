"""Polyhedral 1-dimensional G-currents in R^d.

A :class:`PolyCurrent` is a finite list of oriented segments carrying
:class:`~gsteiner.group.GroupElement` multiplicities.  Construction always
brings the list to canonical form: endpoints closer than ``tol`` are
identified, every segment is split at the vertices lying in its interior,
pieces on the same edge are summed (reversing orientation flips the sign),
and zero pieces are dropped.  Canonical segments point from the
lexicographically smaller endpoint to the larger one.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .group import GroupElement, GroupSetup

TOL_GEOM = 1e-9

Point = tuple[float, ...]


class CurrentError(ValueError):
    pass


def as_point(p: Iterable[float]) -> Point:
    return tuple(float(x) for x in p)


def dist(a: Sequence[float], b: Sequence[float]) -> float:
    return math.dist(a, b)


class PointSet:
    """Identifies points closer than ``tol``; the first point seen is kept."""

    def __init__(self, tol: float = TOL_GEOM):
        self.tol = tol
        self.points: list[Point] = []
        self._grid: dict[tuple, list[int]] = defaultdict(list)

    def _cell(self, p: Point) -> tuple:
        return tuple(math.floor(x / self.tol) for x in p)

    def find(self, p: Sequence[float]) -> int | None:
        p = as_point(p)
        cell = self._cell(p)
        for off in _offsets(len(p)):
            key = tuple(c + o for c, o in zip(cell, off))
            for idx in self._grid.get(key, ()):
                if dist(self.points[idx], p) <= self.tol:
                    return idx
        return None

    def add(self, p: Sequence[float]) -> int:
        idx = self.find(p)
        if idx is not None:
            return idx
        p = as_point(p)
        self.points.append(p)
        self._grid[self._cell(p)].append(len(self.points) - 1)
        return len(self.points) - 1


_OFFSETS: dict[int, list[tuple]] = {}


def _offsets(d: int) -> list[tuple]:
    if d not in _OFFSETS:
        out = [()]
        for _ in range(d):
            out = [o + (k,) for o in out for k in (-1, 0, 1)]
        _OFFSETS[d] = out
    return _OFFSETS[d]


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point
    theta: GroupElement

    @property
    def length(self) -> float:
        return dist(self.a, self.b)

    @property
    def tangent(self) -> Point:
        ell = self.length
        return tuple((y - x) / ell for x, y in zip(self.a, self.b))

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a, -self.theta)


def _interior_param(p: Point, a: Point, b: Point, tol: float) -> float | None:
    """Parameter t in (0, 1) of ``p`` on segment ab, if p lies strictly inside it."""
    ab = [y - x for x, y in zip(a, b)]
    ell2 = sum(c * c for c in ab)
    t = sum((pi - ai) * c for pi, ai, c in zip(p, a, ab)) / ell2
    ell = math.sqrt(ell2)
    if t * ell <= tol or (1 - t) * ell <= tol:
        return None
    foot = [ai + t * c for ai, c in zip(a, ab)]
    if dist(foot, p) > tol:
        return None
    return t


class Point0Current:
    """Finitely many atoms ``g_k delta_{P_k}``; zero atoms are never stored."""

    def __init__(self, setup: GroupSetup, atoms=(), tol: float = TOL_GEOM):
        self.setup = setup
        self.tol = tol
        pts = PointSet(tol)
        acc: dict[int, GroupElement] = {}
        items = atoms.items() if isinstance(atoms, dict) else atoms
        for p, g in items:
            g = setup.element(g)
            i = pts.add(p)
            acc[i] = acc.get(i, setup.zero()) + g
        self.atoms: dict[Point, GroupElement] = {
            pts.points[i]: g for i, g in sorted(acc.items(), key=lambda kv: pts.points[kv[0]]) if not g.is_zero()
        }

    def total(self) -> GroupElement:
        return sum(self.atoms.values(), self.setup.zero())

    def __len__(self) -> int:
        return len(self.atoms)

    def __sub__(self, other: "Point0Current") -> "Point0Current":
        items = list(self.atoms.items()) + [(p, -g) for p, g in other.atoms.items()]
        return Point0Current(self.setup, items, self.tol)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Point0Current):
            return NotImplemented
        return len(self - other) == 0

    def at(self, p: Sequence[float]) -> GroupElement:
        for q, g in self.atoms.items():
            if dist(p, q) <= self.tol:
                return g
        return self.setup.zero()

    def __repr__(self) -> str:
        body = " + ".join(f"{list(g)}@{p}" for p, g in self.atoms.items())
        return f"Point0Current({body or '0'})"


class PolyCurrent:
    """Polyhedral 1-current with G multiplicities, kept in canonical form."""

    def __init__(self, setup: GroupSetup, segments: Iterable = (), tol: float = TOL_GEOM):
        self.setup = setup
        self.tol = tol
        raw = []
        for s in segments:
            if isinstance(s, Segment):
                a, b, th = s.a, s.b, s.theta
            else:
                a, b, th = s
            raw.append((as_point(a), as_point(b), setup.element(th)))
        self.segments: list[Segment] = self._canonical(raw)

    def _canonical(self, raw) -> list[Segment]:
        dims = {len(a) for a, b, _ in raw} | {len(b) for a, b, _ in raw}
        if len(dims) > 1:
            raise CurrentError(f"mixed ambient dimensions {sorted(dims)}")
        pts = PointSet(self.tol)
        snapped = []
        for a, b, th in raw:
            if th.is_zero():
                continue
            ia, ib = pts.add(a), pts.add(b)
            if ia != ib:
                snapped.append((ia, ib, th))
        P = pts.points
        acc: dict[tuple[int, int], GroupElement] = {}
        for ia, ib, th in snapped:
            cuts = []
            for k, p in enumerate(P):
                if k in (ia, ib):
                    continue
                t = _interior_param(p, P[ia], P[ib], self.tol)
                if t is not None:
                    cuts.append((t, k))
            chain = [ia] + [k for _, k in sorted(cuts)] + [ib]
            for u, v in zip(chain, chain[1:]):
                if P[u] > P[v]:
                    u, v, piece = v, u, -th
                else:
                    piece = th
                acc[(u, v)] = acc.get((u, v), self.setup.zero()) + piece
        out = [Segment(P[u], P[v], th) for (u, v), th in acc.items() if not th.is_zero()]
        out.sort(key=lambda s: (s.a, s.b))
        return out

    @classmethod
    def polyline(cls, setup: GroupSetup, points: Sequence[Sequence[float]], theta, tol: float = TOL_GEOM):
        """Current of the polyline through ``points`` with constant multiplicity."""
        theta = setup.element(theta)
        return cls(setup, [(p, q, theta) for p, q in zip(points, points[1:])], tol)

    @property
    def d(self) -> int | None:
        return len(self.segments[0].a) if self.segments else None

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __add__(self, other: "PolyCurrent") -> "PolyCurrent":
        return PolyCurrent(self.setup, self.segments + other.segments, self.tol)

    def __neg__(self) -> "PolyCurrent":
        return PolyCurrent(self.setup, [(s.a, s.b, -s.theta) for s in self.segments], self.tol)

    def __sub__(self, other: "PolyCurrent") -> "PolyCurrent":
        return self + (-other)

    def scaled(self, k: int) -> "PolyCurrent":
        return PolyCurrent(self.setup, [(s.a, s.b, s.theta * k) for s in self.segments], self.tol)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyCurrent):
            return NotImplemented
        return len(self - other) == 0

    def is_empty(self) -> bool:
        return not self.segments

    def vertices(self) -> list[Point]:
        return sorted({p for s in self.segments for p in (s.a, s.b)})

    def support_length(self) -> float:
        return math.fsum(s.length for s in self.segments)

    def component(self, j: int) -> list[tuple[Point, Point, int]]:
        """Segments of the classical integer current ``<h_j, theta>`` (1-based j)."""
        return [(s.a, s.b, s.theta[j - 1]) for s in self.segments if s.theta[j - 1] != 0]

    def __repr__(self) -> str:
        return f"PolyCurrent(n={self.setup.n}, {len(self.segments)} segments, mass={mass(self):.6g})"


def mass(T: PolyCurrent) -> float:
    """Sum over segments of length times ``||theta||_E``."""
    return math.fsum(s.length * T.setup.norm(s.theta) for s in T.segments)


def component_mass(T: PolyCurrent, j: int) -> float:
    return math.fsum(dist(a, b) * abs(c) for a, b, c in T.component(j))


def boundary(T: PolyCurrent) -> Point0Current:
    items = []
    for s in T.segments:
        items.append((s.b, s.theta))
        items.append((s.a, -s.theta))
    return Point0Current(T.setup, items, T.tol)


def _undirected_graph(segments, tol):
    pts = PointSet(tol)
    edges = []
    for a, b in segments:
        edges.append((pts.add(a), pts.add(b)))
    return pts, edges


def canonical_current(setup: GroupSetup, tree, terminals: Sequence[Sequence[float]], tol: float = TOL_GEOM) -> PolyCurrent:
    """G-current on a tree routing ``g_i`` from the last terminal ``p_n`` to ``p_i``.

    ``tree`` is an iterable of undirected segments ``(a, b)`` (or
    :class:`Segment` objects, whose multiplicity is ignored).  Every edge
    receives the sum of ``g_i`` over the terminals ``p_i`` (i < n) whose tree
    path to ``p_n`` crosses it, oriented away from ``p_n``; the boundary is
    ``sum_i g_i delta_{p_i}``.
    """
    if len(terminals) != setup.n:
        raise CurrentError(f"expected {setup.n} terminals, got {len(terminals)}")
    segs = [(s.a, s.b) if isinstance(s, Segment) else (as_point(s[0]), as_point(s[1])) for s in tree]
    pts = PointSet(tol)
    for p in terminals:
        pts.add(p)
    if len(pts.points) != setup.n:
        raise CurrentError("terminals are not distinct")
    for a, b in segs:
        pts.add(a)
        pts.add(b)
    # split edges at vertices in their interiors (e.g. a terminal on a straight run)
    split = []
    for a, b in segs:
        ia, ib = pts.find(a), pts.find(b)
        if ia == ib:
            continue
        A, B = pts.points[ia], pts.points[ib]
        cuts = sorted(
            (t, k) for k, p in enumerate(pts.points)
            if k not in (ia, ib) and (t := _interior_param(p, A, B, tol)) is not None
        )
        chain = [ia] + [k for _, k in cuts] + [ib]
        split.extend(zip(chain, chain[1:]))
    adj: dict[int, list[int]] = defaultdict(list)
    seen_edges = set()
    for u, v in split:
        key = (min(u, v), max(u, v))
        if key in seen_edges:
            raise CurrentError("tree has a repeated edge")
        seen_edges.add(key)
        adj[u].append(v)
        adj[v].append(u)
    nverts = len({u for e in seen_edges for u in e} | set(range(setup.n)))
    for i in range(setup.n):
        if setup.n > 1 and not adj[i]:
            raise CurrentError(f"terminal p_{i + 1} is not a vertex of the tree")
    root = setup.n - 1
    parent = {root: None}
    order = []
    queue = deque([root])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                queue.append(v)
    if len(parent) != nverts:
        raise CurrentError("tree is disconnected")
    if len(seen_edges) != nverts - 1:
        raise CurrentError("tree contains a cycle")
    flow: dict[int, GroupElement] = {v: (setup.g(v + 1) if v < root else setup.zero()) for v in parent}
    for v in reversed(order):
        p = parent[v]
        if p is not None:
            flow[p] = flow[p] + flow[v]
    out = []
    for v in order:
        p = parent[v]
        if p is not None:
            out.append((pts.points[p], pts.points[v], flow[v]))
    return PolyCurrent(setup, out, tol)


@dataclass
class Decomposition:
    paths: list[PolyCurrent]
    cycles: list[PolyCurrent]
    # (component j, multiplicity) for every part, parallel to paths / cycles
    path_info: list[tuple[int, int]]
    cycle_info: list[tuple[int, int]]

    def parts(self) -> list[PolyCurrent]:
        return self.paths + self.cycles

    def total(self, setup: GroupSetup) -> PolyCurrent:
        return PolyCurrent(setup, [s for part in self.parts() for s in part.segments])


def _decompose_component(edges: list[tuple[Point, Point, int]]):
    """Conformal path/cycle decomposition of one integer flow.

    Returns ``(paths, cycles)`` as lists of ``(vertex list, amount)``.
    """
    flow: dict[Point, dict[Point, int]] = defaultdict(dict)
    excess: dict[Point, int] = defaultdict(int)
    for a, b, c in edges:
        if c < 0:
            a, b, c = b, a, -c
        flow[a][b] = flow[a].get(b, 0) + c
        excess[a] -= c
        excess[b] += c

    def next_vertex(u):
        outs = [v for v, c in flow[u].items() if c > 0]
        return min(outs) if outs else None

    def push(chain, amount):
        for u, v in zip(chain, chain[1:]):
            flow[u][v] -= amount

    def bottleneck(chain):
        return min(flow[u][v] for u, v in zip(chain, chain[1:]))

    paths, cycles = [], []

    def walk(start, stop_at_sink):
        chain = [start]
        pos = {start: 0}
        while True:
            u = chain[-1]
            if stop_at_sink and len(chain) > 1 and excess[u] > 0:
                amount = min(bottleneck(chain), -excess[start], excess[u])
                push(chain, amount)
                excess[start] += amount
                excess[u] -= amount
                paths.append((list(chain), amount))
                return
            v = next_vertex(u)
            if v is None:
                raise CurrentError("flow decomposition stalled (inconsistent flow)")
            if v in pos:
                loop = chain[pos[v]:] + [v]
                amount = bottleneck(loop)
                push(loop, amount)
                cycles.append((loop, amount))
                for w in chain[pos[v] + 1:]:
                    del pos[w]
                del chain[pos[v] + 1:]
                if not stop_at_sink:
                    return
                continue
            pos[v] = len(chain)
            chain.append(v)

    while True:
        sources = sorted(p for p, e in excess.items() if e < 0)
        if not sources:
            break
        walk(sources[0], True)
    while True:
        starts = sorted(u for u in flow if any(c > 0 for c in flow[u].values()))
        if not starts:
            break
        walk(starts[0], False)
    return paths, cycles


def decompose(T: PolyCurrent) -> Decomposition:
    """Split T, one dual component at a time, into injective paths and simple cycles.

    Every part is ``c * g_j`` on a polyline; the parts are conformal (each
    runs along the flow direction of its component), so component masses
    add up exactly.
    """
    setup = T.setup
    paths, cycles, pinfo, cinfo = [], [], [], []
    for j in range(1, setup.n):
        ps, cs = _decompose_component(T.component(j))
        for chain, amount in ps:
            paths.append(PolyCurrent.polyline(setup, chain, setup.g(j) * amount, T.tol))
            pinfo.append((j, amount))
        for chain, amount in cs:
            cycles.append(PolyCurrent.polyline(setup, chain, setup.g(j) * amount, T.tol))
            cinfo.append((j, amount))
    return Decomposition(paths, cycles, pinfo, cinfo)


def acyclic_part(T: PolyCurrent) -> PolyCurrent:
    """Drop the cyclic part of every component of a current with boundary ``sum g_i delta_{p_i}``.

    Each component then is a single injective path from ``p_n`` to ``p_j``;
    the boundary is unchanged and the mass does not increase.
    """
    setup = T.setup
    bd = boundary(T)
    roots = set()
    for j in range(setup.n - 1):
        plus = [p for p, g in bd.atoms.items() if g[j] != 0]
        vals = sorted(bd.atoms[p][j] for p in plus)
        if vals != [-1, 1]:
            raise CurrentError(f"component {j + 1} boundary is not delta_p - delta_q: {vals}")
        roots.update(p for p in plus if bd.atoms[p][j] == -1)
    if len(roots) > 1:
        raise CurrentError("components do not share a common root terminal")
    dec = decompose(T)
    return PolyCurrent(setup, [s for part in dec.paths for s in part.segments], T.tol)
