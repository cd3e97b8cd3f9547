"""Exact small-n Euclidean Steiner trees in the plane.

Every full Steiner topology is enumerated; each one is optimized by moving
its Steiner points, one at a time, to the Fermat point of their neighbours
until nothing moves.  Edges that shrink to nothing are contracted, which
covers the degenerate topologies.  A vectorized pass screens all
topologies at once and only the promising ones are refined individually.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .currents import TOL_GEOM, Point, PolyCurrent, _interior_param, as_point, canonical_current, dist, mass
from .group import GroupSetup

TOL_ANGLE = 1e-7
MAX_ITER = 100_000
MAX_TERMINALS = 8
POLISH_TOL = 1e-6

_COS120 = -0.5


class SteinerError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


class EquivalenceError(AssertionError):
    """The canonical current of a solver tree failed a minimality check."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class SteinerTopology:
    """Full topology: terminals ``0..n-1`` have degree 1, Steiner points ``n..2n-3`` degree 3."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @property
    def steiner_count(self) -> int:
        return max(0, self.n - 2)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {k: [] for k in range(self.n + self.steiner_count)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


@dataclass
class SteinerSolution:
    terminals: list[Point]
    segments: list[tuple[Point, Point]]
    length: float
    topology: SteinerTopology | None
    steiner_points: list[Point] = field(default_factory=list)
    iterations: int = 0

    def degree(self) -> dict[Point, int]:
        deg: dict[Point, int] = {}
        for a, b in self.segments:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        return deg

    def same_tree(self, other: "SteinerSolution", tol: float = 1e-6) -> bool:
        if len(self.segments) != len(other.segments):
            return False
        rest = list(other.segments)
        for a, b in self.segments:
            for k, (c, d) in enumerate(rest):
                if (dist(a, c) < tol and dist(b, d) < tol) or (dist(a, d) < tol and dist(b, c) < tol):
                    del rest[k]
                    break
            else:
                return False
        return True


def fermat_point(a: Sequence[float], b: Sequence[float], c: Sequence[float], tol: float = TOL_GEOM) -> Point:
    """Point minimizing the summed distance to ``a``, ``b``, ``c``."""
    P = [as_point(a), as_point(b), as_point(c)]
    for i in range(3):
        for j in range(i + 1, 3):
            if dist(P[i], P[j]) <= tol:
                return P[i]
    cosines = []
    for i in range(3):
        p, q, r = P[i], P[(i + 1) % 3], P[(i + 2) % 3]
        u = (q[0] - p[0], q[1] - p[1])
        v = (r[0] - p[0], r[1] - p[1])
        cos = (u[0] * v[0] + u[1] * v[1]) / (math.hypot(*u) * math.hypot(*v))
        if cos <= _COS120:
            return p
        cosines.append(cos)
    weights = []
    for i in range(3):
        angle = math.acos(max(-1.0, min(1.0, cosines[i])))
        opposite = dist(P[(i + 1) % 3], P[(i + 2) % 3])
        weights.append(opposite / math.sin(angle + math.pi / 3))
    s = sum(weights)
    return tuple(sum(w * p[k] for w, p in zip(weights, P)) / s for k in range(2))


def geometric_median(
    points: Sequence[Point], tol: float = TOL_GEOM, max_iter: int = 10_000, start: Sequence[float] | None = None
) -> Point:
    """Weiszfeld iteration with the vertex optimality test."""
    pts = [as_point(p) for p in points]
    if len(pts) == 3:
        return fermat_point(*pts, tol=tol)
    for p in pts:
        gx = gy = 0.0
        for q in pts:
            r = dist(p, q)
            if r > tol:
                gx += (q[0] - p[0]) / r
                gy += (q[1] - p[1]) / r
        if math.hypot(gx, gy) <= 1.0:
            return p
    if start is None:
        x = (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
    else:
        x = as_point(start)
    for _ in range(max_iter):
        wsum = nx = ny = 0.0
        for p in pts:
            r = max(dist(x, p), tol)
            wsum += 1.0 / r
            nx += p[0] / r
            ny += p[1] / r
        new = (nx / wsum, ny / wsum)
        if dist(new, x) < tol:
            return new
        x = new
    return x


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def enumerate_topologies(n: int) -> list[SteinerTopology]:
    """All ``(2n-5)!!`` full topologies on ``n`` labelled terminals."""
    if not 3 <= n <= MAX_TERMINALS:
        raise SteinerError(f"topology enumeration supports 3 <= n <= {MAX_TERMINALS}, got {n}")
    current = [[(0, n), (1, n), (2, n)]]
    for k in range(3, n):
        s = n + k - 2
        grown = []
        for edges in current:
            for i, (u, v) in enumerate(edges):
                grown.append(edges[:i] + [(u, s), (s, v), (k, s)] + edges[i + 1:])
        current = grown
    return [SteinerTopology(n, tuple(e)) for e in current]


def _tree_length(pos, edges) -> float:
    return math.fsum(dist(pos[u], pos[v]) for u, v in edges)


def _laplacian_init(topology: SteinerTopology, terminals: np.ndarray) -> np.ndarray:
    """Steiner positions that are the average of their neighbours (a unique, spread-out start)."""
    n, s = topology.n, topology.steiner_count
    A = np.zeros((s, s))
    rhs = np.zeros((s, 2))
    for u, v in topology.edges:
        for x, y in ((u, v), (v, u)):
            if x >= n:
                A[x - n, x - n] += 1
                if y >= n:
                    A[x - n, y - n] -= 1
                else:
                    rhs[x - n] += terminals[y]
    return np.linalg.solve(A, rhs)


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x


def _descend(n, edges, pos, uf, tol, contract_tol, max_iter, history):
    """Gauss-Seidel Fermat / geometric-median sweeps, contracting short edges."""
    s = len(pos) - n
    sweeps = 0
    while True:
        for u, v in edges:
            ru, rv = uf.find(u), uf.find(v)
            if ru != rv and (ru >= n or rv >= n) and dist(pos[ru], pos[rv]) < contract_tol:
                keep, drop = (ru, rv) if ru < rv else (rv, ru)
                uf.parent[drop] = keep
        roots = sorted({uf.find(k) for k in range(n, n + s)})
        nbrs = {r: [] for r in roots}
        for u, v in edges:
            ru, rv = uf.find(u), uf.find(v)
            if ru == rv:
                continue
            if ru in nbrs:
                nbrs[ru].append(rv)
            if rv in nbrs:
                nbrs[rv].append(ru)
        moved = 0.0
        for r in roots:
            if r < n:
                continue
            new = geometric_median([pos[q] for q in nbrs[r]], tol=tol * 0.1, start=pos[r])
            moved = max(moved, dist(new, pos[r]))
            pos[r] = new
        sweeps += 1
        if history is not None:
            history.append(_tree_length([pos[uf.find(k)] for k in range(n + s)], edges))
        if moved < tol:
            return sweeps
        if sweeps >= max_iter:
            raise ConvergenceError(f"no convergence after {max_iter} sweeps (last move {moved:.3g})")


def _assemble(topology, terms, pos, uf, tol, sweeps) -> SteinerSolution:
    n = len(terms)
    final = [pos[uf.find(k)] for k in range(len(pos))]
    segs = []
    seen = set()
    for u, v in topology.edges:
        ru, rv = uf.find(u), uf.find(v)
        if ru == rv or dist(final[u], final[v]) < tol:
            continue
        key = (min(ru, rv), max(ru, rv))
        if key in seen:
            continue
        seen.add(key)
        segs.append((final[ru], final[rv]))
    steiner = sorted({final[r] for r in {uf.find(k) for k in range(n, len(pos))} if r >= n})
    length = math.fsum(dist(a, b) for a, b in segs)
    return SteinerSolution(terms, segs, length, topology, steiner, sweeps)


def optimize_topology(
    topology: SteinerTopology,
    terminals: Sequence[Sequence[float]],
    tol: float = TOL_GEOM,
    max_iter: int = MAX_ITER,
    init: Sequence[Sequence[float]] | None = None,
    history: list | None = None,
    polish_tol: float = POLISH_TOL,
) -> SteinerSolution:
    """Locally optimal embedding of ``topology``.

    Steiner points (or contracted clusters of them) are moved one at a time
    to the Fermat point, or geometric median for merged clusters, of their
    neighbours, until the largest move in a sweep is below ``tol``.  Edges
    shorter than ``tol`` are contracted, and a cluster containing a terminal
    stays put.  Convergence towards a contraction is slow when the limiting
    angle is exactly 120 degrees, so edges left shorter than ``polish_tol``
    are then contracted and the descent rerun; the contraction is kept only
    if the tree does not get longer.  When ``history`` is given, the tree
    length after every sweep is appended to it.
    """
    terms = [as_point(p) for p in terminals]
    n = len(terms)
    if n != topology.n:
        raise SteinerError(f"topology is for {topology.n} terminals, got {n}")
    if n == 2:
        return SteinerSolution(terms, [(terms[0], terms[1])], dist(*terms), topology)
    start = np.asarray(init, float) if init is not None else _laplacian_init(topology, np.asarray(terms))
    pos: list[Point] = terms + [tuple(map(float, p)) for p in start]
    uf = _UnionFind(len(pos))
    edges = list(topology.edges)
    sweeps = _descend(n, edges, pos, uf, tol, tol, max_iter, history)
    sol = _assemble(topology, terms, pos, uf, tol, sweeps)
    if sol.segments and min(dist(a, b) for a, b in sol.segments) < polish_tol:
        pos2 = list(pos)
        uf2 = _UnionFind(len(pos))
        uf2.parent = list(uf.parent)
        sweeps += _descend(n, edges, pos2, uf2, tol, polish_tol, max_iter, None)
        polished = _assemble(topology, terms, pos2, uf2, tol, sweeps)
        if polished.length <= sol.length + tol:
            sol = polished
    return sol


def _screen(topologies: list[SteinerTopology], terminals: np.ndarray, tol: float, sweeps: int) -> np.ndarray:
    """Vectorized Gauss-Seidel Fermat sweeps over many topologies; returns their lengths."""
    n = terminals.shape[0]
    s = n - 2
    T = len(topologies)
    nbr = np.zeros((T, s, 3), dtype=int)
    for t, topo in enumerate(topologies):
        adj = topo.adjacency()
        for k in range(s):
            nbr[t, k] = adj[n + k]
    X = np.zeros((T, n + s, 2))
    X[:, :n] = terminals
    for t, topo in enumerate(topologies):
        X[t, n:] = _laplacian_init(topo, terminals)
    rows = np.arange(T)
    active = np.ones(T, dtype=bool)
    for _ in range(sweeps):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        moved = np.zeros(idx.size)
        for k in range(s):
            A = X[idx, nbr[idx, k, 0]]
            B = X[idx, nbr[idx, k, 1]]
            C = X[idx, nbr[idx, k, 2]]
            new = _fermat_batch(A, B, C, tol)
            step = new - X[idx, n + k]
            moved = np.maximum(moved, np.hypot(step[:, 0], step[:, 1]))
            X[idx, n + k] = new
        active[idx[moved < tol]] = False
    lengths = np.zeros(T)
    for t, topo in enumerate(topologies):
        e = np.array(topo.edges)
        lengths[t] = np.linalg.norm(X[t, e[:, 0]] - X[t, e[:, 1]], axis=1).sum()
    del rows
    return lengths


def _fermat_batch(A: np.ndarray, B: np.ndarray, C: np.ndarray, tol: float) -> np.ndarray:
    P = np.stack([A, B, C], axis=1)
    out = np.empty_like(A)
    done = np.zeros(A.shape[0], dtype=bool)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        diff = P[:, i] - P[:, j]
        hit = ~done & (np.hypot(diff[:, 0], diff[:, 1]) <= tol)
        out[hit] = P[hit, i]
        done |= hit
    cos = np.zeros((A.shape[0], 3))
    opp = np.zeros((A.shape[0], 3))
    with np.errstate(invalid="ignore", divide="ignore"):
        for i in range(3):
            p, q, r = P[:, i], P[:, (i + 1) % 3], P[:, (i + 2) % 3]
            u, v = q - p, r - p
            cos[:, i] = (u[:, 0] * v[:, 0] + u[:, 1] * v[:, 1]) / (
                np.hypot(u[:, 0], u[:, 1]) * np.hypot(v[:, 0], v[:, 1])
            )
            opp[:, i] = np.hypot(q[:, 0] - r[:, 0], q[:, 1] - r[:, 1])
        for i in range(3):
            hit = ~done & (cos[:, i] <= _COS120)
            out[hit] = P[hit, i]
            done |= hit
        ang = np.arccos(np.clip(cos, -1.0, 1.0))
        w = opp / np.sin(ang + np.pi / 3)
        interior = (w[:, :, None] * P).sum(1) / w.sum(1)[:, None]
    out[~done] = interior[~done]
    return out


def _check_terminals(terminals) -> list[Point]:
    terms = [as_point(p) for p in terminals]
    if any(len(p) != 2 for p in terms):
        raise SteinerError("the Steiner solver works in the plane (d = 2)")
    if not 2 <= len(terms) <= MAX_TERMINALS:
        raise SteinerError(f"need 2 <= n <= {MAX_TERMINALS} terminals, got {len(terms)}")
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            if dist(terms[i], terms[j]) <= TOL_GEOM:
                raise SteinerError(f"duplicate terminals p_{i + 1} and p_{j + 1}")
    return terms


def steiner_optima(
    terminals: Sequence[Sequence[float]],
    tol: float = TOL_GEOM,
    tie_tol: float = 1e-8,
    screen_sweeps: int = 300,
    refine_margin: float = 0.02,
) -> list[SteinerSolution]:
    """Every distinct Steiner minimal tree (within ``tie_tol`` relative length), best first."""
    terms = _check_terminals(terminals)
    n = len(terms)
    if n == 2:
        return [SteinerSolution(terms, [(terms[0], terms[1])], dist(*terms), None)]
    topologies = enumerate_topologies(n)
    screened = _screen(topologies, np.asarray(terms), tol, screen_sweeps)
    cutoff = screened.min() * (1 + refine_margin)
    order = sorted((i for i in range(len(topologies)) if screened[i] <= cutoff), key=lambda i: (screened[i], i))
    refined = [optimize_topology(topologies[i], terms, tol) for i in order]
    refined.sort(key=lambda sol: sol.length)
    best = refined[0].length
    optima: list[SteinerSolution] = []
    for sol in refined:
        if sol.length > best * (1 + tie_tol) + tie_tol:
            break
        if not any(sol.same_tree(o) for o in optima):
            optima.append(sol)
    return optima


def solve_steiner(terminals: Sequence[Sequence[float]], tol: float = TOL_GEOM) -> SteinerSolution:
    return steiner_optima(terminals, tol)[0]


def mst_length(points: Sequence[Sequence[float]]) -> float:
    return math.fsum(dist(a, b) for a, b in mst_edges(points))


def mst_edges(points: Sequence[Sequence[float]]) -> list[tuple[Point, Point]]:
    """Prim's algorithm on the complete Euclidean graph."""
    pts = [as_point(p) for p in points]
    if len(pts) < 2:
        return []
    in_tree = {0}
    best = {k: (dist(pts[0], pts[k]), 0) for k in range(1, len(pts))}
    out = []
    while best:
        k = min(best, key=lambda q: (best[q][0], q))
        _, par = best.pop(k)
        in_tree.add(k)
        out.append((pts[par], pts[k]))
        for q in best:
            d = dist(pts[k], pts[q])
            if d < best[q][0]:
                best[q] = (d, k)
    return out


def steiner_angles_ok(sol: SteinerSolution, tol_angle: float = TOL_ANGLE) -> bool:
    """Every Steiner point has degree 3 with pairwise 120 degree angles."""
    terms = set(sol.terminals)
    incident: dict[Point, list[Point]] = {}
    for a, b in sol.segments:
        incident.setdefault(a, []).append(b)
        incident.setdefault(b, []).append(a)
    for p, qs in incident.items():
        if p in terms:
            continue
        if len(qs) != 3:
            return False
        units = []
        for q in qs:
            ell = dist(p, q)
            units.append(((q[0] - p[0]) / ell, (q[1] - p[1]) / ell))
        for i in range(3):
            for j in range(i + 1, 3):
                dot = units[i][0] * units[j][0] + units[i][1] * units[j][1]
                if abs(dot - _COS120) > tol_angle:
                    return False
    return True


# -- Steiner trees as mass minimizers ----------------------------------------------


@dataclass
class EquivalenceReport:
    n: int
    length: float
    mass: float
    mst_length: float
    competitors: int
    min_competitor_mass: float
    kinds: dict[str, int]
    current: PolyCurrent = field(repr=False)
    passed: bool = True

    def to_dict(self):
        return {
            "n": self.n,
            "length": self.length,
            "mass": self.mass,
            "mst_length": self.mst_length,
            "competitors": self.competitors,
            "min_competitor_mass": self.min_competitor_mass,
            "competitor_kinds": dict(self.kinds),
            "passed": self.passed,
        }


def _random_tree_edges(k: int, rng: random.Random) -> list[tuple[int, int]]:
    """Uniform random labelled tree on ``k`` vertices via a Pruefer sequence."""
    if k == 1:
        return []
    if k == 2:
        return [(0, 1)]
    seq = [rng.randrange(k) for _ in range(k - 2)]
    degree = [1] * k
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(k) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(k) if degree[i] == 1]
    edges.append((u, v))
    return edges


def competitor_trees(
    terminals: Sequence[Sequence[float]],
    solution: SteinerSolution,
    count: int = 100,
    seed: int = 0,
) -> list[tuple[str, list[tuple[Point, Point]]]]:
    """Connected trees through all terminals: the MST, random trees on random extra vertices, perturbed solutions."""
    rng = random.Random(seed)
    terms = [as_point(p) for p in terminals]
    xs = [p[0] for p in terms]
    ys = [p[1] for p in terms]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    out = [("mst", mst_edges(terms))]
    while len(out) < count:
        kind = len(out) % 3
        if kind == 1:
            extra = [
                (rng.uniform(min(xs), max(xs)), rng.uniform(min(ys), max(ys))) for _ in range(rng.randint(0, 3))
            ]
            pts = terms + extra
            segs = [(pts[a], pts[b]) for a, b in _random_tree_edges(len(pts), rng)]
            # a straight edge running through another vertex would close a cycle
            if any(_interior_param(p, a, b, TOL_GEOM) is not None for p in pts for a, b in segs):
                continue
            out.append(("random_tree", segs))
        else:
            sigma = span * rng.choice((1e-3, 1e-2, 1e-1))
            moved = {p: (p[0] + rng.gauss(0, sigma), p[1] + rng.gauss(0, sigma)) for p in solution.steiner_points}
            segs = [(moved.get(a, a), moved.get(b, b)) for a, b in solution.segments]
            out.append(("perturbed", segs))
    return out


def equivalence_check(
    terminals: Sequence[Sequence[float]],
    competitors: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
    solution: SteinerSolution | None = None,
) -> EquivalenceReport:
    """Mass of the canonical current on the solver tree equals its length and beats every competitor.

    Raises :class:`EquivalenceError` (carrying the offending competitor) if
    either assertion fails.
    """
    terms = _check_terminals(terminals)
    sol = solution if solution is not None else solve_steiner(terms)
    setup = GroupSetup(len(terms))
    T = canonical_current(setup, sol.segments, terms)
    m = mass(T)
    if abs(m - sol.length) > tol * max(1.0, sol.length):
        raise EquivalenceError(f"canonical mass {m!r} differs from tree length {sol.length!r}", witness=T)
    kinds: dict[str, int] = {}
    best = math.inf
    for kind, segs in competitor_trees(terms, sol, competitors, seed):
        C = canonical_current(setup, segs, terms)
        mc = mass(C)
        kinds[kind] = kinds.get(kind, 0) + 1
        best = min(best, mc)
        if mc < m - tol * max(1.0, m):
            raise EquivalenceError(f"{kind} competitor has mass {mc!r} < {m!r}", witness=segs)
    return EquivalenceReport(len(terms), sol.length, m, mst_length(terms), competitors, best, kinds, T)
