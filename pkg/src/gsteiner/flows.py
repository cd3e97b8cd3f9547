"""Classical 1-currents with real versus integer weights, and G-currents on metric graphs.

Two halves:

* transport baseline: a balanced boundary ``-sum a_i delta_{x_i} + sum b_j
  delta_{y_j}`` is joined by weighted segments ``x_i -> y_j``; the cheapest
  real plan is a transport problem, and :func:`integerize` rounds any
  fractional plan to an integral one with the same marginals and no larger
  mass by cancelling alternating cycles;
* metric graphs: exact minimization of ``sum_e len(e) ||theta(e)||_E`` over
  integer edge multiplicities with boundary ``k R``, by branch-and-bound.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from .group import GroupElement, GroupSetup

MAX_NODES = 10_000_000


class FlowError(ValueError):
    pass


class ResourceCapError(RuntimeError):
    pass


# -- transport baseline ----------------------------------------------------------


@dataclass
class ClassicalBoundary:
    sources: list[tuple[tuple[float, ...], int]]
    sinks: list[tuple[tuple[float, ...], int]]

    def __post_init__(self):
        self.sources = [(tuple(map(float, p)), int(a)) for p, a in self.sources]
        self.sinks = [(tuple(map(float, p)), int(b)) for p, b in self.sinks]
        if any(a <= 0 for _, a in self.sources) or any(b <= 0 for _, b in self.sinks):
            raise FlowError("source and sink multiplicities must be positive integers")
        if sum(a for _, a in self.sources) != sum(b for _, b in self.sinks):
            raise FlowError("unbalanced boundary: total source and sink multiplicities differ")

    @property
    def a(self) -> list[int]:
        return [a for _, a in self.sources]

    @property
    def b(self) -> list[int]:
        return [b for _, b in self.sinks]

    def cost(self) -> list[list[float]]:
        return [[math.dist(x, y) for y, _ in self.sinks] for x, _ in self.sources]


@dataclass
class SegmentPlan:
    """Weights ``k^{ij}`` on the oriented segments ``x_i -> y_j``."""

    boundary: ClassicalBoundary
    weights: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.weights = {ij: Fraction(w) for ij, w in self.weights.items() if w != 0}

    def mass(self) -> float:
        C = self.boundary.cost()
        return math.fsum(float(w) * C[i][j] for (i, j), w in self.weights.items())

    def row_sums(self) -> list[Fraction]:
        out = [Fraction(0)] * len(self.boundary.sources)
        for (i, _), w in self.weights.items():
            out[i] += w
        return out

    def col_sums(self) -> list[Fraction]:
        out = [Fraction(0)] * len(self.boundary.sinks)
        for (_, j), w in self.weights.items():
            out[j] += w
        return out

    def is_feasible(self) -> bool:
        return (
            all(w >= 0 for w in self.weights.values())
            and self.row_sums() == [Fraction(a) for a in self.boundary.a]
            and self.col_sums() == [Fraction(b) for b in self.boundary.b]
        )

    def is_integral(self) -> bool:
        return all(w.denominator == 1 for w in self.weights.values())

    def matrix(self) -> list[list[Fraction]]:
        m = [[Fraction(0)] * len(self.boundary.sinks) for _ in self.boundary.sources]
        for (i, j), w in self.weights.items():
            m[i][j] = w
        return m


def transport_min(B: ClassicalBoundary) -> tuple[float, SegmentPlan]:
    """Cheapest real plan joining sources to sinks by straight segments."""
    C = np.asarray(B.cost(), float)
    m, k = C.shape
    A_eq = np.zeros((m + k, m * k))
    for i in range(m):
        A_eq[i, i * k:(i + 1) * k] = 1
    for j in range(k):
        A_eq[m + j, j::k] = 1
    b_eq = np.array(B.a + B.b, float)
    res = linprog(C.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise FlowError(f"transport LP failed: {res.message}")
    weights = {}
    for idx, x in enumerate(res.x):
        r = round(x)
        w = Fraction(r) if abs(x - r) < 1e-9 else Fraction(x).limit_denominator(10**6)
        if w:
            weights[(idx // k, idx % k)] = w
    plan = SegmentPlan(B, weights)
    if not plan.is_feasible():
        raise FlowError("LP returned a plan whose marginals cannot be recovered exactly")
    return plan.mass(), plan


def _alternating_cycle(frac, start):
    """Cells of an even alternating cycle ``forward, backward, forward, ...``."""
    by_row = defaultdict(list)
    by_col = defaultdict(list)
    for i, j in sorted(frac):
        by_row[i].append(j)
        by_col[j].append(i)
    walk = [start]
    visited_rows = {start[0]: 0}
    i, j = start
    while True:
        i2 = next(r for r in by_col[j] if r != i)
        walk.append((i2, j))
        if i2 in visited_rows:
            pos = visited_rows[i2]
            # walk[pos] is the forward cell leaving row i2; the segment from there
            # back to row i2 closes an alternating cycle
            return walk[pos:]
        j2 = next(c for c in by_row[i2] if c != j)
        visited_rows[i2] = len(walk)
        walk.append((i2, j2))
        i, j = i2, j2


def integerize(plan: SegmentPlan, log: list | None = None) -> SegmentPlan:
    """Integral plan with the same marginals and no larger mass.

    Repeatedly finds a cycle ``Q = sum_l (S^{i_l j_l} - S^{i_{l+1} j_l})``
    through fractional weights and moves along it to ``Q - alpha Q`` or
    ``Q + beta Q``, whichever does not increase the mass.  Each move makes
    at least one more weight integral.
    """
    if not plan.is_feasible():
        raise FlowError("integerize needs a feasible plan")
    C = plan.boundary.cost()
    w = dict(plan.weights)
    while True:
        frac = {ij: v for ij, v in w.items() if v.denominator != 1}
        if not frac:
            break
        cyc = _alternating_cycle(frac, min(frac))
        fwd, bwd = cyc[0::2], cyc[1::2]
        alpha = min(w[c] - math.floor(w[c]) for c in fwd)
        beta = min(w[c] - math.floor(w[c]) for c in bwd)
        slope = math.fsum(C[i][j] for i, j in fwd) - math.fsum(C[i][j] for i, j in bwd)
        # F(t) = M(Q) - M(Q - t cycle) = t * slope
        if alpha * slope >= 0:
            step, chosen = -alpha, "alpha"
        else:
            step, chosen = beta, "beta"
        for c in fwd:
            w[c] += step
        for c in bwd:
            w[c] -= step
        w = {c: v for c, v in w.items() if v != 0}
        if log is not None:
            log.append({"cycle": cyc, "alpha": alpha, "beta": beta, "F_slope": slope, "move": chosen})
    return SegmentPlan(plan.boundary, w)


def integer_plans(a: Sequence[int], b: Sequence[int]):
    """Every nonnegative integer matrix with row sums ``a`` and column sums ``b``."""
    a, b = list(a), list(b)
    m, k = len(a), len(b)

    def rows(i, remaining):
        if i == m - 1:
            yield [list(remaining)]
            return
        for row in _compositions(a[i], remaining):
            rest = [r - x for r, x in zip(remaining, row)]
            for tail in rows(i + 1, rest):
                yield [row] + tail

    if sum(a) != sum(b):
        return
    yield from rows(0, b)


def _compositions(total, caps):
    if not caps:
        if total == 0:
            yield []
        return
    for x in range(min(total, caps[0]) + 1):
        for rest in _compositions(total - x, caps[1:]):
            yield [x] + rest


def exhaustive_integer_min(B: ClassicalBoundary) -> tuple[float, list[list[int]]]:
    C = B.cost()
    best, arg = math.inf, None
    for M in integer_plans(B.a, B.b):
        val = math.fsum(M[i][j] * C[i][j] for i in range(len(M)) for j in range(len(M[0])) if M[i][j])
        if val < best:
            best, arg = val, M
    return best, arg


# -- metric graphs ---------------------------------------------------------------


@dataclass
class MetricGraph:
    n: int
    vertices: list[str]
    edges: list[tuple[str, str, Fraction]]
    terminals: dict[str, GroupElement]
    pos: dict[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        self.setup = GroupSetup(self.n)
        self.edges = [(str(u), str(v), Fraction(ell)) for u, v, ell in self.edges]
        self.terminals = {str(v): self.setup.element(g) for v, g in self.terminals.items()}
        names = set(self.vertices)
        if len(names) != len(self.vertices):
            raise FlowError("duplicate vertex ids")
        for u, v, ell in self.edges:
            if u not in names or v not in names:
                raise FlowError(f"edge {u}-{v} uses an unknown vertex")
            if u == v:
                raise FlowError(f"loop edge at {u}")
            if ell <= 0:
                raise FlowError(f"edge {u}-{v} has non-positive length {ell}")
        for v in self.terminals:
            if v not in names:
                raise FlowError(f"terminal {v} is not a vertex")
        if not sum(self.terminals.values(), self.setup.zero()).is_zero():
            raise FlowError("terminal multiplicities do not sum to zero (boundary is not closed)")

    def boundary(self, k: int = 1) -> dict[str, GroupElement]:
        return {v: g * k for v, g in self.terminals.items()}


@dataclass
class GraphCurrent:
    """Multiplicity of every edge, oriented as in ``graph.edges``."""

    graph: MetricGraph
    theta: list[GroupElement]

    def mass(self) -> Fraction:
        norm = self.graph.setup.norm
        return sum((ell * norm(t) for (_, _, ell), t in zip(self.graph.edges, self.theta)), Fraction(0))

    def boundary(self) -> dict[str, GroupElement]:
        setup = self.graph.setup
        acc = {v: setup.zero() for v in self.graph.vertices}
        for (u, v, _), t in zip(self.graph.edges, self.theta):
            acc[v] = acc[v] + t
            acc[u] = acc[u] - t
        return {v: g for v, g in acc.items() if not g.is_zero()}

    def support(self) -> list[tuple[str, str, GroupElement]]:
        return [(u, v, t) for (u, v, _), t in zip(self.graph.edges, self.theta) if not t.is_zero()]


@dataclass
class _Reduced:
    """Edge flows as ``base + sum_c x_c * cycle_c`` over the cotree edges."""

    tree: list[int]
    cotree: list[int]
    base: np.ndarray  # (edges, dim) integer flow meeting the boundary
    cycles: np.ndarray  # (cotree, edges) in {-1, 0, 1}


def _reduce(g: MetricGraph, k: int) -> _Reduced:
    dim = g.setup.dim
    idx = {v: i for i, v in enumerate(g.vertices)}
    m = len(g.edges)
    # spanning forest preferring short edges, so the long edges are branched on first
    order = sorted(range(m), key=lambda e: (g.edges[e][2], e))
    parent = list(range(len(g.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree, cotree = [], []
    for e in order:
        u, v = idx[g.edges[e][0]], idx[g.edges[e][1]]
        ru, rv = find(u), find(v)
        if ru == rv:
            cotree.append(e)
        else:
            parent[ru] = rv
            tree.append(e)
    adj = defaultdict(list)
    for e in tree:
        u, v = idx[g.edges[e][0]], idx[g.edges[e][1]]
        adj[u].append((v, e, +1))
        adj[v].append((u, e, -1))
    # root every tree component, record the edge to the parent
    up: dict[int, tuple[int, int, int] | None] = {}
    order_v = []
    depth = {}
    for r in range(len(g.vertices)):
        if r in up:
            continue
        up[r] = None
        depth[r] = 0
        q = deque([r])
        while q:
            x = q.popleft()
            order_v.append(x)
            for y, e, sgn in adj[x]:
                if y not in up:
                    up[y] = (x, e, sgn)
                    depth[y] = depth[x] + 1
                    q.append(y)
    demand = np.zeros((len(g.vertices), dim), dtype=np.int64)
    for v, t in g.boundary(k).items():
        demand[idx[v]] = t
    base = np.zeros((m, dim), dtype=np.int64)
    # leaves first: the flow on the parent edge must deliver the subtree's net demand
    subtree = demand.copy()
    for x in reversed(order_v):
        link = up[x]
        if link is None:
            if subtree[x].any():
                raise FlowError("boundary is not closed on a connected component of the graph")
            continue
        p, e, sgn = link
        # sgn = +1 when the edge is oriented p -> x; boundary at x gains +theta
        base[e] = sgn * subtree[x]
        subtree[p] += subtree[x]
    cycles = np.zeros((len(cotree), m), dtype=np.int64)
    for c, e in enumerate(cotree):
        u, v = idx[g.edges[e][0]], idx[g.edges[e][1]]
        cycles[c, e] = 1
        # unit flow u -> v on e returns v -> u through the tree
        a, b = v, u
        while a != b:
            if depth[a] >= depth[b]:
                p, te, sgn = up[a]
                cycles[c, te] += -sgn  # move a -> p
                a = p
            else:
                p, te, sgn = up[b]
                cycles[c, te] += sgn  # move p -> b
                b = p
    return _Reduced(tree, cotree, base, cycles)


def _norm_rows(theta: np.ndarray) -> np.ndarray:
    return np.maximum(theta.max(axis=1), 0) - np.minimum(theta.min(axis=1), 0)


@dataclass
class SearchStats:
    nodes: int = 0
    lp_solves: int = 0
    flow_bounds: int = 0


class _BranchAndBound:
    def __init__(self, g: MetricGraph, k: int, max_nodes: int):
        self.g = g
        self.k = k
        self.max_nodes = max_nodes
        self.red = _reduce(g, k)
        self.dim = g.setup.dim
        self.lengths = [ell for _, _, ell in g.edges]
        self.flen = np.array([float(ell) for ell in self.lengths])
        self.scale = math.lcm(*(ell.denominator for ell in self.lengths)) if self.lengths else 1
        self.ilen = [int(ell * self.scale) for ell in self.lengths]
        # an optimal current exists whose every component is an acyclic flow, so no
        # edge carries more than the component's total supply
        bd = g.boundary(k)
        self.bound = [sum(max(t[j], 0) for t in bd.values()) for j in range(self.dim)]
        # branch on long cotree edges first
        self.order = sorted(range(len(self.red.cotree)), key=lambda c: (-self.lengths[self.red.cotree[c]], c))
        self.stats = SearchStats()
        self.best_value: Fraction | None = None
        self.best_theta: tuple | None = None

    # -- bounds ------------------------------------------------------------
    def _flows(self, fixed: dict[int, np.ndarray]) -> np.ndarray:
        theta = self.red.base.copy()
        for c, x in fixed.items():
            theta += np.outer(self.red.cycles[c], x)
        return theta

    def component_bound(self, fixed: dict[int, np.ndarray]) -> Fraction:
        """Fixed cotree cost plus the largest single-component min-cost flow on the rest."""
        self.stats.flow_bounds += 1
        red = self.red
        free_edges = set(red.tree) | {red.cotree[c] for c in range(len(red.cotree)) if c not in fixed}
        fixed_cost = sum(
            (self.lengths[red.cotree[c]] * self.g.setup.norm(x.tolist()) for c, x in fixed.items()), Fraction(0)
        )
        best = 0
        for j in range(self.dim):
            G = nx.DiGraph()
            dem = defaultdict(int)
            for v, t in self.g.boundary(self.k).items():
                dem[v] += int(t[j])
            for c, x in fixed.items():
                u, v, _ = self.g.edges[red.cotree[c]]
                dem[v] -= int(x[j])
                dem[u] += int(x[j])
            for v in self.g.vertices:
                G.add_node(v, demand=dem[v])
            for e in free_edges:
                u, v, _ = self.g.edges[e]
                for a, b in ((u, v), (v, u)):
                    if G.has_edge(a, b):
                        G[a][b]["weight"] = min(G[a][b]["weight"], self.ilen[e])
                    else:
                        G.add_edge(a, b, weight=self.ilen[e])
            try:
                cost = nx.min_cost_flow_cost(G)
            except nx.NetworkXUnfeasible:
                return Fraction(10**18)
            best = max(best, cost)
        return fixed_cost + Fraction(best, self.scale)

    def lp_bound(self, fixed: dict[int, np.ndarray]):
        """LP relaxation over the free cotree values; returns (value, relaxed values)."""
        self.stats.lp_solves += 1
        red = self.red
        free = [c for c in range(len(red.cotree)) if c not in fixed]
        theta0 = self._flows(fixed).astype(float)
        m, d, f = len(self.lengths), self.dim, len(free)
        if f == 0:
            return float(np.dot(self.flen, _norm_rows(theta0))), {}
        # variables: x (f*d), u (m), l (m); theta[e, j] = theta0[e, j] + sum_c cyc[c, e] x[c, j]
        nvar = f * d + 2 * m
        cost = np.concatenate([np.zeros(f * d), self.flen, -self.flen])
        rows, rhs = [], []
        cyc = red.cycles[free].astype(float)  # (f, m)
        for e in range(m):
            for j in range(d):
                # theta - u <= 0  and  l - theta <= 0
                r = np.zeros(nvar)
                r[j::d][:f] = cyc[:, e]
                r[f * d + e] = -1
                rows.append(r)
                rhs.append(-theta0[e, j])
                r2 = np.zeros(nvar)
                r2[j::d][:f] = -cyc[:, e]
                r2[f * d + m + e] = 1
                rows.append(r2)
                rhs.append(theta0[e, j])
        bounds = []
        for c in free:
            for j in range(d):
                bounds.append((-self.bound[j], self.bound[j]))
        bounds += [(0, None)] * m + [(None, 0)] * m
        res = linprog(cost, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs")
        if res.status != 0:
            return math.inf, {}
        xs = res.x[: f * d].reshape(f, d)
        return res.fun, {c: xs[i] for i, c in enumerate(free)}

    # -- search --------------------------------------------------------------
    def _leaf(self, fixed):
        theta = self._flows(fixed)
        value = sum(
            (ell * self.g.setup.norm(row) for ell, row in zip(self.lengths, theta.tolist())), Fraction(0)
        )
        key = tuple(tuple(r) for r in theta.tolist())
        if self.best_value is None or value < self.best_value or (value == self.best_value and key < self.best_theta):
            self.best_value, self.best_theta = value, key

    def _prunable(self, bound_value) -> bool:
        if self.best_value is None:
            return False
        slack = 1e-9 * max(1.0, float(self.best_value))
        return float(bound_value) > float(self.best_value) + slack

    def run(self):
        self._search({}, 0)
        if self.best_value is None:
            raise FlowError("no integer current with the requested boundary")
        theta = [GroupElement(r) for r in self.best_theta]
        return self.best_value, GraphCurrent(self.g, theta)

    def _search(self, fixed, depth):
        self.stats.nodes += 1
        if self.stats.nodes > self.max_nodes:
            raise ResourceCapError(f"branch-and-bound exceeded {self.max_nodes} nodes")
        if depth == len(self.order):
            self._leaf(fixed)
            return
        if fixed and self._prunable(self.component_bound(fixed)):
            return
        lp_value, relaxed = self.lp_bound(fixed)
        if self._prunable(lp_value):
            return
        c = self.order[depth]
        guess = relaxed.get(c, np.zeros(self.dim))
        choices = list(itertools.product(*(range(-b, b + 1) for b in self.bound)))
        choices.sort(key=lambda x: (sum(abs(xi - gi) for xi, gi in zip(x, guess)), x))
        for x in choices:
            fixed[c] = np.array(x, dtype=np.int64)
            self._search(fixed, depth + 1)
            del fixed[c]


def graph_min_mass(g: MetricGraph, k: int = 1, max_nodes: int = MAX_NODES, stats: SearchStats | None = None):
    """Exact minimum of ``sum_e len(e) ||theta(e)||_E`` over integer currents with boundary ``k R``.

    Returns ``(value, current)`` with ``value`` an exact Fraction; among
    optimal currents the lexicographically least edge multiplicity table is
    reported.
    """
    if k < 1:
        raise FlowError("scale k must be a positive integer")
    bb = _BranchAndBound(g, k, max_nodes)
    value, current = bb.run()
    if stats is not None:
        stats.nodes, stats.lp_solves, stats.flow_bounds = bb.stats.nodes, bb.stats.lp_solves, bb.stats.flow_bounds
    return value, current


@dataclass
class ScanRow:
    k: int
    value: Fraction
    linear: Fraction
    ratio: Fraction
    flagged: bool
    current: GraphCurrent | None = None

    def to_dict(self):
        return {
            "k": self.k,
            "M_k": _frac_str(self.value),
            "k_M_1": _frac_str(self.linear),
            "ratio": _frac_str(self.ratio),
            "M_k_float": float(self.value),
            "homogeneity_fails": self.flagged,
        }


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def homogeneity_scan(g: MetricGraph, kmax: int, max_nodes: int = MAX_NODES) -> list[ScanRow]:
    """``M(kR)`` against ``k M(R)`` for ``k = 1..kmax``; rows with ``M(kR) < k M(R)`` are flagged."""
    if kmax < 1:
        raise FlowError("kmax must be >= 1")
    rows = []
    m1 = None
    for k in range(1, kmax + 1):
        value, cur = graph_min_mass(g, k, max_nodes)
        if m1 is None:
            m1 = value
        linear = k * m1
        if value > linear:
            raise FlowError(f"subadditivity violated at k={k}: {value} > {linear}")
        ratio = value / linear if linear else Fraction(1)
        rows.append(ScanRow(k, value, linear, ratio, value < linear, cur))
    return rows


def brute_force_min_mass(g: MetricGraph, k: int = 1, limit: int | None = None) -> Fraction:
    """Exhaustive minimum over cotree multiplicities in ``[-limit, limit]`` (tiny graphs only)."""
    red = _reduce(g, k)
    setup = g.setup
    bd = g.boundary(k)
    if limit is None:
        limit = max(sum(max(t[j], 0) for t in bd.values()) for j in range(setup.dim))
    best = None
    vals = range(-limit, limit + 1)
    for combo in itertools.product(vals, repeat=len(red.cotree) * setup.dim):
        x = np.array(combo, dtype=np.int64).reshape(len(red.cotree), setup.dim)
        theta = red.base + red.cycles.T @ x
        value = sum((ell * setup.norm(r) for (_, _, ell), r in zip(g.edges, theta.tolist())), Fraction(0))
        if best is None or value < best:
            best = value
    return best


# -- built-in graphs ---------------------------------------------------------------


def triangle_graph() -> MetricGraph:
    """Unit triangle with ``g_1, g_2, g_3`` at the corners."""
    return MetricGraph(
        3,
        ["p1", "p2", "p3"],
        [("p1", "p2", 1), ("p2", "p3", 1), ("p3", "p1", 1)],
        {"p1": [1, 0], "p2": [0, 1], "p3": [-1, -1]},
        pos={"p1": (-1.0, 0.0), "p2": (1.0, 0.0), "p3": (0.0, 3**0.5)},
    )


def single_edge_graph(length=1) -> MetricGraph:
    return MetricGraph(2, ["p1", "p2"], [("p2", "p1", length)], {"p1": [1], "p2": [-1]},
                       pos={"p1": (0.0, 0.0), "p2": (float(length), 0.0)})


def homogeneity_failure_graph() -> MetricGraph:
    """Mirror-symmetric graph with ``M(R) = 12`` and ``M(2R) = 23``.

    Four terminals ``p1..p4`` carrying ``g_1..g_4`` and three branch points:
    ``s`` joins ``p1, p2, p4``; ``sL`` joins ``p1, p3, p4``; ``sR`` joins
    ``p2, p3, p4``.  The reflection ``p1 <-> p2``, ``sL <-> sR`` preserves
    all lengths.  A cheapest current for ``R`` is the star at ``s`` plus the
    path ``p1 - sL - p3`` (cost 12).  For ``2R`` every one of the nine edges
    carries a unit-norm multiplicity (total length 23): the doubled
    boundary is served by a current that is not the sum of two currents
    with boundary ``R``.
    """
    edges = [
        ("p1", "s", 2), ("p2", "s", 2), ("p4", "s", 3),
        ("p1", "sL", 2), ("p3", "sL", 3), ("p4", "sL", 3),
        ("p2", "sR", 2), ("p3", "sR", 3), ("p4", "sR", 3),
    ]
    pos = {
        "p1": (-4.0, 0.0), "p2": (4.0, 0.0), "s": (0.0, 0.0), "p4": (0.0, 2.5),
        "sL": (-3.0, 4.0), "sR": (3.0, 4.0), "p3": (0.0, 7.0),
    }
    return MetricGraph(
        4,
        ["p1", "p2", "p3", "p4", "s", "sL", "sR"],
        edges,
        {"p1": [1, 0, 0], "p2": [0, 1, 0], "p3": [0, 0, 1], "p4": [-1, -1, -1]},
        pos=pos,
    )


BUILTIN_GRAPHS = {
    "triangle": triangle_graph,
    "single_edge": single_edge_graph,
    "homogeneity_failure": homogeneity_failure_graph,
}


def builtin_graph(name: str) -> MetricGraph:
    try:
        return BUILTIN_GRAPHS[name]()
    except KeyError:
        raise FlowError(f"unknown built-in graph {name!r}; choose from {sorted(BUILTIN_GRAPHS)}") from None
