"""The ten acceptance criteria, each at its stated tolerance and time limit.

Every criterion prints one ``criterion N PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary.
"""

import math
import random
from fractions import Fraction

import pytest

from gsteiner.calibration import (
    HEXAGON_TERMINALS,
    SQUARE_POINTS,
    TRIANGLE_POINTS,
    builtin_form,
    comass_witness,
    verify_calibration,
)
from gsteiner.cli import SQUARE_BOUNDARY, plan_components
from gsteiner.currents import PolyCurrent, boundary, canonical_current, component_mass, decompose, mass
from gsteiner.flows import (
    ClassicalBoundary,
    SegmentPlan,
    graph_min_mass,
    homogeneity_failure_graph,
    homogeneity_scan,
    integerize,
    single_edge_graph,
    transport_min,
    triangle_graph,
)
from gsteiner.group import GroupSetup, check_axioms
from gsteiner.steiner import equivalence_check, steiner_optima
from oracles import integer_transport_min, norm_via_representative, star_seminorm, unit_ball_vertices

SQ3 = math.sqrt(3)
HEXAGON_CENTRE = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)] + [(0.0, 0.0)]


def rand_fraction(rng):
    return Fraction(rng.randint(-50, 50), rng.randint(1, 12))


def test_criterion_01_norm_closed_forms(verdict):
    with verdict(1, "norm_E / norm_E* closed forms equal brute-force oracles exactly", limit=5):
        rng = random.Random(1)
        for n in range(2, 8):
            setup = GroupSetup(n)
            verts = [tuple(Fraction(x) for x in v) for v in unit_ball_vertices(n - 1)]
            for _ in range(1000):
                v = [rand_fraction(rng) for _ in range(n - 1)]
                assert setup.norm(v) == norm_via_representative(v)
                w = [rand_fraction(rng) for _ in range(n - 1)]
                assert setup.dual_norm(w) == max(abs(sum(a * b for a, b in zip(w, u))) for u in verts)
        assert star_seminorm([0, 1]) == 1


def test_criterion_02_axioms(verdict):
    with verdict(2, "properties (P1)-(P4) for n = 2..7", limit=5):
        for n in range(2, 8):
            rep = check_axioms(GroupSetup(n))
            assert rep.passed, str(rep)


def test_criterion_03_steiner_values(verdict):
    with verdict(3, "triangle = 3, square = 2 + 2 sqrt 3 with both optimal trees", limit=2):
        import time

        t0 = time.perf_counter()
        tri = steiner_optima(TRIANGLE_POINTS)
        assert time.perf_counter() - t0 < 1
        assert abs(tri[0].length - 3) <= 1e-9
        t0 = time.perf_counter()
        sq = steiner_optima(SQUARE_POINTS)
        assert time.perf_counter() - t0 < 1
        assert len(sq) == 2 and not sq[0].same_tree(sq[1])
        for sol in sq:
            assert abs(sol.length - (2 + 2 * SQ3)) <= 1e-9


def test_criterion_04_equivalence(verdict):
    with verdict(4, "canonical mass = tree length; 100 competitors never beat it", limit=30):
        for pts in (TRIANGLE_POINTS, SQUARE_POINTS, HEXAGON_CENTRE):
            rep = equivalence_check(pts, competitors=100, seed=0, tol=1e-9)
            assert abs(rep.mass - rep.length) <= 1e-9
            assert rep.competitors == 100 and sum(rep.kinds.values()) == 100
            assert rep.min_competitor_mass >= rep.mass - 1e-9


def test_criterion_05_calibration_certificates(verdict):
    with verdict(5, "triangle, square (T_hor and T_ver), hexagon7 certificates", limit=5):
        cases = [("triangle", TRIANGLE_POINTS), ("square", SQUARE_POINTS), ("hexagon7", HEXAGON_TERMINALS)]
        for name, pts in cases:
            form = builtin_form(name)
            optima = steiner_optima(pts)
            if name == "square":
                assert len(optima) == 2
            for sol in optima:
                T = canonical_current(GroupSetup(len(pts)), sol.segments, pts)
                cert = verify_calibration(form, T, tol=1e-7)
                assert cert.passed
                for rep in cert.condition_reports:
                    assert rep.max_residual < 1e-7


def test_criterion_06_comass_exactness(verdict):
    with verdict(6, "triangle comass = 1 within 1e-12 at an extreme point"):
        form = builtin_form("triangle")
        value, g, tau = comass_witness(form.setup, form.cells[0].omega)
        assert abs(value - 1) <= 1e-12
        assert g in form.setup.extreme_points()
        # the family of bounds |sin(alpha + pi/6)| <= 1 and |cos alpha| <= 1 is attained
        assert abs(math.hypot(*tau) - 1) <= 1e-12


def random_boundary(rng):
    m, k = rng.randint(1, 5), rng.randint(1, 5)
    total = rng.randint(max(m, k), max(m, k) + 2)

    def split(parts):
        cuts = sorted(rng.sample(range(1, total), parts - 1)) if parts > 1 else []
        return [b - a for a, b in zip([0] + cuts, cuts + [total])]

    pt = lambda: (rng.uniform(-5, 5), rng.uniform(-5, 5))
    return ClassicalBoundary([(pt(), a) for a in split(m)], [(pt(), b) for b in split(k)])


def test_criterion_07_classical_equivalence(verdict):
    with verdict(7, "real transport minimum = exhaustive integer minimum on 50 boundaries", limit=60):
        rng = random.Random(7)
        for _ in range(50):
            B = random_boundary(rng)
            value, plan = transport_min(B)
            oracle = integer_transport_min(B.a, B.b, B.cost())
            integral = integerize(plan)
            assert integral.is_integral() and integral.is_feasible()
            assert abs(value - oracle) <= 1e-9 * max(1.0, oracle)
            assert abs(integral.mass() - oracle) <= 1e-9 * max(1.0, oracle)
            assert integral.mass() <= plan.mass() + 1e-9
            # a fractional input (mix of the optimum and another feasible plan) is never made heavier
            uniform = SegmentPlan(B, {(i, j): Fraction(a * b, sum(B.b)) for i, a in enumerate(B.a) for j, b in enumerate(B.b)})
            assert uniform.is_feasible()
            mixed = SegmentPlan(B, {ij: (plan.weights.get(ij, 0) + uniform.weights.get(ij, 0)) / 2 for ij in uniform.weights})
            out = integerize(mixed)
            assert out.is_integral() and out.mass() <= mixed.mass() + 1e-9


def test_criterion_08_homogeneity_failure(verdict):
    with verdict(8, "M(R) = 12 and M(2R) = 23 < 24 exactly; subadditivity on all scans", limit=120):
        g = homogeneity_failure_graph()
        assert len(g.edges) <= 15
        m1, c1 = graph_min_mass(g, 1)
        m2, c2 = graph_min_mass(g, 2)
        assert isinstance(m1, Fraction) and isinstance(m2, Fraction)
        assert m1 == 12 and m2 <= 23 and m2 < 2 * m1
        assert c1.boundary() == g.boundary(1) and c2.boundary() == g.boundary(2)
        for graph, kmax in ((g, 3), (triangle_graph(), 3), (single_edge_graph(), 3)):
            for row in homogeneity_scan(graph, kmax):
                assert row.value <= row.linear


def random_current(rng):
    n = rng.randint(2, 5)
    setup = GroupSetup(n)
    grid = [(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(rng.randint(3, 10))]
    segs = []
    for _ in range(rng.randint(1, 30)):
        a, b = rng.sample(grid, 2)
        segs.append((a, b, [rng.randint(-3, 3) for _ in range(n - 1)]))
    return PolyCurrent(setup, segs)


def test_criterion_09_decomposition(verdict):
    with verdict(9, "decompose reassembles 100 random currents; masses additive; cycles closed", limit=10):
        rng = random.Random(9)
        for _ in range(100):
            T = random_current(rng)
            dec = decompose(T)
            assert dec.total(T.setup) == T
            for c in dec.cycles:
                assert len(boundary(c)) == 0
            for j in range(1, T.setup.n):
                edges = {(a, b): c for a, b, c in T.component(j)}
                acc = {}
                parts = [p for p, (jj, _) in zip(dec.parts(), dec.path_info + dec.cycle_info) if jj == j]
                for p in parts:
                    for a, b, c in p.component(j):
                        assert (a, b) in edges and c * edges[(a, b)] > 0  # conformal: same direction
                        acc[(a, b)] = acc.get((a, b), 0) + c
                assert acc == edges  # integer multiplicities add up exactly
                total = math.fsum(component_mass(p, j) for p in parts)
                assert abs(total - component_mass(T, j)) <= 1e-9 * max(1.0, component_mass(T, j))


def test_criterion_10_disconnected_integer_minimizer(verdict):
    with verdict(10, "square alternating boundary: integer minimum 4 < Steiner 2 + 2 sqrt 3, disconnected"):
        value, plan = transport_min(SQUARE_BOUNDARY)
        integral = integerize(plan)
        steiner = steiner_optima([p for p, _ in SQUARE_BOUNDARY.sources + SQUARE_BOUNDARY.sinks])[0].length
        assert abs(value - 4) <= 1e-9 and abs(integral.mass() - 4) <= 1e-9
        assert abs(steiner - (2 + 2 * SQ3)) <= 1e-9
        assert integral.mass() < steiner
        assert plan_components(SQUARE_BOUNDARY, integral) == 2
