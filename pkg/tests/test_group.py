import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsteiner.group import (
    DimensionError,
    GroupElement,
    GroupSetup,
    check_axioms,
    extreme_points,
    norm_E,
    norm_Estar,
    pair,
)
from oracles import dual_norm_by_vertices, norm_via_representative, unit_ball_vertices

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def vec(n):
    return st.lists(rationals, min_size=n - 1, max_size=n - 1)


# -- generators and arithmetic ---------------------------------------------------


def test_generators_sum_to_zero():
    for n in range(2, 9):
        s = GroupSetup(n)
        assert sum(s.generators(), s.zero()).is_zero()
        assert s.g(n) == GroupElement([-1] * (n - 1))


def test_biorthonormal_pairing():
    s = GroupSetup(5)
    for i in range(1, 5):
        for j in range(1, 5):
            assert pair(s.h(i), s.g(j)) == (1 if i == j else 0)


def test_group_element_arithmetic():
    a, b = GroupElement([1, -2]), GroupElement([3, 4])
    assert a + b == GroupElement([4, 2])
    assert a - b == GroupElement([-2, -6])
    assert -a == GroupElement([-1, 2])
    assert 3 * a == a * 3 == GroupElement([3, -6])
    assert GroupElement([Fraction(2), 2.0]) == GroupElement([2, 2])
    with pytest.raises(ValueError):
        GroupElement([Fraction(1, 2)])
    with pytest.raises(DimensionError):
        a + GroupElement([1, 2, 3])


def test_bad_setup_and_indices():
    with pytest.raises(ValueError):
        GroupSetup(1)
    s = GroupSetup(3)
    with pytest.raises(IndexError):
        s.g(4)
    with pytest.raises(IndexError):
        s.h(3)
    with pytest.raises(DimensionError):
        s.norm([1, 2, 3])


# -- norms ----------------------------------------------------------------------


def test_norm_examples():
    s = GroupSetup(3)
    assert s.norm([1, 0]) == 1
    assert s.norm([1, 1]) == 1  # g1 + g2 = -g3
    assert s.norm([1, -1]) == 2
    assert s.norm([-1, -1]) == 1
    assert s.norm([2, 1]) == 2
    assert s.norm([0, 0]) == 0
    assert norm_E(GroupSetup(2), [-3]) == 3


def test_dual_norm_examples():
    s = GroupSetup(4)
    assert s.dual_norm([1, 1, 1]) == 3
    assert s.dual_norm([1, -1, 0]) == 1
    assert s.dual_norm([2, -1, -3]) == 4
    assert norm_Estar(s, [Fraction(1, 2), Fraction(-1, 3), 0]) == Fraction(1, 2)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.just(n), vec(n), rationals)))
def test_norm_matches_representative_seminorm(args):
    n, v, shift = args
    assert GroupSetup(n).norm(v) == norm_via_representative(v, shift)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), vec(n))))
def test_dual_norm_matches_vertex_maximum(args):
    n, w = args
    assert GroupSetup(n).dual_norm(w) == dual_norm_by_vertices(w, n - 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), vec(n), vec(n))))
def test_norm_is_a_norm(args):
    n, u, v = args
    s = GroupSetup(n)
    assert s.norm([a + b for a, b in zip(u, v)]) <= s.norm(u) + s.norm(v)
    assert s.norm([-a for a in u]) == s.norm(u)
    assert s.norm([3 * a for a in u]) == 3 * s.norm(u)
    assert (s.norm(u) == 0) == all(a == 0 for a in u)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), vec(n), vec(n))))
def test_dual_pairing_bounded_by_norms(args):
    n, w, v = args
    s = GroupSetup(n)
    assert abs(pair(w, v)) <= s.dual_norm(w) * s.norm(v)


# -- extreme points -------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_extreme_points_match_halfspace_vertices(n):
    s = GroupSetup(n)
    ours = {tuple(g) for g in extreme_points(s)}
    assert len(ours) == 2 * (2 ** (n - 1) - 1)
    assert ours == unit_ball_vertices(n - 1)
    assert all(s.norm(g) == 1 for g in ours)


def test_extreme_points_cached():
    s = GroupSetup(4)
    assert s.extreme_points() is s.extreme_points()


# -- axioms -----------------------------------------------------------------------


@pytest.mark.parametrize("n", range(2, 8))
def test_axioms_hold(n):
    rep = check_axioms(GroupSetup(n), samples=300, seed=n)
    assert rep.passed, str(rep)
    assert set(rep.checked) == {"P1", "P2", "P3", "P4"}
    assert rep.checked["P2"] == 2 ** (n - 1) - 1


def test_axioms_detect_a_broken_norm():
    class Euclid(GroupSetup):
        def norm(self, v):
            return sum(Fraction(x) ** 2 for x in v)

    rep = check_axioms(Euclid(3))
    assert not rep.passed and rep.failure == "P2"
    assert "violated" in str(rep)


def test_truncation_property_exhaustive_small():
    s = GroupSetup(4)
    for theta in itertools.product(range(-2, 3), repeat=3):
        for trunc in itertools.product(*(range(min(0, t), max(0, t) + 1) for t in theta)):
            assert s.norm(trunc) <= s.norm(theta)


def test_check_axioms_rejects_bad_samples():
    with pytest.raises(ValueError):
        check_axioms(GroupSetup(3), samples=0)
