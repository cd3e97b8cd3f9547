"""The normed space E, the coefficient group G inside it, and its dual E*.

Everything is expressed in coordinates over the generators ``g_1..g_{n-1}``
(for E and G) and over the dual basis ``h_1..h_{n-1}`` (for E*).  In those
coordinates the norm of E has the closed form

    ||v||_E = max(v_1, ..., v_{n-1}, 0) - min(v_1, ..., v_{n-1}, 0)

and the dual norm is ``max(sum of positive parts, -sum of negative parts)``.
Arithmetic is exact whenever the inputs are ints or Fractions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """A vector does not have the n-1 coordinates the setup expects."""


class GroupElement(tuple):
    """Integer coefficient vector over ``g_1..g_{n-1}``.

    Immutable and hashable; supports ``+``, ``-``, negation and scaling by
    ints.
    """

    def __new__(cls, coeffs: Iterable[int]):
        vals = []
        for c in coeffs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"non-integer group coefficient {c}")
                c = c.numerator
            elif isinstance(c, float):
                if not c.is_integer():
                    raise ValueError(f"non-integer group coefficient {c}")
                c = int(c)
            vals.append(int(c))
        return super().__new__(cls, vals)

    def __add__(self, other):
        _same_len(self, other)
        return GroupElement(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _same_len(self, other)
        return GroupElement(a - b for a, b in zip(self, other))

    def __neg__(self):
        return GroupElement(-a for a in self)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return GroupElement(k * a for a in self)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self)

    def __repr__(self) -> str:
        return f"GroupElement({list(self)})"


def _same_len(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionError(f"length {len(a)} vs {len(b)}")


def to_evector(v: Iterable) -> tuple[Fraction, ...]:
    """Embed a group element (or any rational sequence) into E exactly."""
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class GroupSetup:
    """E, G and E* for ``n`` terminals (``n >= 2``)."""

    n: int
    _extreme: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")

    @property
    def dim(self) -> int:
        return self.n - 1

    def zero(self) -> GroupElement:
        return GroupElement([0] * self.dim)

    def g(self, i: int) -> GroupElement:
        """Generator ``g_i`` for 1 <= i <= n; ``g_n = -(g_1 + ... + g_{n-1})``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"generator index {i} outside 1..{self.n}")
        if i == self.n:
            return GroupElement([-1] * self.dim)
        return GroupElement(1 if j == i - 1 else 0 for j in range(self.dim))

    def generators(self) -> list[GroupElement]:
        return [self.g(i) for i in range(1, self.n + 1)]

    def h(self, i: int) -> tuple[Fraction, ...]:
        """Dual basis functional ``h_i`` as an E* coordinate vector."""
        if not 1 <= i <= self.dim:
            raise IndexError(f"dual index {i} outside 1..{self.dim}")
        return tuple(Fraction(1 if j == i - 1 else 0) for j in range(self.dim))

    def element(self, coeffs: Iterable[int]) -> GroupElement:
        el = GroupElement(coeffs)
        self.check_dim(el)
        return el

    def check_dim(self, v: Sequence) -> None:
        if len(v) != self.dim:
            raise DimensionError(f"expected {self.dim} coordinates for n={self.n}, got {len(v)}")

    def norm(self, v: Sequence):
        """``||v||_E``; exact for int/Fraction input."""
        self.check_dim(v)
        return max(max(v), 0) - min(min(v), 0)

    def dual_norm(self, w: Sequence):
        """``||w||_{E*} = max(w^P, w^N)``."""
        self.check_dim(w)
        pos = sum((x for x in w if x > 0), 0)
        neg = -sum((x for x in w if x < 0), 0)
        return max(pos, neg)

    def extreme_points(self) -> tuple[GroupElement, ...]:
        """Unit-norm elements ``±(g_{i_1}+...+g_{i_k})``: the extreme points of the unit ball."""
        if self._extreme is None:
            pts = []
            for mask in itertools.product((0, 1), repeat=self.dim):
                if any(mask):
                    el = GroupElement(mask)
                    pts.append(el)
                    pts.append(-el)
            object.__setattr__(self, "_extreme", tuple(pts))
        return self._extreme


def pair(w: Sequence, v: Sequence):
    """Duality pairing ``<w; v>`` in the biorthonormal coordinates."""
    _same_len(w, v)
    return sum((a * b for a, b in zip(w, v)), 0)


def norm_E(setup: GroupSetup, v: Sequence):
    return setup.norm(v)


def norm_Estar(setup: GroupSetup, w: Sequence):
    return setup.dual_norm(w)


def extreme_points(setup: GroupSetup) -> list[GroupElement]:
    return list(setup.extreme_points())


@dataclass
class AxiomReport:
    n: int
    passed: bool
    checked: dict[str, int]
    failure: str | None = None
    witness: tuple | None = None

    def __str__(self) -> str:
        if self.passed:
            counts = ", ".join(f"{k}: {v}" for k, v in self.checked.items())
            return f"n={self.n}: all axioms hold ({counts})"
        return f"n={self.n}: {self.failure} violated, witness {self.witness}"


def check_axioms(setup: GroupSetup, samples: int = 200, seed: int = 0) -> AxiomReport:
    """Check (P1)-(P4) for ``setup``.

    (P1) and (P2) are checked exhaustively, (P3) on all elements with
    coordinates in ``{-2..2}``, (P4) on ``samples`` random truncation pairs.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    d = setup.dim
    checked = {}

    def fail(name, witness):
        return AxiomReport(setup.n, False, checked, name, witness)

    gs = [setup.g(i) for i in range(1, setup.n)]
    hs = [setup.h(i) for i in range(1, setup.n)]
    count = 0
    for i, h in enumerate(hs):
        for j, g in enumerate(gs):
            count += 1
            if pair(h, g) != (1 if i == j else 0):
                return fail("P1", (i + 1, j + 1))
    if sum(setup.generators(), setup.zero()) != setup.zero():
        return fail("P1", "g_1 + ... + g_n != 0")
    checked["P1"] = count

    count = 0
    for k in range(1, d + 1):
        for idx in itertools.combinations(range(d), k):
            s = sum((gs[i] for i in idx), setup.zero())
            count += 1
            if setup.norm(s) != 1:
                return fail("P2", tuple(i + 1 for i in idx))
    checked["P2"] = count

    count = 0
    for coeffs in itertools.product(range(-2, 3), repeat=d):
        if any(coeffs):
            count += 1
            if setup.norm(coeffs) < 1:
                return fail("P3", coeffs)
    checked["P3"] = count

    for _ in range(samples):
        theta = [rng.randint(-5, 5) for _ in range(d)]
        trunc = [rng.randint(min(0, t), max(0, t)) for t in theta]
        if setup.norm(trunc) > setup.norm(theta):
            return fail("P4", (tuple(theta), tuple(trunc)))
    checked["P4"] = samples
    return AxiomReport(setup.n, True, checked)
