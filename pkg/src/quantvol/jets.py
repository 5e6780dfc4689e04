"""Jet-space counting behind the section-count comparison with projective space.

``h_j`` denotes the dimension of sections of ``mL`` vanishing to order at
least ``j`` at a point ``p``.  The quotient by those sections embeds in the
space of Taylor polynomials of degree ``< j``, which caps ``h_0 - h_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import IdentityViolation
from .hilbert import h0_pn


@dataclass(frozen=True)
class JetProfile:
    """Vanishing-order filtration dimensions ``h_0 >= h_1 >= ... >= h_J``."""

    dims: tuple
    n: int
    m: int

    @property
    def d_m(self):
        return self.dims[0]

    def is_monotone(self):
        return all(a >= b >= 0 for a, b in zip(self.dims, self.dims[1:]))

    def satisfies_taylor_bound(self):
        h0 = self.dims[0]
        return all(h0 - h <= jet_dim(self.n, j) for j, h in enumerate(self.dims) if j >= 1)


def jet_dim(n, j):
    """Number of n-variable monomials of degree < j."""
    if n < 1 or j < 1:
        raise ValueError("need n >= 1 and j >= 1")
    return math.comb(n + j - 1, n)


def jet_sum_identity(n, J):
    total = sum(jet_dim(n, j) for j in range(1, J + 1))
    closed = math.comb(n + J, n + 1)
    if total != closed:
        raise IdentityViolation(f"sum of jet dims {total} != binom({n + J}, {n + 1}) = {closed}")
    return total


def profile_from_exponents(S):
    orders = [sum(u) for u in S.entries]
    top = max(orders, default=-1) + 1
    dims = tuple(sum(1 for o in orders if o >= j) for j in range(top + 1))
    return JetProfile(dims, S.n, S.m)


def avg_vanishing(profile):
    d = profile.d_m
    if d < 1:
        raise ValueError("empty section space")
    return Fraction(sum(profile.dims[1:]), profile.m * d)


def chain_terms(n, m, d_m):
    """Worst-case ``h_j`` for ``j = 1..m(n+1)+1`` allowed by the Taylor bound."""
    J = m * (n + 1) + 1
    return [max(0, d_m - jet_dim(n, j)) for j in range(1, J + 1)]


def excess_forced(n, m, d_m):
    """``(forced, lower_bound)`` for the average vanishing order at ``p``.

    ``lower_bound`` is the smallest average any profile obeying the Taylor
    bound can have; ``forced`` means it already exceeds ``n``.
    """
    if d_m < 1:
        raise ValueError("d_m must be positive")
    bound = Fraction(sum(chain_terms(n, m, d_m)), m * d_m)
    return bound > n, bound


def unclipped_bound(n, m, d_m):
    """``n + 1 + 1/m - binom(m(n+1)+n+1, n+1) / (m d_m)``, without clipping at 0."""
    J = m * (n + 1) + 1
    return n + 1 + Fraction(1, m) - Fraction(jet_sum_identity(n, J), m * d_m)


def boundary_value(n, m):
    """The unclipped bound at ``d_m = h0_pn(n, m)``; equals ``n`` exactly."""
    return unclipped_bound(n, m, h0_pn(n, m))
