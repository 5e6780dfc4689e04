"""Basis divisors, log canonical thresholds and fixed-point delta values.

At a smooth torus-fixed point the lattice points of ``m*P`` become local
monomials ``z^u`` after moving the vertex to the origin and straightening its
edge cone.  A basis divisor built from those monomials is simple normal
crossing near the point, which is the only setting where the log canonical
threshold is computed here (``min_j 1/a_j``).

The delta value reported is the one attained by the torus-invariant basis.
Whether that basis realizes the infimum over *all* bases is not proved here;
``filtration_optimal_basis`` and the random-basis probes in the tests are the
supporting evidence.  Values are also restricted to fixed points, so they
bound ``delta_m`` from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import SingularMatrix, SingularVertex
from .lattice import det, edge_directions, iter_lattice_points, lattice_point_sum, solve

INFINITY = math.inf

INTEGRABLE = "Integrable"
DIVERGENT = "Divergent"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SectionExponents:
    n: int
    m: int
    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in u) for u in self.entries)
        if len(set(entries)) != len(entries):
            raise ValueError("section exponents must be pairwise distinct")
        if any(len(u) != self.n or min(u, default=0) < 0 for u in entries):
            raise ValueError(f"exponents must be nonnegative vectors of length {self.n}")
        object.__setattr__(self, "entries", entries)

    @property
    def d_m(self):
        return len(self.entries)


@dataclass(frozen=True)
class LocalBasisDivisor:
    n: int
    m: int
    d_m: int
    a: tuple


@dataclass(frozen=True)
class GeneralBasis:
    """Rows express sections in the reference monomial basis."""

    n: int
    m: int
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)


def _inverse(E):
    n = len(E)
    cols = [solve(E, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def vertex_frame(P, v):
    """Inverse of the edge-direction matrix at a smooth vertex ``v``."""
    v = tuple(v)
    dirs = edge_directions(P, v)
    if len(dirs) != P.dim or abs(det(dirs)) != 1:
        raise SingularVertex(f"edge cone at {v} is not unimodular")
    E = [[d[i] for d in dirs] for i in range(P.dim)]  # directions as columns
    return [[int(x) for x in row] for row in _inverse(E)]


def exponents_at_vertex(P, m, v):
    inv = vertex_frame(P, v)
    v = tuple(v)
    entries = []
    for u in iter_lattice_points(P, m):
        shifted = [x - m * y for x, y in zip(u, v)]
        entries.append(tuple(sum(r * s for r, s in zip(row, shifted)) for row in inv))
    return SectionExponents(P.dim, m, tuple(entries))


def basis_divisor_from_exponents(S):
    d = S.d_m
    if d == 0:
        raise ValueError("no sections")
    a = tuple(Fraction(sum(u[j] for u in S.entries), S.m * d) for j in range(S.n))
    return LocalBasisDivisor(S.n, S.m, d, a)


def basis_divisor_at_vertex(P, m, v, point_sum=None):
    """Same divisor as the exponent route, from the lattice-point sum alone."""
    inv = vertex_frame(P, v)
    count, sums = point_sum if point_sum is not None else lattice_point_sum(P, m)
    shifted = [s - count * m * y for s, y in zip(sums, v)]
    a = tuple(
        Fraction(sum(r * s for r, s in zip(row, shifted)), m * count) for row in inv
    )
    return LocalBasisDivisor(P.dim, m, count, a)


def _order_key(order):
    if order == "grlex":
        return lambda u: (sum(u), u)
    if order == "grevlex":
        return lambda u: (sum(u), tuple(-x for x in reversed(u)))
    raise ValueError(f"unknown monomial order {order!r}")


def filtration_optimal_basis(G, reference, order="grlex"):
    """Leading exponents after eliminating ``G`` along a graded monomial order.

    Each output section has a distinct lowest-order monomial, so vanishing
    orders along the filtration are as large as the span allows.
    """
    d = reference.d_m
    M = [list(row) for row in G.matrix]
    if len(M) != d or any(len(row) != d for row in M):
        raise ValueError("basis matrix must be d_m x d_m")
    key = _order_key(order)
    cols = sorted(range(d), key=lambda k: key(reference.entries[k]))
    leads = []
    r = 0
    for c in cols:
        piv = next((i for i in range(r, d) if M[i][c] != 0), None)
        if piv is None:
            raise SingularMatrix("basis matrix is singular")
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, d):
            if M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        leads.append(reference.entries[c])
        r += 1
    return SectionExponents(reference.n, reference.m, tuple(leads))


def raw_basis_divisor(G, reference):
    """Coordinate-hyperplane part of the divisor of an unreduced basis.

    A section's order along ``z_j = 0`` is the least ``u_j`` over its support.
    """
    d = reference.d_m
    a = []
    for j in range(reference.n):
        total = 0
        for row in G.matrix:
            total += min(reference.entries[k][j] for k, x in enumerate(row) if x != 0)
        a.append(Fraction(total, reference.m * d))
    return LocalBasisDivisor(reference.n, reference.m, d, tuple(a))


def mult_at_p(D):
    return sum(D.a, Fraction(0))


def lct_snc(D):
    a = D.a if isinstance(D, LocalBasisDivisor) else tuple(D)
    top = max((Fraction(x) for x in a), default=Fraction(0))
    if top <= 0:
        return INFINITY
    return 1 / top


def lct_mc_oracle(a, lam, samples=20000, seed=0, shells=32, z=6.0):
    """Monte Carlo integrability test for ``prod_j |z_j|^(-2 lam a_j)``.

    The polydisk integral factors by coordinate; each factor is split into
    dyadic annuli ``2^-(k+1) < |z| <= 2^-k`` whose integrals are sampled
    independently.  A regression of log shell mass on ``k`` decides whether
    the shell series decays (integrable) or grows (divergent); slopes within
    ``z`` standard errors of zero are inconclusive.
    """
    rng = np.random.default_rng(seed)
    lam = float(lam)
    ks = np.arange(shells, dtype=float)
    verdicts = []
    for aj in a:
        c = lam * float(aj)
        logs = np.empty(shells)
        for k in range(shells):
            r0, r1 = 2.0 ** (-k - 1), 2.0 ** (-k)
            u = rng.random(samples)
            r = np.sqrt(u * (r1 * r1 - r0 * r0) + r0 * r0)
            log_f = -2.0 * c * np.log(r)
            peak = log_f.max()
            log_mean = peak + np.log(np.mean(np.exp(log_f - peak)))
            logs[k] = math.log(math.pi * (r1 * r1 - r0 * r0)) + log_mean
        slope, intercept = np.polyfit(ks, logs, 1)
        resid = logs - (slope * ks + intercept)
        se = math.sqrt(float(resid @ resid) / (shells - 2) / float(((ks - ks.mean()) ** 2).sum()))
        if slope + z * se < 0:
            verdicts.append(INTEGRABLE)
        elif slope - z * se > 0:
            verdicts.append(DIVERGENT)
        else:
            verdicts.append(INCONCLUSIVE)
    if DIVERGENT in verdicts:
        return DIVERGENT
    if all(v == INTEGRABLE for v in verdicts):
        return INTEGRABLE
    return INCONCLUSIVE


def delta_mp_fixed_point(P, m, v):
    return lct_snc(basis_divisor_from_exponents(exponents_at_vertex(P, m, v)))


def delta_fixed_point_min(P, m, point_sum=None):
    """Minimum fixed-point delta over smooth vertices, or None if there are none."""
    if point_sum is None:
        point_sum = lattice_point_sum(P, m)
    best = None
    for v in P.vertices:
        try:
            D = basis_divisor_at_vertex(P, m, v, point_sum)
        except SingularVertex:
            continue
        val = lct_snc(D)
        if best is None or val < best:
            best = val
    return best


def jet_separation(S):
    """Whether every monomial of degree ``<= m(n+1)`` occurs among the exponents."""
    if S.d_m == 0:
        return False
    K = S.m * (S.n + 1)
    low = sum(1 for u in S.entries if sum(u) <= K)
    # entries are distinct and nonnegative, so a full count means containment
    return low == math.comb(K + S.n, S.n)


def monomials_up_to(n, K):
    """All exponent vectors in ``Z_{>=0}^n`` of total degree ``<= K``."""
    if n == 0:
        return [()]
    out = []
    for first in range(K + 1):
        out.extend((first,) + rest for rest in monomials_up_to(n - 1, K - first))
    return out


def random_basis(reference, rng, density=0.2, spread=3):
    """Sparse random perturbation of the monomial basis; may be singular."""
    d = reference.d_m
    rows = []
    for i in range(d):
        row = [0] * d
        row[i] = rng.choice([x for x in range(-spread, spread + 1) if x])
        for k in range(d):
            if k != i and rng.random() < density:
                row[k] = rng.randint(-spread, spread)
        rows.append(row)
    rng.shuffle(rows)
    return GeneralBasis(reference.n, reference.m, rows)


def random_basis_probe(reference, trials, rng):
    """Count random bases where elimination misbehaves.

    A violation is a changed leading-exponent multiset or an optimized lct
    larger than the raw divisor's lct.
    """
    target = sorted(reference.entries)
    violations = 0
    done = 0
    while done < trials:
        G = random_basis(reference, rng)
        try:
            S = filtration_optimal_basis(G, reference)
        except SingularMatrix:
            continue
        done += 1
        if sorted(S.entries) != target:
            violations += 1
        elif lct_snc(basis_divisor_from_exponents(S)) > lct_snc(raw_basis_divisor(G, reference)):
            violations += 1
    return violations
