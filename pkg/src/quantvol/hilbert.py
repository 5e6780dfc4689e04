"""Riemann-Roch style section counts, Ehrhart fitting, the volume gate and m0."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import InconsistentSamples, NonIntegralValue
from .lattice import count_lattice_points, normalized_volume


class Provenance(enum.Enum):
    FITTED = "Fitted"
    FORMULA = "Formula"


class FujitaStatus(enum.Enum):
    STRICTLY_BELOW = "StrictlyBelow"
    EQUALITY = "Equality"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class HrrCoefficients:
    """Coefficients ``a_0..a_n`` of ``m -> h^0(X, -m K_X)``, lowest degree first."""

    dim: int
    coeffs: tuple
    provenance: Provenance = Provenance.FORMULA

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if len(self.coeffs) > self.dim + 1:
            raise ValueError("more coefficients than dim + 1")

    def __call__(self, m):
        return hrr_eval(self, m)


@dataclass(frozen=True)
class FujitaVerdict:
    volN: int
    bound: int
    status: FujitaStatus


def h0_pn(n, m):
    """``h^0(P^n, -m K) = binom(m(n+1) + n, n)``."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    return math.comb(m * (n + 1) + n, n)


def hrr_eval(c, m):
    return sum(a * m**i for i, a in enumerate(c.coeffs))


def _as_int(value, what):
    value = Fraction(value)
    if value.denominator != 1:
        raise NonIntegralValue(f"{what} evaluates to non-integer {value}")
    return int(value)


def hrr_dim2(vol, m):
    return _as_int(Fraction(m * (m + 1), 2) * vol + 1, f"hrr_dim2({vol}, {m})")


def hrr_dim3(vol, m):
    return _as_int(Fraction(m * (2 * m + 1) * (m + 1), 12) * vol + 2 * m + 1, f"hrr_dim3({vol}, {m})")


def hrr_dim4(vol, c1c2, m):
    value = (
        Fraction(m**4 + 2 * m**3 + m**2, 24) * vol
        + Fraction(m**2 + m, 24) * c1c2
        + 1
    )
    return _as_int(value, f"hrr_dim4({vol}, {c1c2}, {m})")


def formula_coefficients(n, vol, c1c2=None):
    """Closed-form coefficients for ``n <= 4`` (dimension 4 needs ``c1c2``)."""
    vol = Fraction(vol)
    if n == 1:
        coeffs = [1, vol]
    elif n == 2:
        coeffs = [1, vol / 2, vol / 2]
    elif n == 3:
        coeffs = [1, vol / 12 + 2, vol / 4, vol / 6]
    elif n == 4:
        if c1c2 is None:
            raise ValueError("dimension 4 needs c1^2.c2")
        c = Fraction(c1c2)
        coeffs = [1, c / 24, vol / 24 + c / 24, vol / 12, vol / 24]
    else:
        raise ValueError("no closed formula beyond dimension 4")
    return HrrCoefficients(n, coeffs, Provenance.FORMULA)


def _poly_mul_linear(poly, root):
    # poly * (x - root), coefficients lowest degree first
    out = [Fraction(0)] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i + 1] += c
        out[i] -= root * c
    return out


def ehrhart_fit(counts, n):
    """Interpolate a degree-``n`` polynomial through ``(m, count)`` samples.

    The first ``n + 1`` distinct ``m`` values determine the fit; any further
    samples must agree with it.
    """
    samples = []
    seen = set()
    extra = []
    for m, value in counts:
        if m in seen:
            extra.append((m, value))
            continue
        if len(samples) < n + 1:
            samples.append((m, Fraction(value)))
            seen.add(m)
        else:
            extra.append((m, value))
    if len(samples) < n + 1:
        raise ValueError(f"need {n + 1} distinct sample points, got {len(samples)}")

    coeffs = [Fraction(0)] * (n + 1)
    for i, (mi, yi) in enumerate(samples):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (mj, _) in enumerate(samples):
            if j != i:
                basis = _poly_mul_linear(basis, mj)
                denom *= mi - mj
        for k, b in enumerate(basis):
            coeffs[k] += yi * b / denom

    fit = HrrCoefficients(n, coeffs, Provenance.FITTED)
    for m, value in extra:
        if hrr_eval(fit, m) != value:
            raise InconsistentSamples(
                f"sample ({m}, {value}) disagrees with fitted value {hrr_eval(fit, m)}"
            )
    return fit


def fit_polytope(P, extra=1):
    """Ehrhart polynomial of ``P`` from counts at ``m = 0..n`` (plus checks)."""
    n = P.dim
    samples = [(m, count_lattice_points(P, m)) for m in range(n + 1 + extra)]
    return ehrhart_fit(samples, n)


def fujita_check(volN, n):
    bound = (n + 1) ** n
    if volN < bound:
        status = FujitaStatus.STRICTLY_BELOW
    elif volN == bound:
        status = FujitaStatus.EQUALITY
    else:
        status = FujitaStatus.VIOLATION
    return FujitaVerdict(volN, bound, status)


def polytope_fujita(P):
    return fujita_check(normalized_volume(P), P.dim)


def _generic_gap_holds(n, A, m):
    # m^n/n! > 2A * sum_{i<n} m^i
    return Fraction(m**n, math.factorial(n)) > 2 * Fraction(A) * sum(m**i for i in range(n))


def compute_m0(n, A, verify_window=200):
    """Smallest ``m0`` after which ``m^n/n! > 2A * sum_{i<n} m^i`` for good.

    ``A`` bounds every lower coefficient of both Hilbert polynomials, so a unit
    gap in the degree (volume at most ``(n+1)^n - 1``) dominates from ``m0`` on.
    """
    A = Fraction(A)
    if n < 1 or A <= 0:
        raise ValueError("need n >= 1 and A > 0")
    m = 1
    while not _generic_gap_holds(n, A, m):
        m += 1
    for k in range(m, m + verify_window + 1):
        if not _generic_gap_holds(n, A, k):
            raise AssertionError(f"gap inequality not monotone past m={m}")
    return m


def verify_m0(n, A, m0, m_max):
    """True iff the gap inequality fails at ``m0 - 1`` and holds on ``[m0, m_max]``."""
    if m0 > 1 and _generic_gap_holds(n, A, m0 - 1):
        return False
    return all(_generic_gap_holds(n, A, m) for m in range(m0, m_max + 1))


def compute_m0_exact(
    n: int,
    h0: Callable[[int, int], int],
    vols: Iterable[int] | None = None,
    m_max: int = 1000,
) -> int | None:
    """Threshold from an exact formula ``h0(vol, m)`` instead of the 2A bound.

    Returns the smallest ``m0`` such that ``h0(vol, m) < h0_pn(n, m)`` for all
    listed volumes and every ``m`` in ``[m0, m_max]``; ``None`` if the strict
    inequality fails at ``m_max``.
    """
    if vols is None:
        vols = range(1, (n + 1) ** n)
    vols = list(vols)
    m0 = None
    for m in range(m_max, 0, -1):
        ref = h0_pn(n, m)
        if all(h0(v, m) < ref for v in vols):
            m0 = m
        else:
            break
    return m0


def leading_coefficients_match(c: HrrCoefficients, vol: int) -> bool:
    n = c.dim
    a = list(c.coeffs) + [Fraction(0)] * (n + 1 - len(c.coeffs))
    return (
        a[0] == 1
        and a[n] == Fraction(vol, math.factorial(n))
        and a[n - 1] == Fraction(vol, 2 * math.factorial(n - 1))
    )

