"""Numbered acceptance criteria.

Each test prints one ``criterion N: PASS|FAIL`` line (collected into the
terminal summary) and fails normally when the criterion is not met.
Run only these with ``pytest -m acceptance``.
"""

import contextlib
import math
import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from quantvol.basisdiv import (
    DIVERGENT,
    INFINITY,
    INTEGRABLE,
    delta_mp_fixed_point,
    exponents_at_vertex,
    jet_separation,
    lct_mc_oracle,
    lct_snc,
)
from quantvol.cli import main
from quantvol.harness.scan import Relation, scan_conjecture
from quantvol.hilbert import (
    FujitaStatus,
    compute_m0,
    fit_polytope,
    fujita_check,
    h0_pn,
    hrr_dim2,
    hrr_dim3,
    hrr_dim4,
    leading_coefficients_match,
    verify_m0,
)
from quantvol.jets import excess_forced, jet_sum_identity
from quantvol.lattice import (
    count_lattice_points,
    normal_form,
    simplex_pn,
    smooth_vertices,
    unimodularly_equivalent,
)

pytestmark = pytest.mark.acceptance


@contextlib.contextmanager
def criterion(number, title, limit=None):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None and elapsed >= limit:
            raise AssertionError(f"took {elapsed:.1f}s, limit {limit}s")
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"criterion {number}: {status} {title} ({elapsed:.2f}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_01_projective_space_counts():
    with criterion(1, "P^n lattice counts equal h0_pn, n <= 4, m <= 20", limit=30):
        for n in range(1, 5):
            P = simplex_pn(n)
            for m in range(21):
                assert count_lattice_points(P, m) == h0_pn(n, m) == math.comb(n + m * (n + 1), n), (n, m)


def test_02_polygon_scan(bundled):
    with criterion(2, "16 reflexive polygons, m <= 50: never Greater, Equal only for P^2", limit=60):
        polygons = bundled["dim2"]
        assert len(polygons) == 16
        result = scan_conjecture(polygons, 50)
        assert len(result.rows) == 16 * 50
        assert all(row.d_m <= h0_pn(2, row.m) for row in result.rows)
        equal = {row.id for row in result.rows if row.relation is Relation.EQUAL}
        p2_class = {r.id for r in polygons if unimodularly_equivalent(r.polytope, simplex_pn(2))}
        assert len(p2_class) == 1 and equal == p2_class


def test_03_hrr_consistency(all_records):
    with criterion(3, "smooth counts follow closed formulas (m <= 20); P^4 matches hrr_dim4 (m <= 10)"):
        checked = 0
        for r in all_records:
            if not r.smooth or r.n not in (2, 3):
                continue
            formula = hrr_dim2 if r.n == 2 else hrr_dim3
            for m in range(1, 21):
                assert count_lattice_points(r.polytope, m) == formula(r.volN, m), (r.id, m)
            checked += 1
        assert checked >= 8
        P4 = simplex_pn(4)
        for m in range(1, 11):
            assert count_lattice_points(P4, m) == hrr_dim4(625, 250, m)


def test_04_ehrhart_coefficients(all_records):
    with criterion(4, "fitted a_0, a_n, a_(n-1) exact on every reflexive record"):
        for r in all_records:
            assert r.reflexive
            c = fit_polytope(r.polytope)
            n = r.n
            assert c.coeffs[0] == 1
            assert c.coeffs[n] == Fraction(r.volN, math.factorial(n))
            assert c.coeffs[n - 1] == Fraction(r.volN, 2 * math.factorial(n - 1))
            assert leading_coefficients_match(c, r.volN)


def test_05_fujita_gate(bundled):
    with criterion(5, "Fujita equality exactly at (n+1)^n; only P^2 among polygons"):
        for n in range(1, 5):
            bound = (n + 1) ** n
            for vol in range(1, bound + 20):
                status = fujita_check(vol, n).status
                assert (status is FujitaStatus.EQUALITY) == (vol == bound)
                assert (status is FujitaStatus.VIOLATION) == (vol > bound)
        attaining = [r for r in bundled["dim2"] if fujita_check(r.volN, 2).status is FujitaStatus.EQUALITY]
        assert len(attaining) == 1
        assert unimodularly_equivalent(attaining[0].polytope, simplex_pn(2))


def test_06_delta_of_projective_space():
    with criterion(6, "fixed-point delta = 1 at every P^n vertex, n <= 3, m <= 5", limit=60):
        for n in range(1, 4):
            P = simplex_pn(n)
            for m in range(1, 6):
                for v in P.vertices:
                    value = delta_mp_fixed_point(P, m, v)
                    assert isinstance(value, Fraction) and value == 1, (n, m, v)


def test_07_jet_chain():
    with criterion(7, "jet-sum identity n <= 6, J <= 200; excess chain forced/bounded n <= 4, m <= 6"):
        for n in range(1, 7):
            for J in range(1, 201):
                assert jet_sum_identity(n, J) == math.comb(n + J, n + 1)
        for n in range(1, 5):
            for m in range(1, 7):
                ref = h0_pn(n, m)
                assert excess_forced(n, m, ref + 1)[0]
                forced, bound = excess_forced(n, m, ref)
                assert not forced and bound <= n


def test_08_equality_rows(all_records):
    with criterion(8, "records with Equal rows separate jets and are the P^n simplex"):
        result = scan_conjecture(all_records, 3)
        equal = {row.id for row in result.rows if row.relation is Relation.EQUAL}
        assert equal
        by_id = {r.id: r for r in all_records}
        for rid in sorted(equal):
            r = by_id[rid]
            P = r.polytope
            assert normal_form(P) == normal_form(simplex_pn(r.n)), rid
            for m in range(1, 4):
                for v in smooth_vertices(P):
                    assert jet_separation(exponents_at_vertex(P, m, v)), (rid, m, v)
        assert all(row.jet_sep for row in result.rows if row.relation is Relation.EQUAL)


def _random_case(rng):
    while True:
        n = rng.randint(1, 4)
        a = [Fraction(rng.randint(0, 24), rng.randint(1, 6)) for _ in range(n)]
        lct = lct_snc(a)
        if lct == INFINITY:
            continue
        gap = Fraction(rng.randint(5, 50), 100)
        lam = lct + gap if rng.random() < 0.5 else lct - gap
        if lam > 0:
            return a, lam, lct


def test_09_lct_oracle_agreement():
    with criterion(9, "Monte Carlo oracle agrees with exact lct on 200 seeded cases", limit=120):
        rng = random.Random(20240901)
        disagreements = []
        for i in range(200):
            a, lam, lct = _random_case(rng)
            assert abs(lam - lct) >= Fraction(1, 20)
            expected = INTEGRABLE if lam < lct else DIVERGENT
            verdict = lct_mc_oracle(a, lam, seed=i)
            if verdict != expected:
                disagreements.append((a, lam, verdict))
        assert disagreements == []


def test_10_m0():
    with criterion(10, "m0(1, 1) = 3 and m0(2, 9/2) = 19, verified to 10^4"):
        assert compute_m0(1, 1) == 3
        assert compute_m0(2, Fraction(9, 2)) == 19
        assert verify_m0(1, 1, 3, 10**4)
        assert verify_m0(2, Fraction(9, 2), 19, 10**4)


def test_11_cli_determinism(tmp_path, capsys):
    with criterion(11, "check-conjecture CSV identical with 1 and 8 threads"):
        outputs = []
        for threads in (1, 8):
            out = tmp_path / f"t{threads}.csv"
            code = main(["check-conjecture", "--dataset", "dim2", "--m-max", "50", "--threads", str(threads), "--out", str(out)])
            assert code == 0
            outputs.append(out.read_bytes())
        capsys.readouterr()
        assert outputs[0] == outputs[1]
        assert outputs[0].count(b"\n") == 1 + 16 * 50
