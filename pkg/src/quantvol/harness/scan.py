"""Batch scans of section counts against projective space.

Rows where a polytope beats projective space, or exceeds the volume bound,
are *findings*: the comparison statements only apply to K-semistable
varieties, which this tool does not decide.  They are reported, never
raised.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ..basisdiv import delta_fixed_point_min, exponents_at_vertex, jet_separation
from ..errors import NotReflexive, ResourceLimit
from ..hilbert import FujitaStatus, FujitaVerdict, fujita_check, h0_pn
from ..lattice import (
    DEFAULT_POINT_BUDGET,
    lattice_point_sum,
    simplex_pn,
    smooth_vertices,
    unimodularly_equivalent,
)


class Relation(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


@dataclass(frozen=True)
class ScanRow:
    id: str
    n: int
    m: int
    d_m: int
    d_m_pn: int
    relation: Relation
    fujita: FujitaVerdict
    delta_fp: Fraction | None = None
    jet_sep: bool | None = None

    @property
    def volN(self):
        return self.fujita.volN


@dataclass(frozen=True)
class Finding:
    id: str
    m: int | None
    kind: str
    detail: str


@dataclass
class ScanResult:
    rows: list = field(default_factory=list)
    findings: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def extend(self, other):
        self.rows.extend(other.rows)
        self.findings.extend(other.findings)
        self.notes.extend(other.notes)
        self.errors.extend(other.errors)


def _relation(d, ref):
    if d < ref:
        return Relation.LESS
    if d == ref:
        return Relation.EQUAL
    return Relation.GREATER


def scan_record(record, m_max, delta=False, point_budget=DEFAULT_POINT_BUDGET):
    P = record.polytope
    n = P.dim
    out = ScanResult()
    fujita = fujita_check(record.volN, n)
    if fujita.status is FujitaStatus.VIOLATION:
        out.findings.append(
            Finding(record.id, None, "FujitaViolation", f"volume {record.volN} > {fujita.bound}")
        )
    smooth = smooth_vertices(P)
    if delta and not smooth:
        out.notes.append(Finding(record.id, None, "SingularOnly", "no smooth torus-fixed point"))
    is_pn = None
    for m in range(1, m_max + 1):
        try:
            point_sum = lattice_point_sum(P, m, point_budget)
        except ResourceLimit as exc:
            out.errors.append(Finding(record.id, m, "ResourceLimit", str(exc)))
            break
        d = point_sum[0]
        ref = h0_pn(n, m)
        rel = _relation(d, ref)
        delta_fp = delta_fixed_point_min(P, m, point_sum) if delta and smooth else None
        jet_sep = None
        if rel is Relation.EQUAL:
            jet_sep = bool(smooth) and jet_separation(
                exponents_at_vertex(P, m, smooth[0])
            )
            if is_pn is None:
                is_pn = unimodularly_equivalent(P, simplex_pn(n))
            if not is_pn:
                out.findings.append(
                    Finding(record.id, m, "EqualNotProjectiveSpace", "count ties P^n but polytope is not the P^n simplex")
                )
            if not jet_sep:
                out.findings.append(
                    Finding(record.id, m, "EqualWithoutJetSeparation", "count ties P^n without separating jets")
                )
        elif rel is Relation.GREATER:
            out.findings.append(Finding(record.id, m, "Greater", f"d_m = {d} > {ref}"))
        out.rows.append(ScanRow(record.id, n, m, d, ref, rel, fujita, delta_fp, jet_sep))
    return out


def default_threads():
    return os.cpu_count() or 1


def scan_conjecture(records, m_max, threads=1, delta=False, point_budget=DEFAULT_POINT_BUDGET):
    """Compare ``d_m`` with projective space for every record and ``m <= m_max``.

    Records are processed independently (in parallel when ``threads > 1``);
    results are merged in input order so output never depends on threading.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    bad = [r.id for r in records if not r.reflexive]
    if bad:
        raise NotReflexive(f"non-reflexive records: {', '.join(bad)}")

    def work(record):
        return scan_record(record, m_max, delta, point_budget)

    result = ScanResult()
    if threads > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, records))
    else:
        parts = [work(r) for r in records]
    for part in parts:
        result.extend(part)
    return result


def scan_delta(records, m_max, threads=1, point_budget=DEFAULT_POINT_BUDGET):
    return scan_conjecture(records, m_max, threads, delta=True, point_budget=point_budget)
