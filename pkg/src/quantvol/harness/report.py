from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

from ..hilbert import FujitaStatus, fujita_check
from .scan import Relation, ScanRow

COLUMNS = ("id", "n", "m", "d_m", "d_m_pn", "relation", "volN", "fujita", "delta_fp", "jet_sep")


def _fraction_text(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def row_to_dict(row):
    return {
        "id": row.id,
        "n": row.n,
        "m": row.m,
        "d_m": row.d_m,
        "d_m_pn": row.d_m_pn,
        "relation": row.relation.value,
        "volN": row.volN,
        "fujita": row.fujita.status.value,
        "delta_fp": None if row.delta_fp is None else _fraction_text(row.delta_fp),
        "jet_sep": row.jet_sep,
    }


def row_from_dict(d):
    n = int(d["n"])
    fujita = fujita_check(int(d["volN"]), n)
    if fujita.status is not FujitaStatus(d["fujita"]):
        raise ValueError(f"fujita status {d['fujita']} inconsistent with volN {d['volN']}")
    delta = d.get("delta_fp")
    jet = d.get("jet_sep")
    if isinstance(jet, str):
        jet = {"true": True, "false": False, "": None}[jet]
    return ScanRow(
        id=d["id"],
        n=n,
        m=int(d["m"]),
        d_m=int(d["d_m"]),
        d_m_pn=int(d["d_m_pn"]),
        relation=Relation(d["relation"]),
        fujita=fujita,
        delta_fp=Fraction(delta) if delta not in (None, "") else None,
        jet_sep=jet,
    )


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        d = row_to_dict(row)
        writer.writerow([_csv_cell(d[c]) for c in COLUMNS])
    return buf.getvalue()


def render_json(rows):
    return json.dumps([row_to_dict(r) for r in rows], indent=1) + "\n"


def rows_from_json(text):
    return [row_from_dict(d) for d in json.loads(text)]


def rows_from_csv(text):
    return [row_from_dict(d) for d in csv.DictReader(io.StringIO(text))]


def emit_report(rows, format="csv", destination=None):
    """Write rows as CSV or JSON to a path, a text stream, or stdout."""
    if format == "csv":
        text = render_csv(rows)
    elif format == "json":
        text = render_json(rows)
    else:
        raise ValueError(f"unknown report format {format!r}")
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
