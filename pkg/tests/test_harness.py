import io
import json
from fractions import Fraction

import pytest

from quantvol.cli import main
from quantvol.errors import NotReflexive, ParseError
from quantvol.harness import load_dataset, parse_polytopes
from quantvol.harness.fixtures import DATASETS, dataset_text, render_dataset
from quantvol.harness.records import PolytopeRecord
from quantvol.harness.report import COLUMNS, emit_report, render_csv, rows_from_csv, rows_from_json
from quantvol.harness.scan import Relation, scan_conjecture, scan_delta
from quantvol.hilbert import FujitaStatus, hrr_dim2, hrr_dim3
from quantvol.lattice import (
    LatticePolytope,
    count_lattice_points,
    format_polytopes,
    is_reflexive,
    is_smooth,
    normalized_volume,
    simplex_pn,
    unimodularly_equivalent,
)

P2_TEXT = "# projective plane\n2 3\n2 -1\n-1 2\n-1 -1\n"


@pytest.fixture
def p2_file(tmp_path):
    path = tmp_path / "P2.txt"
    path.write_text(P2_TEXT)
    return path


def record(id, P):
    return PolytopeRecord.from_polytope(id, P)


# -- parsing ---------------------------------------------------------------------


def test_parse_p2(p2_file):
    (r,) = parse_polytopes(p2_file)
    assert r.id == "P2:0"
    assert r.reflexive and r.smooth and r.volN == 9


def test_parse_truncated_record(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2 3\n2 -1\n-1 2\n")
    errors = []
    assert parse_polytopes(path, errors) == []
    assert len(errors) == 1 and isinstance(errors[0], ParseError)
    assert errors[0].line == 1


def test_parse_empty(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    assert parse_polytopes(path) == []


def test_parse_keeps_ids_stable_past_errors(tmp_path):
    path = tmp_path / "mixed.txt"
    path.write_text("2 3\n1 0\n0 1 5\n" + P2_TEXT + "2 4\n1 1\n1 -1\n-1 1\n-1 -1\n")
    errors = []
    records = parse_polytopes(path, errors)
    # every malformed record consumes an index, so ids never shift
    assert len(records) == 2 and len(errors) == 2
    assert [r.id for r in records] == ["mixed:2", "mixed:3"]
    assert [e.line for e in errors] == [3, 3]
    assert records[0].volN == 9 and records[1].volN == 8


def test_missing_file_raises(tmp_path):
    with pytest.raises(OSError):
        parse_polytopes(tmp_path / "nope.txt")


def test_record_flags_match_lattice(all_records):
    for r in all_records:
        assert r.reflexive == is_reflexive(r.polytope)
        assert r.volN == normalized_volume(r.polytope)
        if r.reflexive:
            assert r.smooth == is_smooth(r.polytope)


# -- bundled data ----------------------------------------------------------------------


@pytest.mark.parametrize("name", DATASETS)
def test_bundled_files_match_generators(name):
    assert dataset_text(name) == render_dataset(name)


def test_bundled_dim2_has_16_classes(bundled):
    assert len(bundled["dim2"]) == 16
    assert all(r.reflexive for r in bundled["dim2"])
    assert sorted(r.volN for r in bundled["dim2"]) == [3, 4, 4, 4, 5, 5, 6, 6, 6, 6, 7, 7, 8, 8, 8, 9]


# -- scans -------------------------------------------------------------------------------


def test_scan_polygons(bundled):
    result = scan_conjecture(bundled["dim2"], 50)
    assert len(result.rows) == 16 * 50
    assert {row.relation for row in result.rows} <= {Relation.LESS, Relation.EQUAL}
    equal_ids = {row.id for row in result.rows if row.relation is Relation.EQUAL}
    assert len(equal_ids) == 1
    (eid,) = equal_ids
    P = next(r.polytope for r in bundled["dim2"] if r.id == eid)
    assert unimodularly_equivalent(P, simplex_pn(2))
    assert not result.findings


def test_scan_p3_all_equal():
    result = scan_conjecture([record("P3:0", simplex_pn(3))], 10)
    assert [row.m for row in result.rows] == list(range(1, 11))
    assert all(row.relation is Relation.EQUAL and row.jet_sep for row in result.rows)


def test_scan_square(square):
    (row,) = scan_conjecture([record("sq:0", square)], 1).rows
    assert row.relation is Relation.LESS and (row.d_m, row.d_m_pn) == (9, 10)
    assert row.jet_sep is None


def test_scan_rejects_non_reflexive():
    bad = record("t:0", LatticePolytope([(2, 0), (0, 2), (-2, -2)]))
    with pytest.raises(NotReflexive):
        scan_conjecture([bad], 1)
    with pytest.raises(ValueError):
        scan_conjecture([], 0)


def test_relation_consistent_and_equal_rows_carry_jet_sep(all_records):
    result = scan_conjecture(all_records, 3)
    for row in result.rows:
        expected = (
            Relation.LESS if row.d_m < row.d_m_pn else Relation.EQUAL if row.d_m == row.d_m_pn else Relation.GREATER
        )
        assert row.relation is expected
        if row.relation is Relation.EQUAL:
            assert row.jet_sep is True


def test_greater_rows_are_findings(bundled):
    result = scan_conjecture(bundled["dim3"], 3)
    greater = {(row.id, row.m) for row in result.rows if row.relation is Relation.GREATER}
    assert greater
    flagged = {(f.id, f.m) for f in result.findings if f.kind == "Greater"}
    assert greater == flagged
    assert any(f.kind == "FujitaViolation" for f in result.findings)


def test_scan_matches_closed_formulas(all_records):
    for r in all_records:
        if not r.smooth or r.n not in (2, 3):
            continue
        formula = hrr_dim2 if r.n == 2 else hrr_dim3
        for row in scan_conjecture([r], 8).rows:
            assert row.d_m == formula(r.volN, row.m)


def test_resource_limit_is_reported_not_raised():
    result = scan_conjecture([record("P4:0", simplex_pn(4))], 5, point_budget=100)
    assert result.errors and result.errors[0].kind == "ResourceLimit"


def test_threads_do_not_change_results(bundled):
    records = bundled["dim2"] + bundled["dim3"]
    assert scan_conjecture(records, 6, threads=1) == scan_conjecture(records, 6, threads=4)


# -- delta scans -------------------------------------------------------------------------


def test_scan_delta_projective_space():
    records = [record(f"P{n}:0", simplex_pn(n)) for n in (1, 2, 3)]
    result = scan_delta(records, 5)
    assert all(row.delta_fp == 1 for row in result.rows)
    assert not result.notes


def test_scan_delta_p1p1(p1p1):
    (row,) = scan_delta([record("Q:0", p1p1)], 1).rows
    assert row.delta_fp == 1


def test_scan_delta_singular_only(p2_dual):
    result = scan_delta([record("D:0", p2_dual)], 2)
    assert all(row.delta_fp is None for row in result.rows)
    assert [n.kind for n in result.notes] == ["SingularOnly"]


# -- reports --------------------------------------------------------------------------------


def test_csv_row_example(p2_file):
    rows = scan_delta(parse_polytopes(p2_file), 1).rows
    text = render_csv(rows)
    assert text.splitlines() == [",".join(COLUMNS), "P2:0,2,1,10,10,Equal,9,Equality,1/1,true"]


def test_empty_report_is_header_only():
    assert emit_report([], "csv", io.StringIO()) == ",".join(COLUMNS) + "\n"
    assert json.loads(emit_report([], "json", io.StringIO())) == []


def test_json_and_csv_round_trip(bundled):
    rows = scan_delta(bundled["dim3"], 2).rows
    js = emit_report(rows, "json", io.StringIO())
    assert rows_from_json(js) == rows
    assert [list(d) for d in json.loads(js)] == [list(COLUMNS)] * len(rows)
    assert rows_from_csv(render_csv(rows)) == rows
    assert any(isinstance(r.delta_fp, Fraction) and r.delta_fp.denominator > 1 for r in rows)


def test_report_to_path(tmp_path, bundled):
    rows = scan_conjecture(bundled["simplices"][:2], 2).rows
    out = tmp_path / "r.csv"
    text = emit_report(rows, "csv", out)
    assert out.read_text() == text
    with pytest.raises(ValueError):
        emit_report(rows, "xml", io.StringIO())
    with pytest.raises(OSError):
        emit_report(rows, "csv", tmp_path / "missing" / "r.csv")


def test_fujita_column(bundled):
    rows = scan_conjecture(bundled["dim3"], 1).rows
    by_vol = {row.volN: row.fujita.status for row in rows}
    assert by_vol[64] is FujitaStatus.EQUALITY
    assert by_vol[72] is FujitaStatus.VIOLATION
    assert by_vol[8] is FujitaStatus.STRICTLY_BELOW


# -- command line -------------------------------------------------------------------------------


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_clean_scan(capsys):
    code, out, err = run(["check-conjecture", "--dataset", "dim2", "--m-max", "5", "--threads", "1"], capsys)
    assert code == 0
    assert out.splitlines()[0] == ",".join(COLUMNS)
    assert len(out.splitlines()) == 1 + 16 * 5


def test_cli_findings_exit_two(capsys):
    code, _, err = run(["check-conjecture", "--dataset", "dim3", "--m-max", "2", "--threads", "1"], capsys)
    assert code == 2 and "Greater" in err


def test_cli_parse_error_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2 3\n1 0\n")
    code, _, err = run(["check-conjecture", "--input", str(path), "--m-max", "1"], capsys)
    assert code == 1 and "error" in err


def test_cli_non_reflexive_is_error(tmp_path, capsys):
    path = tmp_path / "nr.txt"
    path.write_text(format_polytopes([LatticePolytope([(2, 0), (0, 2), (-2, -2)])]))
    code, _, err = run(["check-conjecture", "--input", str(path), "--m-max", "1"], capsys)
    assert code == 1 and "not reflexive" in err


def test_cli_json_output_file(tmp_path, capsys):
    out = tmp_path / "o.json"
    code, _, _ = run(["delta", "--input", str(tmp_path / "x.txt"), "--m-max", "1"], capsys)
    assert code == 1
    p = tmp_path / "P2.txt"
    p.write_text(P2_TEXT)
    code, _, _ = run(["delta", "--input", str(p), "--m-max", "2", "--format", "json", "--out", str(out)], capsys)
    assert code == 0
    rows = rows_from_json(out.read_text())
    assert [r.delta_fp for r in rows] == [1, 1]


def test_cli_delta_probes(capsys):
    code, _, err = run(["delta", "--dataset", "simplices", "--m-max", "1", "--probes", "20", "--seed", "3"], capsys)
    assert code == 0 and "violated" not in err


def test_cli_m0(capsys):
    code, out, _ = run(["m0", "--n", "2", "--bound", "9/2", "--verify-to", "1000", "--exact"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n=2 A=9/2 m0=19"
    assert lines[1].endswith("true")
    assert lines[2].endswith(": 1")


def test_cli_info_and_hilbert(capsys):
    code, out, _ = run(["info", "--dataset", "simplices"], capsys)
    assert code == 0 and len(out.splitlines()) == 5
    code, out, _ = run(["hilbert", "--dataset", "dim2", "--m-max", "5"], capsys)
    assert code == 0
    body = [line.split("\t") for line in out.splitlines()[1:]]
    assert all(cols[4] == "true" for cols in body)
    smooth = {r.id for r in load_dataset("dim2") if r.smooth}
    assert all(cols[5] == "true" for cols in body if cols[0] in smooth)


def test_cli_threads_byte_identical(capsys):
    args = ["check-conjecture", "--dataset", "dim2", "--m-max", "20"]
    _, one, _ = run(args + ["--threads", "1"], capsys)
    _, eight, _ = run(args + ["--threads", "8"], capsys)
    assert one == eight


def test_counts_in_report_match_lattice(bundled):
    for row in scan_conjecture(bundled["products"], 2).rows:
        r = next(x for x in bundled["products"] if x.id == row.id)
        assert row.d_m == count_lattice_points(r.polytope, row.m)
