"""Command-line entry point: ``quantvol <subcommand> [options]``.

Exit codes: 0 clean, 2 findings present, 1 errors.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from fractions import Fraction

from . import __version__
from .basisdiv import exponents_at_vertex, random_basis_probe
from .errors import QuantVolError
from .harness.fixtures import DATASETS, load_dataset
from .harness.records import parse_polytopes
from .harness.report import emit_report
from .harness.scan import default_threads, scan_conjecture, scan_delta
from .hilbert import (
    compute_m0,
    compute_m0_exact,
    fit_polytope,
    fujita_check,
    hrr_dim2,
    hrr_dim3,
    hrr_eval,
    leading_coefficients_match,
    verify_m0,
)
from .lattice import DEFAULT_POINT_BUDGET, smooth_vertices

log = logging.getLogger("quantvol")

EXIT_OK, EXIT_ERROR, EXIT_FINDINGS = 0, 1, 2


def _load(args, errors):
    if args.input:
        records = []
        for path in args.input:
            records.extend(parse_polytopes(path, errors))
        return records
    return load_dataset(args.dataset)


def _write_text(args, lines):
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_problems(parse_errors, result=None):
    for err in parse_errors:
        print(f"error: {err}", file=sys.stderr)
    if result is None:
        return EXIT_ERROR if parse_errors else EXIT_OK
    for e in result.errors:
        print(f"error: {e.id} m={e.m}: {e.kind}: {e.detail}", file=sys.stderr)
    for note in result.notes:
        print(f"note: {note.id}: {note.kind}: {note.detail}", file=sys.stderr)
    if result.findings:
        print(f"findings ({len(result.findings)}):", file=sys.stderr)
        for f in result.findings:
            where = "" if f.m is None else f" m={f.m}"
            print(f"  {f.id}{where}: {f.kind}: {f.detail}", file=sys.stderr)
    if parse_errors or result.errors:
        return EXIT_ERROR
    return EXIT_FINDINGS if result.findings else EXIT_OK


def _reflexive_only(records, parse_errors):
    keep = []
    for r in records:
        if r.reflexive:
            keep.append(r)
        else:
            parse_errors.append(f"{r.id}: polytope is not reflexive, skipped")
    return keep


def cmd_info(args):
    errors = []
    records = _load(args, errors)
    lines = ["id\tn\tvertices\treflexive\tsmooth\tvolN\tfujita"]
    for r in records:
        verdict = fujita_check(r.volN, r.n)
        lines.append(
            f"{r.id}\t{r.n}\t{len(r.polytope)}\t{str(r.reflexive).lower()}\t"
            f"{str(r.smooth).lower()}\t{r.volN}\t{verdict.status.value}"
        )
    _write_text(args, lines)
    return _report_problems(errors)


def cmd_check(args):
    errors = []
    records = _reflexive_only(_load(args, errors), errors)
    result = scan_conjecture(records, args.m_max, args.threads, point_budget=args.point_budget)
    emit_report(result.rows, args.format, args.out)
    return _report_problems(errors, result)


def cmd_delta(args):
    errors = []
    records = _reflexive_only(_load(args, errors), errors)
    result = scan_delta(records, args.m_max, args.threads, point_budget=args.point_budget)
    if args.probes:
        rng = random.Random(args.seed)
        for r in records:
            smooth = smooth_vertices(r.polytope)
            if not smooth:
                continue
            ref = exponents_at_vertex(r.polytope, 1, smooth[0])
            if ref.d_m > args.probe_max_dim:
                continue
            bad = random_basis_probe(ref, args.probes, rng)
            if bad:
                print(f"probe: {r.id}: {bad} of {args.probes} random bases violated", file=sys.stderr)
                errors.append(f"{r.id}: random-basis probe failed")
    emit_report(result.rows, args.format, args.out)
    return _report_problems(errors, result)


def cmd_hilbert(args):
    errors = []
    records = _load(args, errors)
    lines = ["id\tn\tvolN\tcoefficients\tleading_facts\tformula_match"]
    for r in records:
        fit = fit_polytope(r.polytope)
        facts = leading_coefficients_match(fit, r.volN) if r.reflexive else None
        formula = {2: hrr_dim2, 3: hrr_dim3}.get(r.n)
        match = "-"
        if formula is not None and r.reflexive:
            try:
                ok = all(hrr_eval(fit, m) == formula(r.volN, m) for m in range(1, args.m_max + 1))
            except QuantVolError:
                ok = False
            match = str(ok).lower()
        coeffs = " ".join(str(a) for a in fit.coeffs)
        lines.append(f"{r.id}\t{r.n}\t{r.volN}\t[{coeffs}]\t{str(facts).lower()}\t{match}")
    _write_text(args, lines)
    return _report_problems(errors)


def cmd_m0(args):
    A = Fraction(args.bound)
    m0 = compute_m0(args.n, A)
    lines = [f"n={args.n} A={A} m0={m0}"]
    if args.verify_to:
        lines.append(f"verified on [{m0}, {args.verify_to}]: {str(verify_m0(args.n, A, m0, args.verify_to)).lower()}")
    if args.exact:
        formula = {2: hrr_dim2, 3: hrr_dim3}.get(args.n)
        if formula is None:
            lines.append("exact threshold: no closed formula for this dimension")
        else:
            exact = compute_m0_exact(args.n, formula, m_max=args.exact_m_max)
            lines.append(f"exact threshold (closed formula, m <= {args.exact_m_max}): {exact}")
    _write_text(args, lines)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="quantvol", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", metavar="PATH", help="polytope text file (repeatable)")
    common.add_argument("--dataset", choices=DATASETS, default="dim2", help="bundled dataset when --input is absent")
    common.add_argument("--m-max", type=int, default=10, metavar="K")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--threads", type=int, default=default_threads(), metavar="N")
    common.add_argument("--seed", type=int, default=0, metavar="S")
    common.add_argument("--point-budget", type=int, default=DEFAULT_POINT_BUDGET, metavar="B")
    common.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="per-record summary").set_defaults(func=cmd_info)
    sub.add_parser(
        "check-conjecture", parents=[common], help="compare d_m with projective space"
    ).set_defaults(func=cmd_check)
    p = sub.add_parser("delta", parents=[common], help="scan plus fixed-point delta values")
    p.add_argument("--probes", type=int, default=0, help="random bases per record (seeded by --seed)")
    p.add_argument("--probe-max-dim", type=int, default=60, help="skip probes when d_1 exceeds this")
    p.set_defaults(func=cmd_delta)
    sub.add_parser("hilbert", parents=[common], help="fitted Hilbert polynomials").set_defaults(func=cmd_hilbert)
    p = sub.add_parser("m0", parents=[common], help="threshold m0 from a coefficient bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", required=True, help="coefficient bound A, e.g. 9/2")
    p.add_argument("--verify-to", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="also use the closed formula (n = 2, 3)")
    p.add_argument("--exact-m-max", type=int, default=1000)
    p.set_defaults(func=cmd_m0)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (QuantVolError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
