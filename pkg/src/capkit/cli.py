"""Command line: verify fixtures, compute single invariants, print the quadratic genus table."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .abelian import FgAbGroup
from .analysis import Analysis, FieldContext
from .checks import CATALOG, CONSISTENCY, run_checks
from .fixtures import FixtureError, load_fixture
from .genus import genus_row
from .report import render_figure, to_human, to_structured

EXIT_OK, EXIT_FAIL, EXIT_LOAD = 0, 1, 2

# invariants exposed by `compute`; each is an Analysis quantity of the same name
QUANTITIES = (
    "n", "e", "prod_nv", "large", "n_prime", "e_prime", "e_outside", "h_ks", "cl_k", "cl_l", "cl_ks",
    "cl_ls", "h1", "h2", "index_u_nmu", "index_u_unm", "norms_mod_nmu", "units_are_norms", "am", "am_st",
    "ker_j", "coker_j", "ker_j_prime", "coker_j_prime", "sha1", "sha2", "b1", "b2",
)


def _show(value) -> str:
    if isinstance(value, tuple) and value and isinstance(value[0], FgAbGroup):
        value = value[0]
    group = getattr(value, "group", None)
    if isinstance(group, FgAbGroup):
        value = group
    if isinstance(value, FgAbGroup):
        inv = value.invariant_factors
        free = value.free_rank
        parts = [f"Z/{m}" for m in inv] + ["Z"] * free
        return f"order {value.order()}  ({' x '.join(parts) if parts else 'trivial'})"
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def _split_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="capkit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the identity checks on a fixture")
    v.add_argument("fixture")
    v.add_argument("--checks", help="comma-separated check ids (default: all)")
    v.add_argument("--height", type=int, help="coefficient bound for the relation search")
    v.add_argument("--prec", type=int, help="working precision in bits for unit logarithms")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", choices=["human", "structured"], default="human")
    v.add_argument("--variant", action="append", help="S-variant to run (repeatable; default: all)")
    v.add_argument("--figure", help="save a check-status grid as an image (needs matplotlib)")

    c = sub.add_parser("compute", help="print one invariant of a fixture")
    c.add_argument("fixture")
    c.add_argument("--quantity", required=True, choices=sorted(QUANTITIES))
    c.add_argument("--variant", default="base")
    c.add_argument("--height", type=int)
    c.add_argument("--prec", type=int)

    g = sub.add_parser("genus", help="class numbers and ambiguous classes of quadratic fields")
    g.add_argument("--discs", required=True, help="comma-separated fundamental discriminants")
    g.add_argument("--height", type=int)
    return ap


def _load(path: str):
    try:
        return load_fixture(path)
    except FixtureError as exc:
        print(f"error: cannot load {path}: {exc}", file=sys.stderr)
        return None


def _verify(args) -> int:
    fx = _load(args.fixture)
    if fx is None:
        return EXIT_LOAD
    ids = None
    if args.checks is not None:
        ids = _split_list(args.checks)
        known = {c.check_id for c in CATALOG + CONSISTENCY} | {"consistency"}
        bad = [i for i in ids if i not in known]
        if bad:
            print(f"error: unknown check ids {', '.join(bad)}", file=sys.stderr)
            return EXIT_LOAD
    names = args.variant or [v.name for v in fx.variants]
    try:
        variants = [fx.variant(n).name for n in names]
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_LOAD
    ctx = FieldContext(fx, args.height, args.prec)
    reports = [run_checks(fx, name, ids, ctx=ctx) for name in variants]
    text = to_structured(reports) if args.format == "structured" else to_human(reports)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.figure:
        render_figure(reports, args.figure)
    return EXIT_FAIL if any(r.failed() for r in reports) else EXIT_OK


def _compute(args) -> int:
    fx = _load(args.fixture)
    if fx is None:
        return EXIT_LOAD
    try:
        variant = fx.variant(args.variant)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_LOAD
    a = Analysis(FieldContext(fx, args.height, args.prec), variant)
    try:
        value = a.get(args.quantity)
    except Exception as exc:
        print(f"{args.quantity}: unavailable ({type(exc).__name__}: {exc})")
        return EXIT_FAIL
    print(f"{args.quantity} = {_show(value)}")
    return EXIT_OK


def _genus(args) -> int:
    try:
        discs = [int(x) for x in _split_list(args.discs)]
    except ValueError:
        print("error: --discs takes comma-separated integers", file=sys.stderr)
        return EXIT_LOAD
    header = ["d", "h(rel)", "cert", "h(forms)", "h+", "t", "2^(t-1)", "amb(genus)", "|Cl[2]|", "agree"]
    rows = []
    status = EXIT_OK
    for d in discs:
        try:
            r = genus_row(d, args.height)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_LOAD
        rows.append([r.d, r.h_relations, r.certification, r.h_forms, r.h_plus, r.t, r.genus_count,
                     r.ambiguous_formula, r.ambiguous_cl2, "yes" if r.consistent else "NO"])
        if not r.consistent:
            status = EXIT_FAIL
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    for row in [header] + rows:
        print("  ".join(str(x).rjust(w) for x, w in zip(row, widths)))
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "verify":
        return _verify(args)
    if args.command == "compute":
        return _compute(args)
    return _genus(args)


if __name__ == "__main__":
    sys.exit(main())
