"""Command-line interface: enumerate, invariants, compare, search,
census, report.

Exit status: 0 on success, 2 on invalid input, 3 on store errors.
Machine-readable output behind --json.  The census store path defaults to
the SFTCENSUS_STORE environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import census as census_mod
from . import report as report_mod
from .intmat import ParseError, parse_matrix
from .invariants import (DISTINCT, EQUIVALENT, NECESSARY_HOLDS, ROUTE_II,
                         ROUTE_III, ROUTE_TRIVIAL, bf_signature, bmt_compare,
                         jordan_invariant, signature)
from .sse import FOUND, SearchBudget, sse_search


class InputError(Exception):
    pass


def _matrix_arg(text):
    try:
        return parse_matrix(text)
    except ParseError as e:
        raise InputError(str(e)) from e


def _build_parser():
    p = argparse.ArgumentParser(prog="sftcensus",
                                description="conjugacy invariants and strong "
                                "shift equivalence census for 2x2 shifts of "
                                "finite type")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    ep = sub.add_parser("enumerate", help="stream the matrix universe")
    ep.add_argument("--max-sum", type=int, required=True)
    ep.add_argument("--primitive", action="store_true")

    ip = sub.add_parser("invariants", help="print the invariant signature")
    ip.add_argument("matrix")

    cp = sub.add_parser("compare", help="per-invariant verdicts for a pair")
    cp.add_argument("matrix_a")
    cp.add_argument("matrix_b")

    sp = sub.add_parser("search", help="bounded strong shift equivalence search")
    sp.add_argument("matrix_a")
    sp.add_argument("matrix_b")
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--bound", type=int, default=None,
                    help="entry-sum cap for intermediate matrices")
    sp.add_argument("--nodes", type=int, default=20000)
    sp.add_argument("--allow-1x1", action="store_true",
                    help="also try 1x1/1x2/1x3 factor shapes")

    np_ = sub.add_parser("census", help="run or resume a census")
    np_.add_argument("--max-sum", type=int, required=True)
    np_.add_argument("--store", default=os.environ.get("SFTCENSUS_STORE"))
    np_.add_argument("--irreducible", action="store_true",
                     help="include the period-2 antidiagonal matrices")
    np_.add_argument("--depth", type=int, default=2)
    np_.add_argument("--bound", type=int, default=None)
    np_.add_argument("--nodes", type=int, default=2000)
    np_.add_argument("--jobs", type=int, default=1)

    rp = sub.add_parser("report", help="summarize a census store")
    rp.add_argument("--store", default=os.environ.get("SFTCENSUS_STORE"))
    rp.add_argument("--figures", metavar="DIR", default=None,
                    help="also render figures as PNG files into DIR")
    return p


def _budget(args):
    b = SearchBudget(max_depth=args.depth, max_entry_sum=args.bound,
                     node_limit=args.nodes)
    if getattr(args, "allow_1x1", False):
        b = b.with_1x1()
    return b


def _cmd_enumerate(args, out):
    u = census_mod.enumerate_universe(args.max_sum, args.primitive)
    if args.json:
        out(json.dumps({"count": len(u.matrices),
                        "matrices": [m.encode() for m in u.matrices]}))
        return 0
    for m in u.matrices:
        out(m.encode())
    out(str(len(u.matrices)))
    return 0


def _cmd_invariants(args, out):
    m = _matrix_arg(args.matrix)
    sig = signature(m)
    if args.json:
        out(json.dumps({"matrix": m.encode(),
                        "signature": sig.serialize(m.encode())}))
    else:
        out(sig.serialize(m.encode()))
    return 0


_ROUTE_TEXT = {ROUTE_II: "Thm 1(ii)", ROUTE_III: "Thm 1(iii)",
               ROUTE_TRIVIAL: "integer eigenvalue"}
_VERDICT_TEXT = {DISTINCT: "DISTINCT", EQUIVALENT: "EQUIVALENT",
                 NECESSARY_HOLDS: "NECESSARY CONDITION HOLDS"}


def _cmd_compare(args, out):
    ma = _matrix_arg(args.matrix_a)
    mb = _matrix_arg(args.matrix_b)
    jordan_eq = jordan_invariant(ma) == jordan_invariant(mb)
    bfa, bfb = bf_signature(ma), bf_signature(mb)
    bf_eq = sum(1 for x, y in zip(bfa, bfb) if x == y)
    fields = {"jordan": "equal" if jordan_eq else "differ",
              "bf_equal": bf_eq, "bf_total": len(bfa)}
    try:
        cmpres = bmt_compare(ma, mb)
        fields["bmt_verdict"] = cmpres.verdict
        fields["bmt_route"] = cmpres.route
        bmt_text = f"{_VERDICT_TEXT[cmpres.verdict]} ({_ROUTE_TEXT[cmpres.route]})"
    except ValueError:
        fields["bmt_verdict"] = None
        fields["bmt_route"] = None
        bmt_text = "N/A (characteristic polynomials differ)"
    if args.json:
        out(json.dumps(fields))
    else:
        out(f"Jordan: {fields['jordan']}; "
            f"BF({bf_eq}/{len(bfa)}): {'equal' if bf_eq == len(bfa) else 'differ'}; "
            f"BMT: {bmt_text}")
    return 0


def _cmd_search(args, out):
    ma = _matrix_arg(args.matrix_a)
    mb = _matrix_arg(args.matrix_b)
    budget = _budget(args).resolve_cap(ma, mb)
    res = sse_search(ma, mb, budget)
    if args.json:
        payload = {"status": res.status,
                   "certificate": res.certificate.encode(budget)
                   if res.certificate else None}
        out(json.dumps(payload))
    elif res.status == FOUND:
        out(res.certificate.encode(budget))
    else:
        out(f"OPEN ({res.status})")
    return 0


def _cmd_census(args, out):
    if not args.store:
        raise InputError("census requires --store (or SFTCENSUS_STORE)")
    u = census_mod.enumerate_universe(args.max_sum, not args.irreducible)
    budget = SearchBudget(max_depth=args.depth, max_entry_sum=args.bound,
                          node_limit=args.nodes)
    state = census_mod.run_census(u, budget, args.store, jobs=args.jobs)
    if args.json:
        out(json.dumps(census_mod.summarize(state)))
    else:
        out(report_mod.render_report(state), end="")
    return 0


def _cmd_report(args, out):
    if not args.store:
        raise InputError("report requires --store (or SFTCENSUS_STORE)")
    state = census_mod.load_state(args.store)
    if args.json:
        out(json.dumps(census_mod.summarize(state)))
    else:
        out(report_mod.render_report(state), end="")
    if args.figures:
        for path in report_mod.render_figures(state, args.figures):
            out(f"figure: {path}")
    return 0


_COMMANDS = {
    "enumerate": _cmd_enumerate,
    "invariants": _cmd_invariants,
    "compare": _cmd_compare,
    "search": _cmd_search,
    "census": _cmd_census,
    "report": _cmd_report,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0

    def out(text, end="\n"):
        sys.stdout.write(text + end)

    try:
        return _COMMANDS[args.command](args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (census_mod.StoreError, census_mod.ConsistencyError) as e:
        print(f"store error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
