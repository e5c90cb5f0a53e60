"""Command-line surface: sign-table verification, diagram checks,
the Witt group table, mutation studies and failure replay.

Exit status is nonzero whenever any requested check fails, so the
commands compose with CI.  JSON reports are versioned and replayable.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import Params, mutation_study, replay, run_all, run_diagram, write_json
from .registry import REGISTRY, audit_registry
from .signs import default_assignment, verify_table


def _add_common(sub):
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--p", type=int, default=3)
    sub.add_argument("--max-dim", type=int, default=3)
    sub.add_argument("--max-len", type=int, default=3)
    sub.add_argument("--trials", type=int, default=25)
    sub.add_argument("--a", type=int, default=1, choices=(1, -1))
    sub.add_argument("--b", type=int, default=1, choices=(1, -1))
    sub.add_argument("--flip", action="append", default=[],
                     help="corrupt a sign symbol's global sign (repeatable)")
    sub.add_argument("--json", dest="json_path", default=None,
                     help="write the JSON report here")


def _params(args) -> Params:
    return Params(p=args.p, max_dim=args.max_dim, max_len=args.max_len,
                  trials=args.trials, a=args.a, b=args.b, flips=tuple(args.flip))


def cmd_verify_signs(args) -> int:
    reports = verify_table(default_assignment(args.a, args.b))
    for rep in reports:
        print(rep)
    ok = all(r.passed for r in reports)
    print(f"{'all rows PASS' if ok else 'FAILURES present'} (a={args.a}, b={args.b})")
    if args.json_path:
        write_json(args.json_path, {
            "schema": "monodual-report/1",
            "kind": "signs",
            "a": args.a,
            "b": args.b,
            "rows": [
                {"row": r.num, "reason": r.reason, "passed": r.passed,
                 "first_failure": r.first_failure}
                for r in reports
            ],
        })
    return 0 if ok else 1


def cmd_check(args) -> int:
    if args.id not in REGISTRY:
        print(f"unknown id {args.id!r}; known ids:", file=sys.stderr)
        for k in sorted(REGISTRY):
            print(f"  {k}", file=sys.stderr)
        return 2
    rep = run_diagram(REGISTRY[args.id], args.seed, _params(args))
    print(f"{rep.id}: {rep.verdict} ({rep.trials_run} trials, {rep.time_ms:.0f} ms)")
    for f in rep.failures:
        print(f"  trial {f.trial}: {f.detail or 'composites differ'}")
    if args.json_path:
        write_json(args.json_path, rep.to_json())
    return 0 if rep.verdict.startswith("PASS") else 1


def cmd_check_all(args) -> int:
    summary = run_all(REGISTRY, args.seed, _params(args))
    for rep in summary["reports"]:
        print(f"{rep['id']:<22} {rep['verdict']:<6} {rep['time_ms']:9.1f} ms")
    n_fail = len(summary["failed"])
    print(f"{summary['total']} diagrams, {n_fail} failed, "
          f"{summary['time_ms'] / 1000:.1f} s total")
    if args.json_path:
        write_json(args.json_path, summary)
    return 0 if n_fail == 0 else 1


def cmd_witt(args) -> int:
    from .witt import witt_classify

    table = witt_classify(args.p, args.maxdim)
    print(f"W(F_{args.p}): order {table['order']}, exponent {table['exponent']}")
    print("classes (anisotropic dim, disc class):",
          [(c.anisotropic_dim, c.disc) for c in table["classes"]])
    print("element orders:", table["element_orders"])
    n = table["order"]
    print("addition table:")
    for i in range(n):
        print("  " + " ".join(str(table["table"][(i, j)]) for j in range(n)))
    if args.json_path:
        write_json(args.json_path, {
            "schema": "monodual-report/1",
            "kind": "witt",
            "p": args.p,
            "order": table["order"],
            "exponent": table["exponent"],
            "element_orders": table["element_orders"],
            "table": [[table["table"][(i, j)] for j in range(n)] for i in range(n)],
        })
    return 0


def cmd_replay(args) -> int:
    with open(args.report) as fh:
        report = json.load(fh)
    out = replay(report, REGISTRY)
    print(json.dumps(out, indent=1))
    if out["kind"] == "replay" and "all_reproduced" in out:
        return 0 if out["all_reproduced"] else 1
    return 0


def cmd_mutation(args) -> int:
    out = mutation_study(REGISTRY, args.seed, _params(args))
    for row in out["rows"]:
        status = f"caught by {row['caught_by']}" if row["caught"] else "NOT CAUGHT"
        print(f"{row['symbol']:<7} {status}")
    if args.json_path:
        write_json(args.json_path, out)
    return 0 if out["all_caught"] else 1


def cmd_audit(args) -> int:
    out = audit_registry()
    print(f"registry ids: {len(REGISTRY)}; required covered: {out['ok']}")
    if out["missing"]:
        print("missing:", out["missing"])
    return 0 if out["ok"] else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="monodual",
                                 description="exact checks for monoidal duality on complexes over F_p")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("verify-signs", help="verify the 22 sign compatibility rows")
    sp.add_argument("--a", type=int, default=1, choices=(1, -1))
    sp.add_argument("--b", type=int, default=1, choices=(1, -1))
    sp.add_argument("--json", dest="json_path", default=None)
    sp.set_defaults(fn=cmd_verify_signs)

    sp = sub.add_parser("check", help="run one registered diagram")
    sp.add_argument("--id", required=True)
    _add_common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("check-all", help="run the whole diagram registry")
    _add_common(sp)
    sp.set_defaults(fn=cmd_check_all)

    sp = sub.add_parser("witt", help="print the Witt group table of F_p")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--maxdim", type=int, default=4)
    sp.add_argument("--json", dest="json_path", default=None)
    sp.set_defaults(fn=cmd_witt)

    sp = sub.add_parser("replay", help="replay a failure report")
    sp.add_argument("report")
    sp.set_defaults(fn=cmd_replay)

    sp = sub.add_parser("mutation", help="flip each sign symbol and find a witness failure")
    _add_common(sp)
    sp.set_defaults(fn=cmd_mutation)

    sp = sub.add_parser("audit", help="check registry coverage against the documented map")
    sp.set_defaults(fn=cmd_audit)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
