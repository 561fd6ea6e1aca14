"""Command line entry point.

Exit codes: 0 success or pass, 1 check failed, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

from . import engine
from .algebra import LieModuleStructure, adjoint_lie_module, validate_poisson
from .enveloping import property_suite
from .errors import AxiomError, HypothesisError, ParseError, QPCohError, ResourceError, StructureError
from .io import dumps, parse_algebra, result_document

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _print_table(table: engine.BettiTable, out) -> None:
    print(f"{table.kind} of {table.algebra} ({table.method})", file=out)
    print(f"{'n':>3} {'cochains':>10} {'rank':>8} {'image':>8} {'dim':>5}", file=out)
    for r in table.rows:
        print(f"{r.n:>3} {r.cochain_dim:>10} {r.rank:>8} {r.image:>8} {r.dim:>5}", file=out)
    if table.notice:
        print(f"note: {table.notice}", file=out)
    if not table.complete:
        print("INCOMPLETE: resource cap reached", file=out)


def _print_report(rep: engine.CrossCheckReport, out) -> None:
    print(f"{rep.identity} on {rep.algebra}: {'pass' if rep.verdict else 'FAIL'}", file=out)
    for h in rep.hypotheses:
        vals = f" {h['values']}" if h.get("values") else ""
        print(f"  hypothesis {h['statement']}: {'verified' if h['verified'] else 'NOT verified'}{vals}", file=out)
    for r in rep.rows:
        extra = " ".join(f"{k}={v}" for k, v in r.items() if k not in ("n", "left", "right", "ok"))
        print(f"  n={r['n']}: {r['left']} vs {r['right']} {'ok' if r['ok'] else 'MISMATCH'} {extra}".rstrip(), file=out)
    for note in rep.notes:
        print(f"  {note}", file=out)


def _load(args) -> tuple:
    text = Path(args.file).read_text(encoding="utf-8")
    # `check` reports violations itself, so it never validates while parsing
    validate = args.command != "check" and not args.no_validate
    P = parse_algebra(text, validate=validate)
    return text, P


# each handler returns (exit code, payload, timings)


def cmd_check(args, text, P, out):
    report = validate_poisson(P)
    if report.ok:
        print(f"{P.name or 'algebra'}: dim {P.dim}, all axioms hold", file=out)
    else:
        print(f"{P.name or 'algebra'}: {len(report.violations)} violation(s)", file=out)
        for v in report.violations[:10]:
            print(f"  {v}", file=out)
    return (EXIT_OK if report.ok else EXIT_FAIL), {"valid": report.ok, **report.to_dict()}, {}


def _table_result(table, out):
    _print_table(table, out)
    code = EXIT_OK if table.complete else EXIT_RESOURCE
    return code, table.to_dict(), {f"degree {n}": t for n, t in table.timings.items()}


def cmd_hq(args, text, P, out):
    table = engine.betti_hq(P, max_degree=args.max_degree, truncate_k=args.truncate, probe_bound=args.probe_bound)
    return _table_result(table, out)


def cmd_hh(args, text, P, out):
    return _table_result(engine.betti_hh(P, max_degree=args.max_degree, normalized=args.normalized), out)


def cmd_hl(args, text, P, out):
    L: LieModuleStructure = (
        LieModuleStructure.trivial(P.dim) if args.coefficients == "trivial" else adjoint_lie_module(P)
    )
    table = engine.betti_hl(P, L, args.max_degree)
    table.kind = f"HL ({args.coefficients} coefficients)"
    return _table_result(table, out)


def cmd_hq0(args, text, P, out):
    value = engine.hq0_direct(P)
    print(f"dim HQ^0 = {value}", file=out)
    return EXIT_OK, {"quantity": "HQ^0", "method": "closed-form", "value": value}, {}


def cmd_hq1(args, text, P, out):
    dd = engine.derivation_pairs_dim(P)
    h0 = engine.hq0_direct(P)
    value = dd - P.dim + h0
    print(f"dim HQ^1 = dim D(A) - dim A + dim HQ^0 = {dd} - {P.dim} + {h0} = {value}", file=out)
    payload = {"quantity": "HQ^1", "method": "closed-form", "value": value, "dim_D": dd, "dim_A": P.dim, "hq0": h0}
    return EXIT_OK, payload, {}


def _report_result(rep, out):
    _print_report(rep, out)
    return (EXIT_OK if rep.verdict else EXIT_FAIL), rep.to_dict(), {}


def cmd_ses(args, text, P, out):
    return _report_result(
        engine.ses_check(P, args.max_degree, probe_bound=args.probe_bound, truncate_k=args.truncate), out
    )


def cmd_tensor(args, text, P, out):
    return _report_result(
        engine.tensor_check(P, args.max_degree, probe_bound=args.probe_bound, truncate_k=args.truncate), out
    )


def cmd_kunneth(args, text, P, out):
    return _report_result(engine.kunneth_check(P, args.max_degree), out)


def cmd_env(args, text, P, out):
    t0 = time.perf_counter()
    results = property_suite(P, args.samples, args.seed, args.max_u_degree)
    ok = all(r.ok for r in results)
    print(f"enveloping checks on {P.name or 'algebra'} (seed {args.seed}): {'pass' if ok else 'FAIL'}", file=out)
    for r in results:
        print(f"  {'ok  ' if r.ok else 'FAIL'} {r.name}: {r.checked} checked, {len(r.violations)} violations", file=out)
        for v in r.violations[:3]:
            print(f"       witness {v}", file=out)
    payload = {"verdict": "pass" if ok else "fail", "properties": [r.to_dict() for r in results]}
    return (EXIT_OK if ok else EXIT_FAIL), payload, {"total": time.perf_counter() - t0}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpcoh", description="Cohomology of finite-dimensional Poisson algebras over Q.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, degree=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="algebra document (JSON)")
        p.add_argument("--json", metavar="PATH", help="also write the result document to PATH")
        p.add_argument("--no-validate", action="store_true", help="skip the axiom checks on input")
        if degree:
            p.add_argument("--max-degree", type=int, default=4)
        p.set_defaults(handler=handler)
        return p

    add("check", cmd_check, "validate the Poisson axioms")
    p = add("hq", cmd_hq, "quasi-Poisson cohomology dimensions", degree=True)
    p.add_argument("--truncate", type=int, metavar="K", help="use the truncated complex (blocks with i <= K)")
    p.add_argument("--probe-bound", type=int, help="verify HH vanishing up to this degree")
    p = add("hh", cmd_hh, "Hochschild cohomology dimensions", degree=True)
    p.add_argument("--normalized", action="store_true", help="use normalized cochains")
    p = add("hl", cmd_hl, "Lie algebra cohomology dimensions", degree=True)
    p.add_argument("--coefficients", choices=["trivial", "self"], default="trivial")
    add("hq0", cmd_hq0, "HQ^0 from the Poisson center")
    add("hq1", cmd_hq1, "HQ^1 from the space D(A)")
    for name, handler, help_text in (
        ("ses-check", cmd_ses, "short exact sequence identity"),
        ("tensor-check", cmd_tensor, "HQ = Z(A) ⊗ HL(A, K) identity"),
    ):
        p = add(name, handler, help_text, degree=True)
        p.add_argument("--probe-bound", type=int)
        p.add_argument("--truncate", type=int, metavar="K")
    add("kunneth-check", cmd_kunneth, "trivial-bracket identity HQ = HH ⊗ ∧A", degree=True)
    p = add("env-check", cmd_env, "enveloping algebra property checks")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-u-degree", type=int, default=9)
    return parser


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        text, P = _load(args)
        code, payload, timings = args.handler(args, text, P, out)
    except AxiomError as e:
        print(f"error: {e}", file=err)
        if args.command == "check":
            for v in e.report.violations[:10]:
                print(f"  {v}", file=err)
            return EXIT_FAIL
        return EXIT_INPUT
    except (ParseError, StructureError, OSError, ValueError) as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT
    except ResourceError as e:
        print(f"resource cap: {e}", file=err)
        return EXIT_RESOURCE
    except HypothesisError as e:
        print(f"refused: {e}", file=err)
        if e.report is not None:
            _print_report(e.report, out)
            code, payload, timings = EXIT_FAIL, e.report.to_dict(), {}
        else:
            return EXIT_FAIL
    except QPCohError as e:
        print(f"error: {e}", file=err)
        return EXIT_FAIL
    if args.json:
        arguments = {k: v for k, v in vars(args).items() if k not in ("handler", "json", "file", "command")}
        doc = result_document(
            args.command, text, payload, arguments, seed=getattr(args, "seed", None), timings=timings
        )
        Path(args.json).write_text(dumps(doc) + "\n", encoding="utf-8")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
