"""Command-line front end.

Machine-readable JSON goes to stdout, a short human summary to stderr. The
exit status is 0 iff every requested check passes, 1 when a check fails,
and 2 for usage or input errors (with a JSON error object on stdout).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import expr
from .clifford import CliffordViolation, GammaRep, build_rep, clifford_relations, derived_identities
from .graded import (
    antisymmetry_check,
    bracket_table,
    compare_algebras,
    get_spec,
    jacobi_check,
    rank_report,
    sub_superalgebras,
    subalgebra_check,
    z2z2_spec,
)
from .model import FIRST_ORDER_COMMUTING, FIRST_ORDER_ANTICOMMUTING, SECOND_ORDER, build_catalog
from .scalars import I, M, S, Scalar
from .solver import Ansatz, solve_symmetry_ansatz, supercharge_uniqueness
from .symcheck import check_second_order_set, check_symmetry, normalize_kind, plane_wave_validate
from .weyl import DiffOperator, MatrixCoeff

# generators certified by the anticommutator condition; all others use the commutator
ANTICOMMUTING = set(FIRST_ORDER_ANTICOMMUTING) | {n for n in SECOND_ORDER if n[0] in "YZ"}


def operator_symbols(rep: GammaRep) -> dict:
    table: dict = {"i": I, "m": M, "s": S}
    for k, name in enumerate(("t", "x1", "x2", "x3")):
        table[name] = DiffOperator.coordinate(k)
    for k, name in enumerate(("dt", "d1", "d2", "d3")):
        table[name] = DiffOperator.derivative(k)
    for name, mat in rep.symbols().items():
        table[name] = DiffOperator.matrix(mat)
    return table


def parse_operator(text: str, rep: GammaRep | None = None) -> DiffOperator:
    """Parse operator text into a normal-ordered operator (products compose left to right)."""
    rep = rep if rep is not None else build_rep("dirac")
    symbols = operator_symbols(rep)
    value = expr.evaluate(expr.parse(text), symbols.__getitem__)
    if isinstance(value, DiffOperator):
        return value
    if isinstance(value, (int, Scalar)):
        return DiffOperator.scalar(value)
    if isinstance(value, MatrixCoeff):
        return DiffOperator.matrix(value)
    raise TypeError(f"expression evaluates to {type(value).__name__}")


# --------------------------------------------------------------------------
# Output helpers
# --------------------------------------------------------------------------


def _emit(payload, summary: str, ok: bool) -> int:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    sys.stderr.write(summary.rstrip("\n") + "\n")
    return 0 if ok else 1


def _emit_text(text: str, summary: str, ok: bool) -> int:
    sys.stdout.write(text)
    sys.stderr.write(summary.rstrip("\n") + "\n")
    return 0 if ok else 1


def _error(kind: str, message: str, **extra) -> int:
    payload = {"error": kind, "message": message, **extra}
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    sys.stderr.write(f"error: {message}\n")
    return 2


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_verify_clifford(args, rep: GammaRep) -> int:
    rel = clifford_relations(rep)
    ids = derived_identities(rep)
    ok = all(rel.values()) and all(ids.values())
    payload = {
        "rep": rep.name,
        "relations": [{"mu": mu, "nu": nu, "holds": v} for (mu, nu), v in sorted(rel.items())],
        "identities": ids,
        "passed": ok,
    }
    n_ok = sum(rel.values()) + sum(ids.values())
    return _emit(payload, f"clifford ({rep.name}): {n_ok}/{len(rel) + len(ids)} identities hold", ok)


def _verdict_payload(name, verdict, rep) -> dict:
    return {
        "generator": name,
        "kind": verdict.kind,
        "multiplier": rep.render(verdict.multiplier) if verdict.certified else None,
        "certified": verdict.certified,
    }


def cmd_verify_symmetry(args, rep: GammaRep) -> int:
    catalog = build_catalog(rep)
    if args.op and args.expr:
        return _error("usage", "give at most one of --op and --expr")
    if args.expr is not None:
        targets = [(args.expr, parse_operator(args.expr, rep), None)]
    elif args.op is not None:
        if args.op not in catalog.operators:
            return _error("unknown-generator", f"no generator named {args.op!r}")
        targets = [(args.op, catalog[args.op], "anticommutator" if args.op in ANTICOMMUTING else "commutator")]
    else:
        targets = [
            (n, catalog[n], "anticommutator" if n in ANTICOMMUTING else "commutator")
            for n in FIRST_ORDER_COMMUTING + FIRST_ORDER_ANTICOMMUTING
        ]
    results = []
    ok = True
    lines = []
    for name, op, natural in targets:
        kinds = [normalize_kind(args.kind)] if args.kind else ([natural] if natural else ["commutator", "anticommutator"])
        verdicts = [check_symmetry(catalog.omega, op, k, args.multiplier_degree) for k in kinds]
        passed = any(v.certified for v in verdicts)
        ok = ok and passed
        for v in verdicts:
            results.append(_verdict_payload(name, v, rep))
            if v.certified:
                lines.append(f"{name}: certified ({v.kind}), multiplier {rep.render(v.multiplier)}")
        if not passed:
            lines.append(f"{name}: NOT certified ({', '.join(kinds)})")
    return _emit(results, "\n".join(lines), ok)


def cmd_verify_second_order(args, rep: GammaRep) -> int:
    catalog = build_catalog(rep)
    report = check_second_order_set(catalog, args.multiplier_degree)
    results = []
    for name in SECOND_ORDER:
        item = report[name]
        for kind, v in item["verdicts"].items():
            if v.certified:
                results.append(_verdict_payload(name, v, rep))
        if not item["certified"]:
            results.append({"generator": name, "kind": None, "multiplier": None, "certified": False})
    ok = all(r["certified"] for r in results)
    n = sum(1 for name in SECOND_ORDER if report[name]["certified"])
    return _emit(results, f"second-order: {n}/{len(SECOND_ORDER)} certified", ok)


def _table(args, rep):
    catalog = build_catalog(rep)
    spec = get_spec(args.algebra)
    return catalog, spec, bracket_table(spec, catalog, workers=args.workers)


def cmd_table(args, rep: GammaRep) -> int:
    catalog, spec, table = _table(args, rep)
    summary = (
        f"{spec.name}: {len(table.entries)} brackets, closed={table.closed}, "
        f"graded={table.graded}, rank={table.rank}"
    )
    ok = table.closed and table.graded
    if args.out == "csv":
        return _emit_text(table.to_csv(), summary, ok)
    if args.out == "md":
        return _emit_text(table.to_markdown(), summary, ok)
    return _emit_text(table.to_json(rep.render), summary, ok)


def cmd_jacobi(args, rep: GammaRep) -> int:
    catalog, spec, table = _table(args, rep)
    violations = jacobi_check(spec, catalog, table, method=args.method, workers=args.workers)
    antisym = antisymmetry_check(spec, catalog, table=table)
    n = len(spec.generators)
    payload = {
        "algebra": spec.name,
        "method": args.method,
        "triples": n**3,
        "violations": [
            {"triple": list(v.triple), "jacobiator": rep.render(v.jacobiator)} for v in violations
        ],
        "antisymmetry_violations": [list(p) for p in antisym],
        "closed": table.closed,
        "passed": table.closed and not violations and not antisym,
    }
    summary = (
        f"{spec.name} Jacobi ({args.method}): {n**3} triples, {len(violations)} violations; "
        f"antisymmetry violations {len(antisym)}"
    )
    return _emit(payload, summary, payload["passed"])


def cmd_compare(args, rep: GammaRep) -> int:
    catalog = build_catalog(rep)
    st = bracket_table(get_spec("super"), catalog, workers=args.workers)
    zt = bracket_table(get_spec("z2z2"), catalog, workers=args.workers)
    div = compare_algebras(catalog, st, zt)
    subs = {name: subalgebra_check(zt.spec, gens, catalog, zt) for name, gens in sub_superalgebras(zt.spec).items()}
    payload = {
        "divergences": [d.payload() for d in div],
        "sub_superalgebras": subs,
        "super_closed": st.closed,
        "z2z2_closed": zt.closed,
    }
    ok = st.closed and zt.closed and all(subs.values())
    return _emit(payload, f"compare: {len(div)} diverging pairs; sub-superalgebras close: {subs}", ok)


def cmd_solve(args, rep: GammaRep) -> int:
    catalog = build_catalog(rep)
    report = solve_symmetry_ansatz(catalog, Ansatz(args.order, args.degree), args.kind, args.multiplier_degree)
    ok = all(report.certificates.values())
    summary = (
        f"solve ({report.kind}, order {args.order}, degree {args.degree}, "
        f"multiplier degree {report.multiplier_degree}): dimension {report.dimension}, "
        f"certificates {sum(report.certificates.values())}/{len(report.certificates)}"
    )
    return _emit(report.payload(rep), summary, ok)


def cmd_unique_supercharge(args, rep: GammaRep) -> int:
    catalog = build_catalog(rep)
    report = supercharge_uniqueness(catalog, Ansatz(args.order, args.degree), args.multiplier_degree, args.cap)
    ok = report.conclusive and not report.exists
    dims = " -> ".join(f"{k}:{v}" for k, v in report.dimensions.items())
    summary = f"unique-supercharge: dims {dims}; exists={report.exists} conclusive={report.conclusive}"
    return _emit(report.payload(), summary, ok)


def cmd_catalog(args, rep: GammaRep) -> int:
    catalog = build_catalog(rep)
    payload = {"Omega": rep.render(catalog.omega)}
    payload.update({n: catalog.render(n) for n in catalog.names()})
    return _emit(payload, f"catalog: {len(catalog.names())} generators ({rep.name})", True)


def cmd_rank(args, rep: GammaRep) -> int:
    catalog = build_catalog(rep)
    names = list(z2z2_spec().generators)
    report = rank_report(catalog, names)
    report["names"] = "z2z2 generators"
    summary = f"rank: {report['rank']} of {report['count']} ({len(report['relations'])} relations)"
    return _emit(report, summary, True)


def cmd_planewave(args, rep: GammaRep) -> int:
    catalog = build_catalog(rep)
    if args.expr is not None:
        name, op = args.expr, parse_operator(args.expr, rep)
    else:
        if args.op not in catalog.operators:
            return _error("unknown-generator", f"no generator named {args.op!r}")
        name, op = args.op, catalog[args.op]
    ok = plane_wave_validate(rep, op, catalog.omega)
    return _emit({"generator": name, "annihilates_kernel_image": ok}, f"planewave {name}: {'ok' if ok else 'FAILS'}", ok)


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rep", default="dirac", help="dirac, chiral, or a representation file")
    common.add_argument("--workers", type=int, default=1, help="processes for table and Jacobi sweeps")

    p = argparse.ArgumentParser(prog="llesym", description="Exact symmetry checks for the Levy-Leblond equation.")
    sub = p.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="verify identities and symmetry conditions")
    vsub = verify.add_subparsers(dest="what", required=True)
    vc = vsub.add_parser("clifford", parents=[common])
    vc.set_defaults(func=cmd_verify_clifford)
    vs = vsub.add_parser("symmetry", parents=[common])
    vs.add_argument("--op", help="catalog generator name")
    vs.add_argument("--expr", help="operator expression")
    vs.add_argument("--kind", choices=("c", "a", "commutator", "anticommutator"))
    vs.add_argument("--multiplier-degree", type=int, default=1)
    vs.set_defaults(func=cmd_verify_symmetry)
    vo = vsub.add_parser("second-order", parents=[common])
    vo.add_argument("--multiplier-degree", type=int, default=1)
    vo.set_defaults(func=cmd_verify_second_order)

    t = sub.add_parser("table", parents=[common], help="structure constants")
    t.add_argument("--algebra", choices=("super", "z2z2"), required=True)
    t.add_argument("--out", choices=("json", "csv", "md"), default="json")
    t.set_defaults(func=cmd_table)

    j = sub.add_parser("jacobi", parents=[common], help="graded Jacobi identity on all triples")
    j.add_argument("--algebra", choices=("super", "z2z2"), required=True)
    j.add_argument("--method", choices=("direct", "expansion"), default="direct")
    j.set_defaults(func=cmd_jacobi)

    c = sub.add_parser("compare", parents=[common], help="brackets that differ between the two algebras")
    c.set_defaults(func=cmd_compare)

    s = sub.add_parser("solve", parents=[common], help="ansatz solution space")
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--degree", type=int, default=2)
    s.add_argument("--kind", choices=("c", "a", "commutator", "anticommutator"), default="c")
    s.add_argument("--multiplier-degree", type=int, default=None)
    s.set_defaults(func=cmd_solve)

    u = sub.add_parser("unique-supercharge", parents=[common], help="constraint chain for a second supercharge")
    u.add_argument("--order", type=int, default=1)
    u.add_argument("--degree", type=int, default=2)
    u.add_argument("--multiplier-degree", type=int, default=None)
    u.add_argument("--cap", type=int, default=6)
    u.set_defaults(func=cmd_unique_supercharge)

    sub.add_parser("catalog", parents=[common], help="print every generator").set_defaults(func=cmd_catalog)
    sub.add_parser("rank", parents=[common], help="rank of the z2z2 generators").set_defaults(func=cmd_rank)

    pw = sub.add_parser("planewave", parents=[common], help="check a generator on on-shell plane waves")
    g = pw.add_mutually_exclusive_group(required=True)
    g.add_argument("--op")
    g.add_argument("--expr")
    pw.set_defaults(func=cmd_planewave)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = build_rep(args.rep)
    except CliffordViolation as exc:
        return _error("clifford", str(exc), pair=list(exc.pair))
    except ValueError as exc:
        return _error("rep", str(exc))
    try:
        return args.func(args, rep)
    except expr.ExprSyntaxError as exc:
        return _error("syntax", str(exc), offset=exc.offset)
    except expr.UnknownSymbolError as exc:
        return _error("unknown-symbol", str(exc), symbol=exc.name, offset=exc.offset)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        return _error("invalid", str(exc))


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)
