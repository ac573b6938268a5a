"""``ndepth`` command line.

Exit codes: 0 when every check passes, 1 for a verified negative verdict,
2 for input errors (bad file, bad flag, unknown subcommand).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures
from .document import SCHEMA_VERSION, DocumentError, InputDocument, _map, parse_input
from .exactmath import format_scalar
from .structures import (
    SignatureError,
    end_dga,
    end_nilpotency,
    kapranov_cohomology,
    validate_ainfN,
    validate_nassociative,
    validate_ncomplex,
    validate_ndga,
    validate_ndgla,
)
from .tensorcoalg import FULL, TWO_TRUNCATED

__all__ = ["main", "parse_input", "load"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def load(ref: str) -> InputDocument:
    """A path, or ``fixture:<name>`` for one of the shipped fixtures."""
    if ref.startswith("fixture:"):
        name = ref.split(":", 1)[1]
        if name not in fixtures.ALL:
            raise DocumentError(f"unknown fixture {name!r}; known: {', '.join(sorted(fixtures.ALL))}")
        return parse_input(fixtures.json_path(name))
    return parse_input(ref)


def _emit(args, payload: dict, lines: list[str]):
    if args.json:
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(lines))


def _pf(ok) -> str:
    return "PASS" if ok else "FAIL"


# -- check -------------------------------------------------------------------------


def _verdict_lines(rep) -> list[str]:
    out = []
    for v in rep.verdicts:
        line = f"  {v.axiom}: {_pf(v.holds)}"
        if not v.holds:
            val = {k: format_scalar(c) for k, c in (v.value or {}).items()}
            line += f" witness={list(v.witness or ())} value={val}"
        out.append(line)
    return out


def _semantic_lines(rep, semantics) -> list[str]:
    out = []
    if rep.corestriction is not None and semantics in ("corestriction", "both"):
        fail = rep.corestriction.first_failure()
        line = f"  corestriction N={rep.N}: {_pf(rep.corestriction.holds)}"
        if fail is not None:
            line += f" first failure at arity {fail.l}, word {list(fail.witness)}"
        out.append(line)
        if rep.proper is not None:
            out.append(f"  proper (corestriction fails at N-1): {rep.proper}")
    if rep.strict is not None and semantics in ("strict", "both"):
        s = rep.strict
        line = f"  strict δ^{s.N} = 0 on T^<={s.truncation}: {_pf(s.holds)}"
        if not s.holds:
            i, j, w = s.first_failure
            line += f" block ({i},{j}) word {list(w)} value {s.value}"
        out.append(line)
        if rep.strict_proper is not None:
            out.append(f"  strictly proper (δ^(N-1) != 0): {rep.strict_proper}")
    return out


def _semantic_ok(rep, semantics) -> bool:
    ok = True
    if semantics in ("corestriction", "both") and rep.corestriction is not None:
        ok = ok and rep.corestriction.holds
    if semantics == "strict" and rep.strict is not None:
        ok = ok and rep.strict.holds
    return ok


def cmd_check(args) -> int:
    doc = load(args.file)
    P = doc.presentation
    N = args.N or P.N
    L = args.L or doc.truncation
    mode = args.mode or doc.mode
    semantics = args.semantics or "both"
    reports = []
    if P.kind in ("ncomplex", "ncgc"):
        reports.append(validate_ncomplex(P, N))
    elif P.kind == "ndga":
        reports.append(validate_ndga(P, N))
        if args.semantics:
            reports.append(validate_ainfN(P, N, L, mode))
    elif P.kind == "ndgla":
        reports.append(validate_ndgla(P, N))
    elif P.kind == "nassociative":
        reports.append(validate_nassociative(P, N, L))
    else:
        reports.append(validate_ainfN(P, N, L, TWO_TRUNCATED if P.kind == "depthN" else mode))

    ok = all(r.valid for r in reports if r.corestriction is None) and all(
        _semantic_ok(r, semantics) for r in reports if r.corestriction is not None
    )
    lines = [f"{P.name or args.file}: kind={P.kind} N={N}"]
    for r in reports:
        lines.append(f"[{r.kind}]")
        if r.corestriction is None:
            lines += _verdict_lines(r)
            if r.proper is not None:
                lines.append(f"  proper: {r.proper}")
        else:
            lines += _semantic_lines(r, semantics)
        lines += [f"  note: {n}" for n in r.notes]
    lines.append(f"verdict: {_pf(ok)}")
    payload = {"report": "check", "name": P.name, "semantics": semantics, "passed": ok, "reports": [r.to_json() for r in reports]}
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


# -- cohomology / deform -------------------------------------------------------------


def cmd_cohomology(args) -> int:
    doc = load(args.file)
    P = doc.presentation
    if args.complex:
        N = args.N or P.N
        H = kapranov_cohomology(P, N)
        lines = [f"H_p of the {N}-complex {P.name}:"] + [f"  H_{p} = {h}" for p, h in H.items()]
        _emit(args, {"report": "kapranov_cohomology", "N": N, "H": {str(p): h for p, h in H.items()}}, lines)
        return EXIT_OK
    from .deformation import cohomology_HNM

    if args.N is None or args.M is None:
        raise InputError("cohomology needs --complex, or both -N and -M")
    rep = cohomology_HNM(P, args.N, args.M)
    lines = [
        f"H^2_({rep.N},{rep.M}) of {P.name}: {rep.dim_H}",
        f"  dim C1 = {rep.dim_C1}, dim C2 = {rep.dim_C2}, dim ker t_{rep.M} = {rep.dim_ker_tM}, rank t_1 = {rep.dim_im_t1}",
        f"  t_{rep.M}·t_1 = 0: {rep.composite_zero}",
    ]
    _emit(args, rep.to_json(), lines)
    return EXIT_OK


def _read_cochain(path: str, P) -> dict:
    """``{"h": {"<j>": {"<arity>": [entries on A[1]]}}}``; entries as in ``mk`` blocks."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(raw, dict) or not isinstance(raw.get("h"), dict):
        raise DocumentError(f"{path}: expected an object with an 'h' block")
    S = P.space.shift(1)
    out = {}
    for j, comps in raw["h"].items():
        if not (j.isdigit() and isinstance(comps, dict) and all(k.isdigit() for k in comps)):
            raise DocumentError(f"h.{j}: power and arity keys must be integers")
        out[int(j)] = {int(k): _map(v, f"h.{j}.{k}", S, int(k), 1) for k, v in comps.items()}
    return out


def cmd_deform(args) -> int:
    from .deformation import cohomology_HNM, full_check, kernel_inclusion, proper_search

    P = load(args.file).presentation
    N, M = args.N, args.M
    payload = {"report": "deform", "N": N, "M": M}
    lines = []
    ok = True
    rep = cohomology_HNM(P, N, M)
    payload["cohomology"] = rep.to_json()
    lines.append(f"H^2_({N},{M}) = {rep.dim_H} (ker t_{M}: {rep.dim_ker_tM}, im t_1: {rep.dim_im_t1})")
    inc, wit = kernel_inclusion(P, M)
    payload["kernel_inclusion"] = {"holds": inc, "witness": wit}
    lines.append(f"ker t_{M} ⊆ ker t_{M + 1}: {inc}")
    ok = ok and inc
    cert = None
    if args.search_proper:
        cert = proper_search(P, N, M)
        payload["proper"] = None if cert is None else cert.to_json()
        if cert is None:
            lines.append(f"no proper ({N},{M})-deformation in arity 2")
            ok = False
        else:
            lines.append(f"proper ({N},{M})-deformation: f = {cert.f_unshifted.to_json()['entries']}")
            lines.append(f"  t_{M}(f) = 0: {cert.tM_zero}; t_{M - 1}(f) != 0: {cert.tM1_nonzero}")
            if cert.identity_one_holds is not None:
                lines.append(f"  first identity holds: {cert.identity_one_holds}")
            lines.append(f"  second identity witness: {cert.identity_two_witness}")
    if args.full is not None:
        if args.cochain:
            e = _read_cochain(args.cochain, P)
        elif cert is not None:
            e = {1: {2: cert.f}}
        else:
            raise InputError("--full needs --cochain FILE (or --search-proper with a certificate)")
        fr = full_check(P, e, N, M, args.full)
        payload["full"] = fr.to_json()
        lines.append(f"over k[h]/(h^{args.full}): (δ + hF)^{M} = 0: {_pf(fr.deformation)}")
        lines.append(f"  corestriction zero: {fr.corestriction_zero}; h-coefficient equals t_{M}(f): {fr.h1_matches_tM}")
        if fr.residual_h1:
            lines.append(f"  h-residual: {fr.residual_h1}")
        ok = ok and fr.deformation
    payload["passed"] = ok
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


# -- mc / trees / operad / series ---------------------------------------------------


def cmd_mc(args) -> int:
    from .maurercartan import mc_coefficients, nc_oracle

    table = mc_coefficients(args.N, args.M)
    lines = [f"c(s,{args.M}) for N={args.N}:"]
    for s, c in sorted(table.entries.items(), key=lambda kv: (kv[0].length, kv[0].parts)):
        lines.append(f"  c({s},{args.M}) = {format_scalar(c)}")
    for k, terms in sorted(table.assembled.items()):
        body = " + ".join(f"{format_scalar(c)}·e^{s}" for s, c in terms) or "0"
        lines.append(f"  c_{k} = {body}")
    payload = {"report": "mc", "table": table.to_json()}
    ok = True
    if args.oracle:
        res = nc_oracle(args.N, args.M, table)
        ok = res.equal
        payload["oracle"] = res.to_json()
        lines.append(f"oracle: {'EQUAL' if res.equal else 'DIFFERENT'}")
        if not res.equal:
            lines.append(f"  difference: {res.difference}")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_trees(args) -> int:
    from .trees import enumerate_arity, enumerate_ub

    if args.vertices is not None:
        if args.unary is not None or args.binary is not None:
            raise InputError("use either --unary/--binary or --vertices")
        trees = enumerate_arity(args.leaves, args.vertices)
    elif args.unary is not None and args.binary is not None:
        trees = enumerate_ub(args.leaves, args.unary, args.binary)
    else:
        raise InputError("trees needs --unary and --binary, or --vertices")
    ser = [t.serialize() for t in trees]
    _emit(args, {"report": "trees", "leaves": args.leaves, "count": len(ser), "trees": ser}, [f"{len(ser)} trees"] + ser)
    return EXIT_OK


OPERAD_KINDS = ("ndga", "ndgla", "assN", "dgass")


def cmd_operad(args) -> int:
    from . import operadcount as oc

    N, n = args.N, args.max
    ok = True
    if args.kind == "ndga":
        dims = oc.ndga_dims(N, n)
    elif args.kind == "ndgla":
        dims = oc.ndgla_dims(N, n)
    elif args.kind == "assN":
        dims = oc.assN_dims(N, min(n, N + 1))
    else:
        dims = oc.dgass_dims(N, n, args.u_max)
    lines = [f"{args.kind} N={N}:"]
    for a, row in dims.items():
        lines.append(f"  n={a}: {row}")
        if "closed_form" in row:
            ok = ok and row["dim"] == row["closed_form"]
    payload = {"report": "operad", "kind": args.kind, "N": N, "dims": {str(k): v for k, v in dims.items()}}
    if args.kind == "assN" and n >= N + 1:
        payload["printed_formula"] = str(oc.assN_printed_formula(N))
        payload["candidate"] = oc.assN_candidate(N)
        lines.append(f"  printed closed form: {oc.assN_printed_formula(N)}; (N+1)!(C_N - 1) = {oc.assN_candidate(N)}")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_series(args) -> int:
    from .operadcount import series_check

    rep = series_check(args.kind, args.N, args.order)
    lines = [f"{args.kind} N={args.N} to order {args.order}: {_pf(rep.passed)}"]
    for i, (a, b) in enumerate(zip(rep.computed, rep.expected), 1):
        lines.append(f"  x^{i}: computed {a}, closed form {b}{'' if a == b else '  <-- mismatch'}")
    _emit(args, rep.to_json(), lines)
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- endalg / audit --------------------------------------------------------------


def cmd_endalg(args) -> int:
    P = load(args.file).presentation
    N = args.N or P.N
    E = end_dga(P, N, args.commutator)
    target = 2 * N - 1
    order = end_nilpotency(E, target + 1)
    rep = validate_ndga(E, target)
    ok = order is not None and order <= target and rep.valid
    lines = [
        f"End({P.name}): dim {E.space.dim}, commutator {args.commutator}",
        f"  nilpotency order of d: {order} (bound {target})",
        f"  proper (d^{target - 1} != 0): {order == target}",
    ] + _verdict_lines(rep)
    payload = {"report": "endalg", "N": N, "target": target, "nilpotency_order": order, "passed": ok, "validation": rep.to_json()}
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_audit(args) -> int:
    from .audit import render, run_audit

    findings = run_audit()
    text = render(findings)
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        _emit(args, {"report": "audit", "findings": [f.__dict__ for f in findings]}, [])
    elif not args.out:
        print(text)
    else:
        print(f"wrote {args.out} ({len(findings)} findings)")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = _Parser(prog="ndepth", description="Exact checks for N-complexes, N-dgas and their deformations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="validate a structure")
    c.add_argument("file")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--strict", dest="semantics", action="store_const", const="strict")
    g.add_argument("--corestriction", dest="semantics", action="store_const", const="corestriction")
    g.add_argument("--both", dest="semantics", action="store_const", const="both")
    c.add_argument("-N", type=int)
    c.add_argument("-L", type=int, help="tensor truncation length")
    c.add_argument("--mode", choices=[FULL, TWO_TRUNCATED])
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("cohomology", parents=[common], help="Kapranov or deformation cohomology")
    c.add_argument("file")
    c.add_argument("--complex", action="store_true")
    c.add_argument("-N", type=int)
    c.add_argument("-M", type=int)
    c.set_defaults(func=cmd_cohomology)

    c = sub.add_parser("deform", parents=[common], help="deformation theory")
    c.add_argument("file")
    c.add_argument("-N", type=int, required=True)
    c.add_argument("-M", type=int, required=True)
    c.add_argument("--search-proper", action="store_true")
    c.add_argument("--full", type=int, metavar="p", help="check over k[h]/(h^p)")
    c.add_argument("--cochain", help="JSON file with the h-coefficients")
    c.set_defaults(func=cmd_deform)

    c = sub.add_parser("mc", parents=[common], help="Maurer-Cartan coefficients")
    c.add_argument("-N", type=int, required=True)
    c.add_argument("-M", type=int, required=True)
    c.add_argument("--oracle", action="store_true")
    c.set_defaults(func=cmd_mc)

    c = sub.add_parser("trees", parents=[common], help="enumerate planar rooted trees")
    c.add_argument("--leaves", type=int, required=True)
    c.add_argument("--unary", type=int)
    c.add_argument("--binary", type=int)
    c.add_argument("--vertices", type=int)
    c.set_defaults(func=cmd_trees)

    c = sub.add_parser("operad", parents=[common], help="operad dimensions")
    c.add_argument("kind", choices=OPERAD_KINDS)
    c.add_argument("-N", type=int, required=True)
    c.add_argument("--max", type=int, required=True)
    c.add_argument("--u-max", type=int, default=3, help="degree bound for dgass")
    c.set_defaults(func=cmd_operad)

    from .operadcount import SERIES_KINDS

    c = sub.add_parser("series", parents=[common], help="generating series check")
    c.add_argument("kind", choices=SERIES_KINDS)
    c.add_argument("-N", type=int, required=True)
    c.add_argument("--order", type=int, required=True)
    c.set_defaults(func=cmd_series)

    c = sub.add_parser("endalg", parents=[common], help="End(C) of an N-complex")
    c.add_argument("file")
    c.add_argument("-N", type=int)
    c.add_argument("--commutator", choices=["graded", "ungraded"], default="graded")
    c.set_defaults(func=cmd_endalg)

    c = sub.add_parser("audit", parents=[common], help="recompute findings.md")
    c.add_argument("--out")
    c.set_defaults(func=cmd_audit)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, InputError, SignatureError) as exc:
        print(f"ndepth: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"ndepth: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
