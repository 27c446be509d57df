"""The ``matgen`` command line: JSON in, JSON out.

Exit codes: 0 success / true, 1 false / violations found, 2 usage or input
errors (including malformed JSON), 3 domain errors (NotSplit, Inconclusive,
CapExceeded and other DomainError subclasses).
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import jsonio
from .classify import (
    alpha_class,
    apply_transform,
    classify_m2_triple,
    classify_m3_quintuple,
    equivalent_m3,
    s_alpha,
)
from .enumeration import (
    DIM_CASES,
    azumaya_bound_check,
    dim_arith_report,
    dim_Z,
    suite_four_lines,
    suite_indep_sub3,
    suite_laffey_random,
    suite_pgl2,
    suite_unital_random,
)
from .errors import DomainError, MatgenError
from .exactfield import Scalar, parse_field
from .genset import (
    DEFAULT_HAT_CAP,
    BlockShape,
    CornerShape,
    canonical_irredundant,
    complete_from_corner,
    extract_irredundant,
    hat_matrix,
    hat_set,
    is_irredundant_generating,
    laffey_equiv_check,
)
from .matalg import centralizer, generates, span_close
from .subspace import gl_independent, m_independent, pattern_classify, stabilizer_algebra

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

SUITES = ("indep-sub3", "pgl2", "four-lines", "laffey-random", "unital-random", "dims")
DEFAULT_Q = {"indep-sub3": 3, "pgl2": 3, "four-lines": 3, "laffey-random": 5}


class UsageError(MatgenError, ValueError):
    pass


def _cap() -> int:
    env = os.environ.get("MATGEN_CAP")
    if env is None:
        return DEFAULT_HAT_CAP
    try:
        cap = int(env)
    except ValueError:
        raise UsageError(f"MATGEN_CAP must be an integer, got {env!r}") from None
    if cap < 1:
        raise UsageError("MATGEN_CAP must be positive")
    return cap


# input helpers


def _read_inputs(args) -> list:
    """Parsed JSON documents from --json, the positional paths, or stdin."""
    if args.json is not None:
        return [jsonio.loads(args.json, "--json")]
    paths = args.inputs or ["-"]
    docs = []
    for p in paths:
        if p == "-":
            docs.append(jsonio.loads(sys.stdin.read(), "<stdin>"))
        else:
            try:
                with open(p, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as e:
                raise UsageError(f"{p}: {e.strerror}") from None
            docs.append(jsonio.loads(text, p))
    return docs


def _field(args):
    if getattr(args, "field", None) is None:
        return None
    try:
        return parse_field(args.field)
    except (ValueError, TypeError) as e:
        raise UsageError(f"--field: {e}") from None


def _matrices(args, doc=None):
    doc = _read_inputs(args)[0] if doc is None else doc
    S = jsonio.matrices_from_json(doc, _field(args))
    if not S:
        raise UsageError("$: expected at least one matrix")
    if S[0].nrows != S[0].ncols:
        raise UsageError("$: matrices must be square")
    return S


def _subspaces(args):
    doc = _read_inputs(args)[0]
    fam = jsonio.subspaces_from_json(doc, _field(args))
    return fam


def _scalar(f, text, flag):
    try:
        return Scalar._raw(f, f.parse(text))
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise UsageError(f"{flag}: bad scalar {text!r} for {f}: {e}") from None


def _shape(args) -> BlockShape:
    doc = jsonio.loads(args.blocks, "--blocks")
    if isinstance(doc, dict):
        doc = doc.get("blocks")
    if not isinstance(doc, list) or not all(isinstance(b, list) and len(b) == 2 for b in doc):
        raise UsageError("--blocks: expected [[r1,k1],...] or {\"blocks\": [[r1,k1],...]}")
    return BlockShape(tuple(tuple(b) for b in doc))


def _witness_json(w):
    if w is None:
        return None
    return [
        {"subspace": jsonio.subspace_json(e.subspace), "matrix": jsonio.matrix_json(e.matrix), "invertible": e.invertible}
        for e in w
    ]


# subcommands; each returns (report, exit code)


def cmd_gen_check(args):
    S = _matrices(args)
    A = span_close(S, unital=args.unital)
    n = S[0].nrows
    ok = A.dim == n * n
    return {"generates": ok, "dim": A.dim, "n": n, "unital": args.unital}, EXIT_OK if ok else EXIT_FALSE


def cmd_irredundant_check(args):
    S = _matrices(args)
    gen = generates(S)
    irr = is_irredundant_generating(S) if gen else False
    return {"generates": gen, "irredundant": irr, "size": len(S)}, EXIT_OK if gen and irr else EXIT_FALSE


def cmd_extract(args):
    S = _matrices(args)
    T = extract_irredundant(S)
    n = S[0].nrows
    return {"field": str(S[0].field), "n": n, "size": len(T), "bound": 2 * n - 1, "matrices": jsonio.matrices_json(T)}, EXIT_OK


def cmd_canonical(args):
    f = _field(args) or parse_field("qq")
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    S = canonical_irredundant(args.n, f)
    return {"field": str(f), "n": args.n, "matrices": jsonio.matrices_json(S)}, EXIT_OK


def cmd_corner_complete(args):
    S = _matrices(args)
    n = S[0].nrows
    T = complete_from_corner(CornerShape(args.p, args.q, n), S)
    rep = {
        "field": str(S[0].field),
        "n": n,
        "p": args.p,
        "q": args.q,
        "size": len(T),
        "bound": 2 * n - args.p - args.q,
        "matrices": jsonio.matrices_json(T),
    }
    return rep, EXIT_OK


def cmd_hat(args):
    S = _matrices(args)
    shape = _shape(args)
    cap = _cap()
    hats = [jsonio.matrices_json(hat_matrix(shape, x, cap)) for x in S]
    rep = {
        "field": str(S[0].field),
        "blocks": [list(b) for b in shape.blocks],
        "g": shape.g,
        "hats": hats,
        "matrices": jsonio.matrices_json(hat_set(shape, S, cap)),
    }
    return rep, EXIT_OK


def cmd_laffey_check(args):
    S = _matrices(args)
    shape = _shape(args)
    lhs, rhs = laffey_equiv_check(shape, S, _cap())
    return {"blocks": [list(b) for b in shape.blocks], "lhs": lhs, "rhs": rhs, "agree": lhs == rhs}, (
        EXIT_OK if lhs == rhs else EXIT_FALSE
    )


def _indep(args, fn):
    fam = _subspaces(args)
    ok, w = fn(fam)
    return {"independent": ok, "size": len(fam), "witness": _witness_json(w)}, EXIT_OK if ok else EXIT_FALSE


def cmd_gl_indep(args):
    return _indep(args, gl_independent)


def cmd_m_indep(args):
    return _indep(args, m_independent)


def cmd_pattern(args):
    fam = _subspaces(args)
    m = pattern_classify(fam)
    if m is None:
        return {"pattern": None, "roles": None}, EXIT_FALSE
    names = ("L1", "L2", "L3", "P1", "P2") if m.pattern.value == "Pattern1" else ("L1", "L2", "P1", "P2", "P3")
    return {"pattern": m.pattern.value, "roles": dict(zip(names, m.roles))}, EXIT_OK


def cmd_stab_algebra(args):
    fam = _subspaces(args)
    f = _field(args)
    if not fam and (args.n is None or f is None):
        raise UsageError("an empty family needs --n and --field")
    W = stabilizer_algebra(fam, n=args.n, field=f)
    return {"field": str(W.field), "n": W.n, "dim": W.dim, "matrices": jsonio.matrices_json(W.matrices())}, EXIT_OK


def cmd_centralizer(args):
    S = _matrices(args)
    C = centralizer(S)
    return {"field": str(C.field), "n": C.n, "dim": C.dim, "matrices": jsonio.matrices_json(C.matrices())}, EXIT_OK


def cmd_classify2(args):
    S = _matrices(args)
    if len(S) != 3 or S[0].nrows != 2:
        raise UsageError("classify2 needs three 2x2 matrices")
    rec, target = classify_m2_triple(*S)
    return {"field": str(S[0].field), "record": rec.to_json(), "matrices": jsonio.matrices_json(target)}, EXIT_OK


def cmd_classify3(args):
    S = _matrices(args)
    if len(S) != 5 or S[0].nrows != 3:
        raise UsageError("classify3 needs five 3x3 matrices")
    c = classify_m3_quintuple(S)
    rep = {"field": str(S[0].field)}
    rep.update(c.to_json())
    rep["matrices"] = jsonio.matrices_json(apply_transform(S, c.record))
    return rep, EXIT_OK


def cmd_s_alpha(args):
    f = _field(args) or parse_field("qq")
    a = _scalar(f, args.alpha, "--alpha")
    return {"field": str(f), "alpha": str(a), "matrices": jsonio.matrices_json(s_alpha(a))}, EXIT_OK


def cmd_alpha_class(args):
    f = _field(args) or parse_field("qq")
    a = _scalar(f, args.alpha, "--alpha")
    rep = {"field": str(f)}
    rep.update(alpha_class(a, f).to_json())
    return rep, EXIT_OK


def cmd_equivalent3(args):
    docs = _read_inputs(args)
    if len(docs) == 1:
        d = docs[0]
        if not (isinstance(d, dict) and "left" in d and "right" in d):
            raise UsageError("equivalent3 needs two inputs or one object with \"left\" and \"right\"")
        docs = [d["left"], d["right"]]
    if len(docs) != 2:
        raise UsageError("equivalent3 needs exactly two sets")
    S, T = (_matrices(args, d) for d in docs)
    eq = equivalent_m3(S, T)
    return {"equivalent": eq}, EXIT_OK if eq else EXIT_FALSE


def _dims_suite(args):
    t0 = time.perf_counter()
    f = parse_field("gf:7")
    reports = [dim_arith_report("2x3", field=f)]
    reports += [dim_arith_report("3x5", alpha=a, field=f) for a in (0, 2, 3)]
    violations = sum(r["centralizer_dim"] != 1 for r in reports)
    violations += reports[0]["dim_I"] != 9
    violations += sum(r["dim_I"] != 19 for r in reports[1:])
    violations += dim_Z(3, 5) != 37
    violations += not azumaya_bound_check(7, 3, 5, 19, 37)
    violations += azumaya_bound_check(8, 3, 5, 19, 37)
    rep = {"suite": "dims", "field": str(f), "reports": reports, "dim_Z_3_5": dim_Z(3, 5)}
    rep["counts"] = {"violations": violations}
    rep["ok"] = violations == 0
    rep["elapsed"] = round(time.perf_counter() - t0, 3)
    return rep


def _run_suite(name, args):
    q = args.q if args.q is not None else DEFAULT_Q.get(name)
    if name == "indep-sub3":
        return suite_indep_sub3(q, jobs=args.jobs, seed=args.seed).to_json()
    if name == "pgl2":
        return suite_pgl2(q).to_json()
    if name == "four-lines":
        return suite_four_lines(q).to_json()
    if name == "laffey-random":
        return suite_laffey_random(trials=args.trials or 200, q=q, seed=args.seed, cap=_cap()).to_json()
    if name == "unital-random":
        return suite_unital_random(trials=args.trials or 500, seed=args.seed).to_json()
    if name == "dims":
        return _dims_suite(args)
    raise UsageError(f"unknown suite {name!r}")


def cmd_verify(args):
    if args.suite == "all":
        if args.q is not None:
            raise UsageError("--q cannot be combined with --suite all")
        reports = [_run_suite(s, args) for s in SUITES]
        total = sum(r["counts"]["violations"] for r in reports)
        rep = {"suite": "all", "reports": reports, "violations": total, "ok": total == 0}
    else:
        rep = _run_suite(args.suite, args)
        total = rep["counts"]["violations"]
    return rep, EXIT_OK if total == 0 else EXIT_FALSE


def cmd_dims(args):
    f = _field(args) or parse_field("gf:7")
    alpha = _scalar(f, args.alpha, "--alpha") if args.alpha is not None else 0
    return dim_arith_report(args.case, alpha=alpha, field=f), EXIT_OK


def cmd_azumaya_check(args):
    case = f"{args.n}x{args.r}"
    dim_I, dim_z = args.dim_I, args.dim_Z
    if dim_z is None:
        dim_z = dim_Z(args.n, args.r)
    if dim_I is None:
        if case not in DIM_CASES:
            raise UsageError(f"--dim-I is required unless (n, r) is one of {sorted(DIM_CASES)}")
        dim_I = dim_arith_report(case)["dim_I"]
    try:
        ok = azumaya_bound_check(args.d, args.n, args.r, dim_I, dim_z)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rep = {
        "d": args.d,
        "n": args.n,
        "r": args.r,
        "dim_I": dim_I,
        "dim_Z": dim_z,
        "threshold": args.r * args.n**2 - max(dim_I, dim_z),
        "guaranteed": ok,
    }
    if ok:
        rep["message"] = f"locally redundant generating {args.r}-tuple guaranteed"
    return rep, EXIT_OK if ok else EXIT_FALSE


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for suites (default 1)")
    common.add_argument("--no-timing", action="store_true", help="drop timing fields from the report")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")

    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("inputs", nargs="*", help="JSON input files ('-' or none for stdin)")
    inp.add_argument("--json", help="inline JSON input")
    inp.add_argument("--field", help='field spec: "qq", "gf:p" or "gf:p^k"')

    fld = argparse.ArgumentParser(add_help=False)
    fld.add_argument("--field", help='field spec: "qq", "gf:p" or "gf:p^k"')

    p = argparse.ArgumentParser(prog="matgen", description="Exact generating sets of matrix algebras.")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, fn, parents, help_):
        sp = sub.add_parser(name, parents=[common] + parents, help=help_)
        sp.set_defaults(handler=fn)
        return sp

    sp = add("gen-check", cmd_gen_check, [inp], "does a set generate M_n")
    sp.add_argument("--unital", action="store_true", help="allow the identity for free")
    add("irredundant-check", cmd_irredundant_check, [inp], "generating and irredundant?")
    add("extract", cmd_extract, [inp], "irredundant generating subset")
    sp = add("canonical", cmd_canonical, [fld], "the canonical irredundant set of size 2n-1")
    sp.add_argument("--n", type=int, required=True)
    sp = add("corner-complete", cmd_corner_complete, [inp], "shortest completion of a p x q corner")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp = add("hat", cmd_hat, [inp], "hat transcription relative to a block shape")
    sp.add_argument("--blocks", required=True, help="JSON [[r1,k1],...]")
    sp = add("laffey-check", cmd_laffey_check, [inp], "compare generation before and after the hat transcription")
    sp.add_argument("--blocks", required=True, help="JSON [[r1,k1],...]")
    add("gl-indep", cmd_gl_indep, [inp], "GL-independence of a family of subspaces")
    add("m-indep", cmd_m_indep, [inp], "monoid independence of a family of subspaces")
    add("pattern", cmd_pattern, [inp], "pattern of a 5-family in Sub(F^3)")
    sp = add("stab-algebra", cmd_stab_algebra, [inp], "stabilizer algebra of a family")
    sp.add_argument("--n", type=int)
    add("centralizer", cmd_centralizer, [inp], "centralizer of a set of matrices")
    add("classify2", cmd_classify2, [inp], "normal form of an irredundant generating triple of M_2")
    add("classify3", cmd_classify3, [inp], "normal form of an irredundant generating 5-set of M_3")
    sp = add("s-alpha", cmd_s_alpha, [fld], "the one-parameter family of 5-sets")
    sp.add_argument("--alpha", required=True)
    sp = add("alpha-class", cmd_alpha_class, [fld], "candidate and verified equivalent parameters")
    sp.add_argument("--alpha", required=True)
    add("equivalent3", cmd_equivalent3, [inp], "are two 5-sets of M_3 equivalent")
    sp = add("verify", cmd_verify, [], "run a verification suite")
    sp.add_argument("--suite", required=True, choices=SUITES + ("all",))
    sp.add_argument("--q", type=int, help="field size for the suite")
    sp.add_argument("--trials", type=int, help="instance count for the random suites")
    sp = add("dims", cmd_dims, [fld], "orbit-formula dimension report")
    sp.add_argument("--case", required=True, choices=sorted(DIM_CASES))
    sp.add_argument("--alpha", help="parameter of the 3x5 family (default 0)")
    sp = add("azumaya-check", cmd_azumaya_check, [], "generator-count bound for Azumaya algebras")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--dim-I", dest="dim_I", type=int)
    sp.add_argument("--dim-Z", dest="dim_Z", type=int)
    return p


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "elapsed"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _emit(report, args):
    if args is not None and args.no_timing:
        report = _strip_timing(report)
    text = jsonio.dumps(report) + "\n"
    if args is not None and args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind, exc, code, args):
    print(f"matgen: {exc}", file=sys.stderr)
    _emit({"error": kind, "message": str(exc)}, args)
    return code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    if args.jobs < 1:
        print("matgen: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        report, code = args.handler(args)
    except DomainError as e:
        return _error(type(e).__name__, e, EXIT_DOMAIN, args)
    except (MatgenError, ValueError) as e:
        return _error(type(e).__name__, e, EXIT_USAGE, args)
    _emit(report, args)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
