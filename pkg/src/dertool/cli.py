"""``dertool`` command line.

Exit codes: 0 success, 1 mathematical negative, 2 input error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .arith import q_str, series_identity_check
from .errors import DertoolError, InputError, MathNegative
from .io import atomic_write, dumps, load_algebra, load_json, parse_operator, read_element
from .linalg import Mat, jordan_chevalley
from .operators import materialize
from .parsing import format_element


def master_seed(flag) -> int:
    """--seed beats DERTOOL_SEED, which beats 0."""
    if flag is not None:
        return flag
    env = os.environ.get("DERTOOL_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"DERTOOL_SEED must be an integer, got {env!r}") from None


def _fmt(x):
    if hasattr(x, "algebra"):
        return format_element(x)
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    return x


def _emit(args, data: dict, lines: list[str] | None = None):
    if args.json or lines is None:
        sys.stdout.write(dumps(data))
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    out = getattr(args, "out", None)
    if out:
        atomic_write(out, dumps(data))


def _algebra(args):
    return load_algebra(args.algebra, args.degree_cap)


def _op(args, A):
    text = args.op
    if text.endswith(".json") and os.path.exists(text):
        return parse_operator(load_json(text), A)
    return parse_operator(text, A)


# --- subcommands --------------------------------------------------------------------


def cmd_check(args):
    from .calculus.classify import classify

    A = _algebra(args)
    T = _op(args, A)
    c = classify(T, samples=args.samples, seed=master_seed(args.seed))
    ln = c.is_locally_nilpotent
    data = {
        "operator": args.op,
        "algebra": A.name,
        "is_derivation": c.is_derivation,
        "is_endomorphism": c.is_endomorphism,
        "is_ederivation": c.is_ederivation,
        "locally_nilpotent": {"status": ln.status, "witness": _fmt(ln.witness)},
        "derivation_witness": _fmt(c.failure_witness),
        "endomorphism_witness": _fmt(c.endomorphism_witness),
        "sampled": c.sampled,
        "pairs_checked": c.pairs_checked,
    }
    lines = [
        f"operator {args.op} on {A.name}" + (" (sampled)" if c.sampled else ""),
        f"  derivation:    {c.is_derivation}" + (f"  witness {_fmt(c.failure_witness)}" if c.failure_witness else ""),
        f"  endomorphism:  {c.is_endomorphism}",
        f"  E-derivation:  {c.is_ederivation}",
        f"  locally nilpotent: {ln.status}" + (f"  {_fmt(ln.witness)}" if ln.witness else ""),
    ]
    _emit(args, data, lines)
    return 0


def cmd_jc(args):
    if args.matrix:
        M = Mat.from_json(load_json(args.matrix))
    else:
        A = _algebra(args)
        M = materialize(_op(args, A)).matrix
    jc = jordan_chevalley(M)
    data = {
        "semisimple": jc.semisimple.to_json(),
        "nilpotent": jc.nilpotent.to_json(),
        "witness": jc.witness.to_json(),
        "nilpotency_index": jc.nilpotency_index,
        "minimal_polynomial": jc.minimal_polynomial.to_json(),
    }
    lines = [
        f"minimal polynomial: {jc.minimal_polynomial}",
        f"semisimple = w(A), w = {jc.witness}",
        f"semisimple: {jc.semisimple.to_json()}",
        f"nilpotent:  {jc.nilpotent.to_json()} (index {jc.nilpotency_index})",
    ]
    _emit(args, data, lines)
    return 0


def _vec_text(A, vs):
    return "span{" + ", ".join(format_element(A.element(v)) for v in vs) + "}"


def cmd_grade(args):
    from .calculus.grading import grade

    A = _algebra(args)
    g = grade(_op(args, A), args.kind, A)
    data = g.to_json()
    lines = [f"{args.kind} grading on {A.name}"]
    for lam, vs in g.blocks.items():
        lines.append(f"  A_{q_str(lam)} = {_vec_text(A, vs)}")
    if g.reciprocal_pairs:
        lines.append("  reciprocal pairs (inclusion undecided): " + ", ".join(f"({q_str(a)}, {q_str(b)})" for a, b in g.reciprocal_pairs))
    _emit(args, data, lines)
    return 0


def cmd_image(args):
    from .calculus.grading import image_decomposition

    A = _algebra(args)
    r = image_decomposition(_op(args, A), args.kind, A)
    lines = [
        f"image   = {_vec_text(A, r.basis)}",
        f"kernel  = {_vec_text(A, r.kernel)}",
        f"nilpotent piece = {_vec_text(A, r.nilpotent_piece)}",
    ]
    for lam, vs in r.blocks.items():
        lines.append(f"  full block A_{q_str(lam)} = {_vec_text(A, vs)}")
    _emit(args, r.to_json(), lines)
    return 0


def cmd_exp(args):
    from .calculus.correspondence import exp_apply, xi_map

    A = _algebra(args)
    D = _op(args, A)
    a = read_element(args.element, A)
    xi, ex = xi_map(D, a), exp_apply(D, a)
    data = {"element": format_element(a), "xi": format_element(xi), "exp": format_element(ex)}
    _emit(args, data, [f"xi(D)(a) = {data['xi']}", f"exp(D)(a) = {data['exp']}"])
    return 0


def cmd_log(args):
    from .calculus.correspondence import lambda_map

    A = _algebra(args)
    delta = _op(args, A)
    a = read_element(args.element, A)
    out = lambda_map(delta, a)
    data = {"element": format_element(a), "log": format_element(out)}
    _emit(args, data, [f"log(I - delta)(a) = {data['log']}"])
    return 0


def cmd_certify(args):
    from .calculus.certificates import certify

    A = _algebra(args)
    op = _op(args, A)
    el = lambda text: None if text is None else read_element(text, A)
    cert = certify(op, el(args.target), e=el(args.e), s=el(args.s), a=el(args.a), b=el(args.b), side=args.side)
    data = cert.to_json()
    lines = [
        f"{cert.construction}: {args.op} maps {format_element(cert.preimage)} to {format_element(cert.target)}",
    ]
    if args.out:
        lines.append(f"certificate written to {args.out}")
    _emit(args, data, lines)
    return 0


def cmd_surjectivity(args):
    from .calculus.surjectivity import surjectivity_analysis

    A = _algebra(args)
    rep = surjectivity_analysis(_op(args, A), A)
    data = rep.to_json()
    if rep.status == "surjective":
        lines = [f"surjective: 1 = delta({format_element(rep.preimage_of_one)})"]
        for k, v in data.get("chain", {}).items():
            lines.append(f"  {k}: {v}")
    else:
        lines = ["1 is not in the image"]
    _emit(args, data, lines)
    return 0 if rep.status == "surjective" else 1


def cmd_hunt(args):
    from .calculus.hunter import hunter

    rep = hunter(args.mode, master_seed(args.seed), args.trials)
    lines = [
        f"{rep['mode']} seed={rep['seed']}: {rep['passes']}/{rep['trials']} passed, "
        f"{rep['skipped']} skipped, {len(rep['violations'])} violations, {rep['checks']} checks"
    ]
    _emit(args, rep, lines)
    return 0 if not rep["violations"] else 1


def cmd_verify(args):
    from .verify import verify_certificate

    v = verify_certificate(load_json(args.certificate))
    data = v.to_json()
    if v.ok:
        lines = [f"verified ({v.construction}): operator maps preimage to {v.expected}"]
    else:
        lines = [f"MISMATCH ({v.construction})", f"  expected {v.expected}", f"  got      {v.actual}"]
        for d in v.diff:
            where = f"degree {d['degree']}" if "degree" in d else d["basis"]
            lines.append(f"  at {where}: expected {d['expected']}, got {d['actual']}")
    _emit(args, data, lines)
    return 0 if v.ok else 1


def cmd_series_claim(args):
    idx = [args.i] if args.i is not None else list(range(1, 11))
    results = {str(i): series_identity_check(i, args.order) for i in idx}
    lines = [f"i={i} N={args.order}: {'ok' if ok else 'FAIL'}" for i, ok in results.items()]
    _emit(args, {"order": args.order, "results": results}, lines)
    return 0 if all(results.values()) else 1


# --- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")
    common.add_argument("--seed", type=int, default=None, help="master seed (overrides DERTOOL_SEED)")
    common.add_argument("--out", help="also write the JSON report here (atomically)")

    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("--algebra", default="Q[t]", help="built-in name or JSON file, optional [t] suffix (default Q[t])")
    alg.add_argument("--degree-cap", type=int, default=64)

    opp = argparse.ArgumentParser(add_help=False)
    opp.add_argument("--op", required=True, help="operator, e.g. d/dt, I-shift(1), ad(E12), matrix:file.json")

    p = argparse.ArgumentParser(prog="dertool", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common, alg, opp], help="classify an operator")
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("jc", parents=[common, alg], help="Jordan-Chevalley decomposition")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--op")
    g.add_argument("--matrix", help="JSON file holding a square matrix")
    s.set_defaults(func=cmd_jc)

    s = sub.add_parser("grade", parents=[common, alg, opp], help="eigenspace grading")
    s.add_argument("--kind", choices=["derivation", "endomorphism"], default="derivation")
    s.set_defaults(func=cmd_grade)

    s = sub.add_parser("image", parents=[common, alg, opp], help="image via the grading")
    s.add_argument("--kind", choices=["derivation", "ederivation"], default="derivation")
    s.set_defaults(func=cmd_image)

    s = sub.add_parser("exp", parents=[common, alg, opp], help="apply I - e^D and e^D")
    s.add_argument("--element", required=True)
    s.set_defaults(func=cmd_exp)

    s = sub.add_parser("log", parents=[common, alg, opp], help="apply ln(I - delta)")
    s.add_argument("--element", required=True)
    s.set_defaults(func=cmd_log)

    s = sub.add_parser("certify", parents=[common, alg, opp], help="build a preimage certificate")
    s.add_argument("--target", required=True)
    s.add_argument("--e", help="idempotent (default 1)")
    s.add_argument("--s", help="element with D(s) = e (solved for if omitted)")
    s.add_argument("--a", help="left factor of a two-sided target a*e*b")
    s.add_argument("--b", help="right factor of a two-sided target a*e*b")
    s.add_argument("--side", choices=["left", "right"])
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("surjectivity", parents=[common, alg, opp], help="is 1 in the image, and then everything?")
    s.set_defaults(func=cmd_surjectivity)

    s = sub.add_parser("hunt", parents=[common], help="seeded counterexample search")
    s.add_argument("--mode", required=True, choices=["central_idem_kernel", "no_idem_in_ker_and_im", "roundtrip", "transfer", "surjectivity", "grading"])
    s.add_argument("--trials", type=int, default=100)
    s.set_defaults(func=cmd_hunt)

    s = sub.add_parser("verify", parents=[common], help="re-check a certificate file")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("series-claim", parents=[common], help="check the series identity behind the exp/log inverse")
    s.add_argument("--i", type=int, default=None, help="single index (default 1..10)")
    s.add_argument("--order", type=int, default=30)
    s.set_defaults(func=cmd_series_claim)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MathNegative as exc:
        print(f"no: {exc}", file=sys.stderr)
        return exc.exit_code
    except DertoolError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    except (json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
