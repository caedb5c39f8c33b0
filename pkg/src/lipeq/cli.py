"""``lipeq`` command-line front end.

Exit codes: 0 Equivalent / success, 1 NotEquivalent, 2 Unknown,
64 usage error, 65 input parse error, 70 certificate re-verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from .decide import (
    EQUIVALENT,
    NOT_EQUIVALENT,
    Verdict,
    certificate_from_dict,
    decide,
    decide_ratio,
    verify_certificate,
)
from .derivation import (
    DEFAULT_BUDGET,
    CertificateChain,
    ExpMultiset,
    SearchBudget,
    common_refinement,
    equivalence_chain,
    partition_for_homogeneous,
)
from .errors import CertificateError, InputError
from .irreducibility import quadrinomial_decompose, quadrinomial_irreducible, trinomial_analyze
from .vectors import DEFAULT_TOL, PowerVector, RatioVector, dimension, prime_exponent_rows, rank

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_SOFTWARE = 70

OUTCOME_EXIT = {EQUIVALENT: EXIT_OK, NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "")
        if message:
            sys.stderr.write(message)
        raise _HelpExit()


class _HelpExit(Exception):
    pass


def _sign(text: str) -> int:
    t = text.strip()
    if t in ("+", "+1", "1"):
        return 1
    if t in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError(f"sign must be +1 or -1, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"environment variable {name} must be an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-weight", type=int)
    common.add_argument("--max-size", type=int)
    common.add_argument("--max-chain", type=int)
    common.add_argument("--tol", type=_fraction, help="dimension tolerance, e.g. 1e-12 or 1/1000")

    p = _Parser(prog="lipeq", description="Lipschitz equivalence of dust-like Cantor sets.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("decide", parents=[common], help="decide two lambda-power vectors")
    s.add_argument("--alpha", required=True, help="exponents, e.g. 8,7,1")
    s.add_argument("--beta", required=True)

    s = sub.add_parser("decide-ratio", parents=[common], help="decide two rational ratio vectors")
    s.add_argument("--alpha", required=True, help="ratios, e.g. 1/2,1/3")
    s.add_argument("--beta", required=True)

    s = sub.add_parser("dim", parents=[common], help="root lam^s of the dimension equation")
    s.add_argument("vector")

    s = sub.add_parser("poly-tri", parents=[common], help="analyze x^a + eps x^b + delta")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("--eps", type=_sign, default=1)
    s.add_argument("--delta", type=_sign, default=-1)

    s = sub.add_parser("poly-quad", parents=[common], help="analyze x^a + e1 x^b + e2 x^c + e3")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.add_argument("c", type=int)
    s.add_argument("--signs", default="+,+,-", help="e1,e2,e3 (default +,+,-)")

    for name in ("refine", "chain"):
        s = sub.add_parser(name, parents=[common],
                           help="common refinement" if name == "refine" else "equivalence chain")
        s.add_argument("--alpha", required=True)
        s.add_argument("--beta", required=True)

    s = sub.add_parser("partition", parents=[common], help="word list with given lengths over m letters")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--targets", required=True, help="lengths, e.g. 1,2,2")

    s = sub.add_parser("rank", parents=[common], help="rank of the group generated by ratios")
    s.add_argument("vector")

    s = sub.add_parser("verify-cert", parents=[common], help="re-verify a certificate or verdict JSON")
    s.add_argument("path", help="file path, or - for stdin")
    return p


def _budget(args) -> SearchBudget:
    def pick(flag, env, default):
        return flag if flag is not None else _env_int(env, default)

    try:
        return SearchBudget(
            pick(args.max_weight, "LIPEQ_BUDGET_MAX_WEIGHT", DEFAULT_BUDGET.max_weight),
            pick(args.max_size, "LIPEQ_BUDGET_MAX_SIZE", DEFAULT_BUDGET.max_size),
            pick(args.max_chain, "LIPEQ_BUDGET_MAX_CHAIN", DEFAULT_BUDGET.max_chain),
        )
    except InputError as exc:
        raise UsageError(str(exc)) from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _verdict_text(v: Verdict) -> str:
    lines = [f"{v.outcome} (rule {v.rule})"]
    if v.certificate is not None:
        c = v.certificate
        if isinstance(c, CertificateChain):
            lines.append("chain: " + " ~ ".join(str(x) for x in c.vectors))
            for link in c.links:
                lines.append(f"  refinement {link.refinement}")
        else:
            lines.append(f"certificate: {c.kind}")
    if v.witness is not None:
        lines.append(f"witness: {v.witness.kind}")
    return "\n".join(lines)


def _cmd_decide(args):
    verdict = decide(PowerVector.parse(args.alpha), PowerVector.parse(args.beta), _budget(args))
    out = _dump(verdict.to_dict()) if args.format == "json" else _verdict_text(verdict)
    return OUTCOME_EXIT.get(verdict.outcome, EXIT_UNKNOWN), out


def _cmd_decide_ratio(args):
    verdict = decide_ratio(RatioVector.parse(args.alpha), RatioVector.parse(args.beta))
    out = _dump(verdict.to_dict()) if args.format == "json" else _verdict_text(verdict)
    return OUTCOME_EXIT.get(verdict.outcome, EXIT_UNKNOWN), out


def _cmd_dim(args):
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    if tol <= 0:
        raise UsageError("--tol must be positive")
    info = dimension(PowerVector.parse(args.vector), tol)
    if args.format == "json":
        return EXIT_OK, _dump(info.to_dict(tol))
    iv = info.root_interval
    return EXIT_OK, (f"char_poly {info.char_poly}\nlam^s ~ {float(info.approx):.15g}\n"
                     f"interval ({iv.lo}, {iv.hi})")


def _cmd_poly_tri(args):
    rep = trinomial_analyze(args.a, args.b, args.eps, args.delta)
    if args.format == "json":
        return EXIT_OK, _dump(rep.to_dict())
    out = f"{rep.polynomial}: {rep.verdict}"
    if rep.exceptional:
        out += f"\n  = ({rep.cyclo_factor}) * ({rep.cofactor})"
    return EXIT_OK, out


def _cmd_poly_quad(args):
    try:
        signs = [_sign(t) for t in args.signs.split(",")]
    except argparse.ArgumentTypeError as exc:
        raise InputError(str(exc)) from None
    if len(signs) != 3:
        raise InputError("--signs needs three entries")
    rep = quadrinomial_decompose(args.a, args.b, args.c, *signs)
    d = rep.to_dict()
    if signs == [1, 1, -1]:
        d["criterion"] = quadrinomial_irreducible(args.a, args.b, args.c).to_dict()
    if args.format == "json":
        return EXIT_OK, _dump(d)
    lines = [f"{rep.polynomial}", f"  A = {rep.A}", f"  B = {rep.B}"]
    if rep.exceptional_form:
        lines.append(f"  exceptional form {rep.exceptional_form} (r={rep.r})")
    lines.append("  factors: " + " * ".join(f"({f})" for f in rep.factors))
    return EXIT_OK, "\n".join(lines)


def _cmd_refine(args):
    v, w = ExpMultiset.of(*PowerVector.parse(args.alpha)), ExpMultiset.of(*PowerVector.parse(args.beta))
    r = common_refinement(v, w, _budget(args))
    if r is None:
        return EXIT_UNKNOWN, _dump(None) if args.format == "json" else "no common refinement within budget"
    if args.format == "json":
        return EXIT_OK, _dump({"refinement": list(r.multiset.entries),
                               "left": r.left.to_dict(), "right": r.right.to_dict()})
    return EXIT_OK, f"refinement {r.multiset}"


def _cmd_chain(args):
    v, w = ExpMultiset.of(*PowerVector.parse(args.alpha)), ExpMultiset.of(*PowerVector.parse(args.beta))
    c = equivalence_chain(v, w, _budget(args))
    if c is None:
        return EXIT_UNKNOWN, _dump(None) if args.format == "json" else "no chain within budget"
    if args.format == "json":
        return EXIT_OK, _dump(c.to_dict())
    return EXIT_OK, " ~ ".join(str(x) for x in c.vectors)


def _cmd_partition(args):
    try:
        targets = [int(t) for t in args.targets.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad target list {args.targets!r}") from None
    p = partition_for_homogeneous(args.m, targets)
    if args.format == "json":
        return EXIT_OK, _dump(p.to_dict())
    return EXIT_OK, " ".join(p.to_dict()["words"])


def _cmd_rank(args):
    v = RatioVector.parse(args.vector)
    r = rank(v)
    if args.format == "json":
        primes, rows = prime_exponent_rows(v)
        return EXIT_OK, _dump({"rank": r, "primes": primes, "rows": rows})
    return EXIT_OK, str(r)


def verify_cert_file(path: str) -> int:
    """Exit code for re-verifying the certificate stored at ``path`` (``-`` = stdin)."""
    try:
        return _verify_cert(path)[0]
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_DATAERR


def _verify_cert(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    inputs = None
    if isinstance(doc, dict) and "outcome" in doc:
        inputs = doc.get("inputs") or {}
        doc = doc.get("certificate")
        if doc is None:
            return EXIT_NOT_EQUIVALENT, "no certificate in verdict"
    cert = certificate_from_dict(doc)
    ok = verify_certificate(cert)
    if ok and inputs and inputs.get("mode") == "power" and hasattr(cert, "source"):
        ok = (cert.source, cert.target) == (ExpMultiset(tuple(inputs["alpha"])),
                                            ExpMultiset(tuple(inputs["beta"])))
    return (EXIT_OK, "certificate OK") if ok else (EXIT_NOT_EQUIVALENT, "certificate FAILED")


def _cmd_verify_cert(args):
    code, msg = _verify_cert(args.path)
    if args.format == "json":
        msg = _dump({"valid": code == EXIT_OK})
    return code, msg


COMMANDS = {
    "decide": _cmd_decide,
    "decide-ratio": _cmd_decide_ratio,
    "dim": _cmd_dim,
    "poly-tri": _cmd_poly_tri,
    "poly-quad": _cmd_poly_quad,
    "refine": _cmd_refine,
    "chain": _cmd_chain,
    "partition": _cmd_partition,
    "rank": _cmd_rank,
    "verify-cert": _cmd_verify_cert,
}


def run(argv: Optional[list[str]] = None) -> tuple[int, str]:
    """Run one command; returns ``(exit_code, stdout_text)``.  Errors go to stderr."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        return COMMANDS[args.command](args)
    except _HelpExit:
        return EXIT_OK, ""
    except UsageError as exc:
        print(str(exc).strip(), file=sys.stderr)
        return EXIT_USAGE, ""
    except CertificateError as exc:
        print(f"internal certificate failure: {exc}", file=sys.stderr)
        return EXIT_SOFTWARE, ""
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_DATAERR, ""


def main(argv: Optional[list[str]] = None) -> None:
    code, out = run(argv)
    if out:
        print(out)
    sys.exit(code)


if __name__ == "__main__":
    main()
