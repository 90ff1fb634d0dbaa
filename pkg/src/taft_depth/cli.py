"""Command-line front end: ``taft-depth <command> --n N [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DomainError, IngestError, TaftDepthError, TheoremViolation
from .greenring import parse_label, rule_case, tensor_labels
from .qarith import gauss_polynomial, q_binomial
from .taftmod import decompose, dump_module, load_module, module_of_Q_direct
from .verify import EXPLICIT_QQ_LIMIT, CheckResult, depth_certificate, q_module, run_suite, summarize

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _poly_text(coeffs, var="q"):
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append(body if not parts and sign == "+" else (f"-{body}" if not parts else f"{sign} {body}"))
    return " ".join(parts)


def _dump(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


# -- commands -----------------------------------------------------------------------


def cmd_qbinom(args):
    poly = gauss_polynomial(args.k, args.j)
    value = q_binomial(args.k, args.j, args.n)
    data = {
        "k": args.k,
        "j": args.j,
        "n": args.n,
        "polynomial": list(poly),
        "value_at_root": value.to_text("q"),
    }
    text = f"({args.k} choose {args.j})_q = {_poly_text(poly)}\nat a primitive {args.n}-th root: {value.to_text('q')}"
    return EXIT_OK, data, text


def cmd_green_tensor(args):
    try:
        L1 = parse_label(args.left, args.n)
        L2 = parse_label(args.right, args.n)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    res = tensor_labels(L1, L2, args.n)
    data = {
        "n": args.n,
        "left": str(L1),
        "right": str(L2),
        "rule": rule_case(L1, L2, args.n),
        "decomposition": res.to_json(),
    }
    return EXIT_OK, data, res.to_text()


def cmd_decompose(args):
    M = load_module(args.file, args.n)
    res = decompose(M)
    data = {"n": M.n, "dim": M.dim, "decomposition": res.to_json()}
    return EXIT_OK, data, res.to_text()


def cmd_build_q(args):
    """Module JSON goes to --out (with a summary on stdout) or to stdout."""
    Q = module_of_Q_direct(args.n)
    checks = {}
    if args.oracle:
        Qd = q_module(args.n, "double")
        checks["dual_construction"] = CheckResult(Qd == Q, "double-built Q equals formula-built Q")
    status = EXIT_OK if all(checks.values()) else EXIT_FAIL
    body = dump_module(Q)
    if not args.out:
        for line in summarize(checks):
            print(line, file=sys.stderr)
        return status, json.loads(body), body.rstrip("\n")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(body)
    data = {"n": args.n, "dim": Q.dim, "path": args.out, "checks": {k: v.to_json() for k, v in checks.items()}}
    text = "\n".join([*summarize(checks), f"wrote Q (dimension {Q.dim}) to {args.out}"])
    return status, data, text


def _depth_block(n):
    try:
        rep = depth_certificate(n)
    except TheoremViolation as exc:
        return None, {"depth_is_2": CheckResult(False, str(exc))}
    return rep, dict(rep.checks)


def cmd_verify(args):
    if args.oracle and args.n > EXPLICIT_QQ_LIMIT:
        raise UsageError(f"--oracle on builds Q x Q explicitly and is limited to n <= {EXPLICIT_QQ_LIMIT}")
    checks = run_suite(args.n, oracle=args.oracle)
    rep, dchecks = _depth_block(args.n)
    checks.update({f"depth.{k}": v for k, v in dchecks.items()})
    ok = all(checks.values())
    data = {
        "n": args.n,
        "oracle": args.oracle,
        "passed": ok,
        "depth_Q": rep.depth_Q if rep else None,
        "d_ev": rep.d_ev if rep else None,
        "checks": {k: checks[k].to_json() for k in sorted(checks)},
    }
    lines = list(summarize(checks))
    if rep:
        lines.append(f"depth_Q={rep.depth_Q} d_ev={rep.d_ev}")
    lines.append("ALL CHECKS PASSED" if ok else "SOME CHECKS FAILED")
    return (EXIT_OK if ok else EXIT_FAIL), data, "\n".join(lines)


def cmd_depth_report(args):
    try:
        rep = depth_certificate(args.n)
    except TheoremViolation as exc:
        msg = f"FAIL depth_is_2: {exc}"
        return EXIT_FAIL, {"n": args.n, "passed": False, "error": msg}, msg
    if args.oracle:
        other = depth_certificate(args.n, "double")
        rep.checks["dual_construction_report"] = CheckResult(
            other.to_json() == rep.to_json(), "report from the double-built Q is identical"
        )
    ok = rep.passed
    return (EXIT_OK if ok else EXIT_FAIL), rep.to_json(), rep.to_text()


# -- parsing ------------------------------------------------------------------------


def _order(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n expects an integer, got {text!r}") from None
    if n < 2:
        raise argparse.ArgumentTypeError(f"--n must be at least 2, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_order, required=True, help="order of the root of unity (n >= 2)")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument(
        "--oracle",
        choices=("on", "off"),
        default=None,
        help="explicit-matrix cross-checks (default: on for n <= 5)",
    )
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="taft-depth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qbinom", parents=[common], help="Gauss polynomial (k choose j)_q")
    p.add_argument("k", type=int)
    p.add_argument("j", type=int)
    p.set_defaults(func=cmd_qbinom)

    p = sub.add_parser("green-tensor", parents=[common], help="tensor two labels M(l,r)")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_green_tensor)

    p = sub.add_parser("decompose", parents=[common], help="decompose a module file")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("build-q", parents=[common], help="write the module Q as JSON")
    p.set_defaults(func=cmd_build_q)

    p = sub.add_parser("verify", parents=[common], help="run the full check suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("depth-report", parents=[common], help="depth certificate for Q")
    p.set_defaults(func=cmd_depth_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.oracle is None:
        args.oracle = args.n <= EXPLICIT_QQ_LIMIT
    else:
        args.oracle = args.oracle == "on"
    try:
        status, data, text = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except IngestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TaftDepthError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out = _dump(data) if args.format == "json" else text
    if args.out and args.command != "build-q":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
