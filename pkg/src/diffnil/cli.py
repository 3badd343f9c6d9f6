"""Command line front end.

Exit codes: 0 verified / true, 1 falsified / exhausted, 2 usage or internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import diffop, embedding, grassmann, ideal, verify
from .diffpoly import format_poly, parse, to_records
from .errors import DiffNilError, ParseError, term_limit

SUITE_NAMES = tuple(verify.SUITES)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


DEFAULT_MAX_TERMS = 5_000_000


def _add_global(p: argparse.ArgumentParser, suppress: bool) -> None:
    # global flags are accepted before or after the subcommand; the copy on
    # each subparser leaves values alone unless the flag is actually given
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--m", type=int, default=d(2), help="nilpotency exponent of the generator x^m")
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--max-terms", type=int, default=d(DEFAULT_MAX_TERMS),
                   help="abort with exit 2 if an intermediate support grows past this size")
    p.add_argument("--out", default=d(None), help="also write the report to this path")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_global(common, suppress=True)
    parser = _Parser(prog="diffnil", description="Exact computations in k_+{x}/[x^m].")
    _add_global(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", parents=[common], help="normal form onto the alpha_m basis")
    p.add_argument("poly")
    p = sub.add_parser("member", parents=[common], help="ideal membership with certificate")
    p.add_argument("poly")
    p = sub.add_parser("embed", parents=[common], help="image in the Grassmann algebra")
    p.add_argument("poly")
    p = sub.add_parser("nilindex", parents=[common], help="least N with f^N in [x^m]")
    p.add_argument("poly")
    p.add_argument("--cap", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="run a bounded verification suite")
    p.add_argument("suite", choices=SUITE_NAMES)
    p.add_argument("--max-i", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--max-weight", type=int, default=8)
    p.add_argument("--samples", type=int, default=25)

    p = sub.add_parser("witness", parents=[common], help="primality witness search (m = 2)")
    p.add_argument("--kind", choices=("element", "operator"), default="element")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--cap", type=int, default=10, help="largest k to try")
    p.add_argument("--c-cap", type=int, default=12, help="largest j in the candidates c = x_j")
    return parser


def _run(args) -> tuple[dict, dict | list | None, int]:
    """Returns (result, certificate, exit code)."""
    cmd = args.command
    if cmd in ("reduce", "member", "embed", "nilindex"):
        f = parse(args.poly)
    if cmd == "reduce":
        nf = ideal.normal_form(f, args.m)
        member = nf.is_zero()
        return {"normal_form": str(nf), "terms": to_records(nf.poly), "member": member}, None, 0
    if cmd == "member":
        ok, cert = ideal.membership(f, args.m)
        result = {"member": ok}
        if not ok:
            result["normal_form"] = str(ideal.normal_form(f, args.m))
        return result, cert.to_records() if cert else None, 0 if ok else 1
    if cmd == "embed":
        image = embedding.phi(args.m, f)
        return {"image": grassmann.format_element(image), "terms": grassmann.to_records(image),
                "even": grassmann.is_even(image)}, None, 0
    if cmd == "nilindex":
        n = ideal.nil_index_element(f, args.m, args.cap)
        return {"nil_index": n, "exhausted": n is None}, None, 0 if n is not None else 1
    if cmd == "verify":
        res = verify.run_suite(args.suite, m=args.m, max_degree=args.max_degree,
                               max_weight=args.max_weight, samples=args.samples,
                               seed=args.seed, max_i=args.max_i)
        payload = res.as_dict()
        if args.suite == "ritt":
            payload["indices"] = [c.detail["ideal"] for c in res.checks]
        return payload, None, 0 if res.passed else 1
    if cmd == "witness":
        return _witness(args)
    raise _UsageError(f"unknown command {cmd}")


def _witness(args):
    if args.m != 2:
        raise _UsageError("witness searches are defined for m = 2 only")
    if args.kind == "element":
        a, b = parse(args.a), parse(args.b)
        w = diffop.witness_corollary(a, b, args.cap)
    else:
        a, b = diffop.parse_operator(args.a), diffop.parse_operator(args.b)
        w = diffop.witness_theorem2(a, b, args.cap, args.c_cap)
    if isinstance(w, diffop.SearchExhausted):
        return {"found": False, "k_range": list(w.k_range),
                "c_range": list(w.c_range) if w.c_range else None, "reason": w.reason}, None, 1
    verified = diffop.verify_witness(w, a, b)
    result = {"found": True, "kind": w.kind, "k": w.k,
              "c": format_poly(w.c) if w.c is not None else None,
              "product": str(w.product), "verified": verified}
    return result, None, 0 if verified else 1


def _text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    result = report["result"]
    if report["command"] == "verify":
        lines.append(f"suite: {result['suite']}  passed: {result['passed']}  "
                     f"({result['total'] - result['failed']}/{result['total']})")
        if "indices" in result:
            lines.append(f"indices: {result['indices']}")
        for c in result["checks"]:
            mark = "ok  " if c["passed"] else "FAIL"
            lines.append(f"  {mark} {json.dumps(c['key'])} {json.dumps(c['detail'])}")
    else:
        for key, value in result.items():
            if key == "terms":
                continue
            lines.append(f"{key}: {value}")
    if report.get("certificate"):
        lines.append("certificate:")
        for rec in report["certificate"]:
            lines.append(f"  {rec['coefficient']} * {rec['cofactor']} * (x^m)^({rec['k']})")
    lines.append(f"elapsed_ms: {report['elapsed_ms']}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"diffnil: {exc}", file=sys.stderr)
        return 2
    params = {k: v for k, v in vars(args).items() if k not in ("command", "format", "out")}
    start = time.perf_counter()
    try:
        with term_limit(args.max_terms):
            result, certificate, code = _run(args)
    except ParseError as exc:
        print(f"diffnil: parse error: {exc}", file=sys.stderr)
        return 2
    except (DiffNilError, _UsageError) as exc:
        print(f"diffnil: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "params": params,
        "result": result,
        "certificate": certificate,
        "elapsed_ms": int((time.perf_counter() - start) * 1000),
    }
    text = json.dumps(report, indent=2) if args.format == "json" else _text(report)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
