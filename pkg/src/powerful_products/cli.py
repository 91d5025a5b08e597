"""Command-line entry point.

Exit codes: 0 not powerful / all checks pass, 2 powerful, 3 unknown,
64 usage error, 70 internal integrity failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import congruence, primes
from .errors import BudgetExceeded, IntegrityError, NotApplicable
from .oracle import DEFAULT_TERM_BITS, product_factorization
from .scan import ScanPlan, StateFileError, iter_scan
from .serialize import (
    CSV_HEADER,
    certificate_to_dict,
    factors_to_dict,
    format_factors,
    verdict_csv_row,
    verdict_to_dict,
    verdict_to_text,
)
from .valuation import Instance
from .witness import (
    DEFAULT_PRODUCT_BITS,
    NotPowerful,
    Powerful,
    check_instance,
    find_certificate,
    theorem1_witness,
    theorem2_witness,
)

EXIT_OK = 0
EXIT_POWERFUL = 2
EXIT_UNKNOWN = 3
EXIT_USAGE = 64
EXIT_INTEGRITY = 70

UNIQUE_ROOT_ELLS = (3, 5, 7, 9, 15, 25)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _int_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or non-positive range {text!r}")
    return lo, hi


def _budget(text: str) -> int:
    v = int(text)
    if v < 1 << 10:
        raise argparse.ArgumentTypeError("bit budget must be at least 1024")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="powerful-products",
        description="Decide whether (1^l + q^l)(2^l + q^l)...(n^l + q^l) is powerful.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_args(p):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)
        p.add_argument("--n", type=int, required=True)

    check = sub.add_parser("check", help="decide one instance")
    instance_args(check)
    check.add_argument("--format", choices=("json", "csv", "text"), default="text")
    check.add_argument("--bit-budget", type=_budget, default=DEFAULT_PRODUCT_BITS)

    wit = sub.add_parser("witness", help="emit a certificate from one strategy")
    instance_args(wit)
    wit.add_argument("--strategy", choices=("theorem1", "theorem2", "any"), default="any")
    wit.add_argument("--format", choices=("json", "text"), default="json")

    scan = sub.add_parser("scan", help="sweep q, ell, n and emit one CSV row per instance")
    scan.add_argument("--q-range", type=_int_range, required=True)
    scan.add_argument("--ell", type=_int_list, required=True, help="comma-separated odd exponents")
    scan.add_argument("--n-max", type=int, required=True)
    scan.add_argument("--format", choices=("csv", "json"), default="csv")
    scan.add_argument("--bit-budget", type=_budget, default=DEFAULT_PRODUCT_BITS)
    scan.add_argument("--jobs", type=int, default=1)
    scan.add_argument("--state", metavar="PATH")

    lem = sub.add_parser("verify-lemmas", help="sweep the prime-window and congruence lemmas")
    lem.add_argument("--m-max", type=int, required=True)
    lem.add_argument("--k", type=_int_list, default=[5, 7, 11, 13])
    lem.add_argument("--p-max", type=int, default=2000, help="prime bound for the congruence sweep")
    lem.add_argument("--q-max", type=int, default=20)
    lem.add_argument("--format", choices=("json", "text"), default="text")

    fac = sub.add_parser("factor-product", help="fully factor the product term by term")
    instance_args(fac)
    fac.add_argument("--format", choices=("json", "text"), default="text")
    fac.add_argument("--bit-budget", type=_budget, default=DEFAULT_TERM_BITS,
                     help="per-piece bit limit")
    return parser


def _instance(args) -> Instance:
    try:
        return Instance(args.q, args.ell, args.n)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))


def _verdict_exit(v) -> int:
    if isinstance(v, NotPowerful):
        return EXIT_OK
    if isinstance(v, Powerful):
        return EXIT_POWERFUL
    return EXIT_UNKNOWN


def cmd_check(args, out) -> int:
    inst = _instance(args)
    v = check_instance(inst, bit_budget=args.bit_budget)
    if args.format == "json":
        print(json.dumps(verdict_to_dict(inst, v)), file=out)
    elif args.format == "csv":
        print(CSV_HEADER, file=out)
        print(verdict_csv_row(inst, v), file=out)
    else:
        print(verdict_to_text(inst, v), file=out)
    return _verdict_exit(v)


def cmd_witness(args, out) -> int:
    inst = _instance(args)
    if args.strategy == "theorem1":
        try:
            cert = theorem1_witness(inst.q, inst.ell, inst.n)
        except NotApplicable as exc:
            raise UsageError(str(exc))
    elif args.strategy == "theorem2":
        cert = theorem2_witness(inst.q, inst.ell, inst.n)
    else:
        cert = find_certificate(inst)
    if cert is None:
        print(f"no {args.strategy} certificate for q={inst.q} ell={inst.ell} n={inst.n}",
              file=sys.stderr)
        return EXIT_UNKNOWN
    if args.format == "json":
        print(json.dumps(certificate_to_dict(cert)), file=out)
    else:
        print(verdict_to_text(inst, NotPowerful(cert)), file=out)
    return EXIT_OK


def cmd_scan(args, out) -> int:
    if any(e < 1 or e % 2 == 0 for e in args.ell) or not args.ell:
        raise UsageError("--ell must list positive odd integers")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    plan = ScanPlan(args.q_range[0], args.q_range[1], tuple(args.ell), max(args.n_max, 0),
                    args.bit_budget)
    verdicts = set()
    if args.format == "csv":
        print(CSV_HEADER, file=out)
    records = []
    for row in iter_scan(plan, jobs=args.jobs, state_path=args.state):
        verdicts.add(row.split(",")[3])
        if args.format == "csv":
            print(row, file=out)
        else:
            records.append(dict(zip(CSV_HEADER.split(","), row.split(","))))
    if args.format == "json":
        print(json.dumps(records), file=out)
    if "unknown" in verdicts:
        return EXIT_UNKNOWN
    if "powerful" in verdicts:
        return EXIT_POWERFUL
    return EXIT_OK


def lemma_report(m_max: int, ks, p_max: int = 2000, q_max: int = 20) -> list[dict]:
    report = []
    bad = primes.sparse_window_counterexamples(m_max)
    report.append({
        "check": "window has >= 2 primes",
        "checked": m_max - len([m for m in primes.SPARSE_WINDOWS if m <= m_max]),
        "failures": len(bad),
        "first_counterexample": bad[0] if bad else None,
        "known_exceptions": sorted(m for m in primes.SPARSE_WINDOWS if m <= m_max),
    })
    bad = primes.two_mod_three_counterexamples(m_max)
    report.append({
        "check": "window has a prime = 2 mod 3",
        "checked": max(m_max - 3, 0) - (1 if m_max >= 9 else 0),
        "failures": len(bad),
        "first_counterexample": bad[0] if bad else None,
        "known_exceptions": [9] if m_max >= 9 else [],
    })
    for k in ks:
        bad = primes.residue_one_counterexamples(k, m_max)
        report.append({
            "check": f"window not all = 1 mod {k}",
            "checked": max(m_max - 4 * k + 1, 0),
            "failures": len(bad),
            "first_counterexample": bad[0] if bad else None,
            "known_exceptions": [],
        })
    checked, bad = congruence.unique_root_sweep(p_max, q_max, UNIQUE_ROOT_ELLS)
    report.append({
        "check": "x^l + q^l = 0 mod p has the single root -q",
        "checked": checked,
        "failures": len(bad),
        "first_counterexample": list(bad[0]) if bad else None,
        "known_exceptions": [],
    })
    return report


def cmd_verify_lemmas(args, out) -> int:
    if args.m_max < 10:
        raise UsageError("--m-max must be at least 10")
    if any(k < 5 or not primes.is_prime(k) for k in args.k):
        raise UsageError("--k values must be primes >= 5")
    report = lemma_report(args.m_max, args.k, args.p_max, args.q_max)
    if args.format == "json":
        print(json.dumps(report), file=out)
    else:
        for r in report:
            status = "PASS" if r["failures"] == 0 else "FAIL"
            line = f"{status} {r['check']}: {r['checked']} checked, {r['failures']} failed"
            if r["known_exceptions"]:
                line += f" (known exceptions: {r['known_exceptions']})"
            if r["first_counterexample"] is not None:
                line += f"; first counterexample {r['first_counterexample']}"
            print(line, file=out)
    return EXIT_OK if all(r["failures"] == 0 for r in report) else EXIT_INTEGRITY


def cmd_factor_product(args, out) -> int:
    inst = _instance(args)
    try:
        f = product_factorization(inst, bit_budget=args.bit_budget)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    if args.format == "json":
        print(json.dumps({"q": inst.q, "ell": inst.ell, "n": inst.n,
                          "factors": factors_to_dict(f)}), file=out)
    else:
        print(format_factors(f), file=out)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "witness": cmd_witness,
    "scan": cmd_scan,
    "verify-lemmas": cmd_verify_lemmas,
    "factor-product": cmd_factor_product,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StateFileError as exc:
        print(f"{parser.prog}: refusing to continue: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrityError as exc:
        print(f"{parser.prog}: integrity failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY


if __name__ == "__main__":
    sys.exit(main())
