"""JSON and CSV encodings of certificates and verdicts.

Certificate JSON field names are a stable contract for third-party checkers:

    {"q", "ell", "n", "strategy", "witness_prime",
     "hits": [{"a", "nu", "via"}], "total_valuation"}
"""

from __future__ import annotations

import json

from .oracle import FactorMap
from .valuation import Instance, TermValuation, Via
from .witness import Certificate, NotPowerful, Powerful, Strategy, Verdict

CSV_HEADER = "q,ell,n,verdict,witness_p,strategy"


def certificate_to_dict(cert: Certificate) -> dict:
    inst = cert.instance
    return {
        "q": inst.q,
        "ell": inst.ell,
        "n": inst.n,
        "strategy": cert.strategy.value,
        "witness_prime": cert.p,
        "hits": [{"a": h.a, "nu": h.nu, "via": h.via.value} for h in cert.hits],
        "total_valuation": cert.total_valuation,
    }


def certificate_from_dict(d: dict) -> Certificate:
    p = int(d["witness_prime"])
    return Certificate(
        instance=Instance(int(d["q"]), int(d["ell"]), int(d["n"])),
        p=p,
        strategy=Strategy(d["strategy"]),
        hits=tuple(TermValuation(int(h["a"]), p, int(h["nu"]), Via(h["via"])) for h in d["hits"]),
        total_valuation=int(d["total_valuation"]),
    )


def dumps_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), sort_keys=False)


def loads_certificate(s: str) -> Certificate:
    return certificate_from_dict(json.loads(s))


def verdict_name(v: Verdict) -> str:
    if isinstance(v, NotPowerful):
        return "not_powerful"
    if isinstance(v, Powerful):
        return "powerful"
    return "unknown"


def verdict_to_dict(inst: Instance, v: Verdict) -> dict:
    out = {"verdict": verdict_name(v), "q": inst.q, "ell": inst.ell, "n": inst.n}
    if isinstance(v, NotPowerful):
        out["certificate"] = certificate_to_dict(v.certificate)
    elif isinstance(v, Powerful):
        out["factors"] = factors_to_dict(v.factors)
    else:
        out["reason"] = v.reason
    return out


def factors_to_dict(f: FactorMap) -> dict:
    # JSON keys are strings; keep primes ascending
    return {str(p): e for p, e in sorted(f.items())}


def format_factors(f: FactorMap) -> str:
    if not f:
        return "1"
    return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(f.items()))


def verdict_to_text(inst: Instance, v: Verdict) -> str:
    head = f"q={inst.q} ell={inst.ell} n={inst.n}: "
    if isinstance(v, NotPowerful):
        c = v.certificate
        hits = ", ".join(f"a={h.a} nu={h.nu} ({h.via.value})" for h in c.hits)
        return (
            head + f"not powerful; prime {c.p} has exponent {c.total_valuation} "
            f"[{c.strategy.value}] hits: {hits}"
        )
    if isinstance(v, Powerful):
        return head + "powerful = " + format_factors(v.factors)
    return head + f"unknown ({v.reason})"


def verdict_csv_row(inst: Instance, v: Verdict) -> str:
    p = strategy = ""
    if isinstance(v, NotPowerful):
        p, strategy = str(v.certificate.p), v.certificate.strategy.value
    return f"{inst.q},{inst.ell},{inst.n},{verdict_name(v)},{p},{strategy}"
