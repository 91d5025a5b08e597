"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""

import io
import time
from math import gcd

from conftest import naive_nu
from powerful_products.cli import main
from powerful_products.congruence import uniqueness_check
from powerful_products.oracle import product_factorization
from powerful_products.primes import (
    sparse_window_counterexamples,
    residue_one_counterexamples,
    two_mod_three_counterexamples,
    primes_up_to,
)
from powerful_products.scan import ScanPlan, iter_scan
from powerful_products.valuation import Instance, lte_valuation, product_valuation
from powerful_products.witness import (
    NotPowerful,
    Powerful,
    check_instance,
    min_threshold,
    theorem1_witness,
)


def _run_cli(*argv):
    out = io.StringIO()
    return main(list(argv), out=out), out.getvalue()


def test_1_oracle_ground_truth(acceptance_record):
    t0 = time.perf_counter()
    v1 = check_instance(Instance(2, 3, 2))
    v2 = check_instance(Instance(2, 3, 1))
    v3 = check_instance(Instance(1, 3, 3))
    code1, _ = _run_cli("check", "--q", "2", "--ell", "3", "--n", "2")
    code3, _ = _run_cli("check", "--q", "1", "--ell", "3", "--n", "3")
    elapsed = time.perf_counter() - t0
    ok = (
        isinstance(v1, Powerful) and v1.factors == {2: 4, 3: 2}
        and isinstance(v2, Powerful) and v2.factors == {3: 2}
        and isinstance(v3, NotPowerful) and v3.certificate.p == 7
        and (code1, code3) == (2, 0)
        and elapsed < 1.0
    )
    acceptance_record(1, "oracle ground truth", ok, f"({elapsed:.3f}s)")
    assert ok


def test_2_prime_power_witness_totality(acceptance_record):
    t0 = time.perf_counter()
    failures = []
    count = 0
    for ell in (3, 5, 7, 9, 11, 13, 25, 27):
        for q in range(1, 11):
            for n in range(max(q, 11 - q), 2001):
                cert = theorem1_witness(q, ell, n)
                count += 1
                if cert.total_valuation != 1:
                    failures.append((q, ell, n))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300
    acceptance_record(2, "prime-power witness totality sweep", ok,
                      f"({count} certificates, {len(failures)} failures, {elapsed:.1f}s)")
    assert ok, failures[:5]


def test_3_certificate_oracle_cross_validation(acceptance_record):
    t0 = time.perf_counter()
    bad = []
    for q in range(1, 7):
        for ell in (3, 5, 9):
            for n in range(1, 41):
                inst = Instance(q, ell, n)
                truth = product_factorization(inst)
                v = check_instance(inst)
                if isinstance(v, NotPowerful):
                    if truth.get(v.certificate.p) != 1:
                        bad.append(("witness", inst))
                elif not isinstance(v, Powerful) or v.factors != truth:
                    bad.append(("verdict", inst))
                for p in primes_up_to(n + q):
                    if product_valuation(inst, p) != truth.get(p, 0):
                        bad.append(("valuation", inst, p))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 120
    acceptance_record(3, "certificate-oracle cross-validation", ok,
                      f"({len(bad)} mismatches, {elapsed:.1f}s)")
    assert ok, bad[:5]


def test_4_unique_root_exhaustive(acceptance_record):
    t0 = time.perf_counter()
    checked = 0
    exceptions = []
    for p in primes_up_to(2000):
        for ell in (3, 5, 7, 9, 15, 25):
            if gcd(ell, p - 1) != 1:
                continue
            for q in range(1, 21):
                checked += 1
                if not uniqueness_check(ell, q, p):
                    exceptions.append((ell, q, p))
    elapsed = time.perf_counter() - t0
    ok = not exceptions and checked > 0 and elapsed < 60
    acceptance_record(4, "unique-root congruence exhaustive check", ok,
                      f"({checked} cases, {len(exceptions)} exceptions, {elapsed:.1f}s)")
    assert ok, exceptions[:5]


def test_5_lte_property_suite(acceptance_record):
    t0 = time.perf_counter()
    cases = 0
    mismatches = []
    for p in primes_up_to(100):
        if p == 2:
            continue
        for ell in range(1, 16, 2):
            for x in range(1, 201):
                if x % p == 0:
                    continue
                for y in range(p - x % p, 201, p):
                    if y % p == 0:
                        continue
                    cases += 1
                    if lte_valuation(x, y, ell, p) != naive_nu(p, x**ell + y**ell):
                        mismatches.append((x, y, ell, p))
    elapsed = time.perf_counter() - t0
    ok = cases >= 10_000 and not mismatches and elapsed < 30
    acceptance_record(5, "LTE property suite", ok,
                      f"({cases} cases, {len(mismatches)} mismatches, {elapsed:.1f}s)")
    assert ok, mismatches[:5]


def test_6_window_sweeps(acceptance_record):
    t0 = time.perf_counter()
    bad3 = sparse_window_counterexamples(10**6)
    bad5 = two_mod_three_counterexamples(10**6)
    bad4 = {k: residue_one_counterexamples(k, 10**5) for k in (5, 7, 11, 13)}
    elapsed = time.perf_counter() - t0
    ok = not bad3 and not bad5 and not any(bad4.values()) and elapsed < 120
    acceptance_record(6, "prime window sweeps", ok,
                      f"(P(m)>=2: {len(bad3)}, 2 mod 3: {len(bad5)}, "
                      f"k-split: {sum(map(len, bad4.values()))} counterexamples, {elapsed:.1f}s)")
    assert ok


def test_7_cube_threshold_comparison(acceptance_record):
    t0 = time.perf_counter()
    details = []
    ok = True
    for q in (1, 2, 5):
        scan = min_threshold(q, 3, 1300)
        new_bound, old_bound = max(q, 11 - q), max(q, 1198 - q)
        missing = [n for n, found in scan.rows if n >= new_bound and not found]
        ok = ok and not missing and new_bound < old_bound
        details.append(f"q={q}: certified for all n>={new_bound} (prior bound {old_bound}), "
                       f"last failure {scan.last_failure}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 180
    acceptance_record(7, "ell = 3 threshold vs prior 1198 - q bound", ok,
                      f"({'; '.join(details)}; {elapsed:.1f}s)")
    assert ok


def test_8_determinism_and_resume(acceptance_record, tmp_path):
    argv = ["scan", "--q-range", "1:3", "--ell", "3", "--n-max", "15"]
    _, serial = _run_cli(*argv, "--jobs", "1")
    _, parallel = _run_cli(*argv, "--jobs", "8")

    state = tmp_path / "scan.state"
    plan = ScanPlan(1, 3, (3,), 15)
    rows = iter_scan(plan, state_path=str(state))
    for _ in range(20):
        next(rows)
    rows.close()  # interrupted after 20 completed rows
    _, resumed = _run_cli(*argv, "--state", str(state))

    ok = serial == parallel == resumed and len(serial.splitlines()) == 46
    acceptance_record(8, "determinism and resume", ok, "(jobs 1 vs 8 vs resumed-at-20)")
    assert ok
