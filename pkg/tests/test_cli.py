import argparse
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from powerful_products.cli import cmd_check, main
from powerful_products.scan import ScanPlan, iter_scan
from powerful_products.serialize import (
    certificate_to_dict,
    dumps_certificate,
    loads_certificate,
)
from powerful_products.valuation import Instance
from powerful_products.witness import check_instance, theorem1_witness


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_check_powerful_exit_2():
    code, text = run("check", "--q", "2", "--ell", "3", "--n", "2", "--format", "json")
    assert code == 2
    assert json.loads(text) == {
        "verdict": "powerful", "q": 2, "ell": 3, "n": 2, "factors": {"2": 4, "3": 2}
    }


def test_check_not_powerful_exit_0():
    code, text = run("check", "--q", "1", "--ell", "3", "--n", "10", "--format", "json")
    assert code == 0
    cert = json.loads(text)["certificate"]
    assert cert == {
        "q": 1, "ell": 3, "n": 10, "strategy": "theorem1", "witness_prime": 11,
        "hits": [{"a": 10, "nu": 1, "via": "lte"}], "total_valuation": 1,
    }


def test_check_csv():
    code, text = run("check", "--q", "1", "--ell", "3", "--n", "3", "--format", "csv")
    assert code == 0
    assert text.splitlines() == ["q,ell,n,verdict,witness_p,strategy", "1,3,3,not_powerful,7,oracle"]


def test_check_unknown_exit_3():
    # the CLI floor of 1024 bits is ample here, so go below it directly
    args = argparse.Namespace(q=1, ell=3, n=3, bit_budget=4, format="text")
    out = io.StringIO()
    assert cmd_check(args, out) == 3
    assert "unknown" in out.getvalue()


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--q", "1", "--ell", "4", "--n", "5"],
        ["check", "--q", "0", "--ell", "3", "--n", "5"],
        ["check", "--q", "1", "--ell", "3"],
        ["check", "--q", "1", "--ell", "3", "--n", "2", "--bit-budget", "100"],
        ["scan", "--q-range", "3:1", "--ell", "3", "--n-max", "4"],
        ["scan", "--q-range", "1:2", "--ell", "3,4", "--n-max", "4"],
        ["witness", "--q", "1", "--ell", "15", "--n", "20", "--strategy", "theorem1"],
        ["verify-lemmas", "--m-max", "9"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_64(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = main(argv, out=io.StringIO())
        raise SystemExit(code)
    assert exc.value.code == 64


def test_module_entry_point_exit_codes():
    base = [sys.executable, "-m", "powerful_products", "check"]
    assert subprocess.run(base + ["--q", "2", "--ell", "3", "--n", "2"],
                          capture_output=True).returncode == 2
    assert subprocess.run(base + ["--q", "1", "--ell", "4", "--n", "5"],
                          capture_output=True).returncode == 64


def test_witness_command():
    code, text = run("witness", "--q", "1", "--ell", "15", "--n", "16", "--strategy", "theorem2")
    assert code == 0
    assert json.loads(text)["witness_prime"] == 17
    code, _ = run("witness", "--q", "1", "--ell", "7", "--n", "3", "--strategy", "theorem2")
    assert code == 3


def test_factor_product_command():
    code, text = run("factor-product", "--q", "1", "--ell", "3", "--n", "3")
    assert (code, text.strip()) == (0, "2^3 * 3^2 * 7")
    code, text = run("factor-product", "--q", "2", "--ell", "3", "--n", "2", "--format", "json")
    assert json.loads(text)["factors"] == {"2": 4, "3": 2}


def test_certificate_json_round_trip_examples():
    for args in [(1, 3, 10), (3, 25, 8), (6, 27, 1999)]:
        c = theorem1_witness(*args)
        assert loads_certificate(dumps_certificate(c)) == c
    v = check_instance(Instance(1, 3, 3))
    assert loads_certificate(dumps_certificate(v.certificate)) == v.certificate


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.sampled_from([1, 3, 5, 9, 15]), st.integers(1, 60))
def test_certificate_json_round_trip(q, ell, n):
    v = check_instance(Instance(q, ell, n))
    if hasattr(v, "certificate"):
        d = certificate_to_dict(v.certificate)
        assert set(d) == {"q", "ell", "n", "strategy", "witness_prime", "hits", "total_valuation"}
        assert loads_certificate(json.dumps(d)) == v.certificate


def test_verify_lemmas_reports_known_exception():
    code, text = run("verify-lemmas", "--m-max", "10")
    assert code == 0
    assert "known exceptions: [1, 3, 5, 9]" in text
    assert "FAIL" not in text
    code, text = run("verify-lemmas", "--m-max", "10000", "--k", "5,7", "--format", "json")
    report = json.loads(text)
    assert code == 0 and all(r["failures"] == 0 for r in report)
    assert len(report) == 5


SCAN = ["scan", "--q-range", "1:3", "--ell", "3", "--n-max", "15"]


def test_scan_rows_and_exit_code():
    code, text = run(*SCAN)
    lines = text.splitlines()
    assert lines[0] == "q,ell,n,verdict,witness_p,strategy"
    rows = lines[1:]
    assert len(rows) == 45
    powerful = [r for r in rows if r.split(",")[3] == "powerful"]
    assert powerful == ["2,3,1,powerful,,", "2,3,2,powerful,,"]
    assert all(r.split(",")[3] == "not_powerful" for r in rows if r not in powerful)
    assert code == 2


def test_scan_empty_range():
    code, text = run("scan", "--q-range", "1:3", "--ell", "3", "--n-max", "0")
    assert code == 0 and text.splitlines() == ["q,ell,n,verdict,witness_p,strategy"]


def test_scan_json_format():
    code, text = run("scan", "--q-range", "1:1", "--ell", "3", "--n-max", "3", "--format", "json")
    rows = json.loads(text)
    assert [r["witness_p"] for r in rows] == ["2", "2", "7"]


def test_scan_resume_after_break(tmp_path):
    plan = ScanPlan(1, 3, (3,), 15)
    full = list(iter_scan(plan))
    state = tmp_path / "state"
    it = iter_scan(plan, state_path=str(state))
    first = [next(it) for _ in range(20)]
    it.close()
    assert state.read_text().count("\n") == 21
    assert first == full[:20]
    assert list(iter_scan(plan, state_path=str(state))) == full


def test_scan_resume_drops_partial_line(tmp_path):
    state = tmp_path / "state"
    _, reference = run(*SCAN, "--state", str(state))
    text = state.read_text()
    lines = text.splitlines(keepends=True)
    state.write_text("".join(lines[:11]) + lines[11][:5])
    _, resumed = run(*SCAN, "--state", str(state))
    assert resumed == reference
    assert state.read_text() == text


@pytest.mark.parametrize(
    "content",
    [
        "not a header\n",
        "# scan q=1:3 ell=3 n_max=15 bit_budget=200000\n1,3,2,not_powerful,2,theorem2\n",
        "# scan q=1:3 ell=3 n_max=15 bit_budget=200000\ngarbage\n",
        "# scan q=1:9 ell=3 n_max=15 bit_budget=200000\n",
    ],
)
def test_scan_refuses_corrupt_state(tmp_path, content):
    state = tmp_path / "state"
    state.write_text(content)
    code, _ = run(*SCAN, "--state", str(state))
    assert code == 64
    assert state.read_text() == content
