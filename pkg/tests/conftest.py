"""Independent brute-force helpers shared by the tests.

These deliberately avoid the package's own code paths so that they can serve
as oracles for it.
"""

import pytest

_ACCEPTANCE = []


def trial_factor(m):
    out = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def naive_is_prime(m):
    return m >= 2 and all(m % d for d in range(2, int(m**0.5) + 1))


def naive_nu(p, m):
    k = 0
    while m % p**(k + 1) == 0:
        k += 1
    return k


@pytest.fixture
def acceptance_record():
    def record(number, title, passed, detail=""):
        _ACCEPTANCE.append((number, title, passed, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title} {detail}".rstrip())
