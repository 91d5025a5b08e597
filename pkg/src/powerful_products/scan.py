"""Resumable sweeps over many instances.

Completed rows are appended to a state file one line at a time, so a killed
run loses at most the line being written. The state file starts with a
header naming the sweep, and its rows must be a prefix of the sweep's rows in
order; anything else is treated as corruption.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .serialize import verdict_csv_row
from .valuation import Instance
from .witness import DEFAULT_PRODUCT_BITS, check_instance


class StateFileError(RuntimeError):
    pass


@dataclass(frozen=True)
class ScanPlan:
    q_lo: int
    q_hi: int
    ells: tuple[int, ...]
    n_max: int
    bit_budget: int = DEFAULT_PRODUCT_BITS

    def instances(self) -> list[Instance]:
        return [
            Instance(q, ell, n)
            for q in range(self.q_lo, self.q_hi + 1)
            for ell in sorted(self.ells)
            for n in range(1, self.n_max + 1)
        ]

    def header(self) -> str:
        ells = ",".join(map(str, sorted(self.ells)))
        return (
            f"# scan q={self.q_lo}:{self.q_hi} ell={ells} "
            f"n_max={self.n_max} bit_budget={self.bit_budget}"
        )


def scan_row(inst: Instance, bit_budget: int = DEFAULT_PRODUCT_BITS) -> str:
    return verdict_csv_row(inst, check_instance(inst, bit_budget=bit_budget))


def _scan_row_args(args: tuple[Instance, int]) -> str:
    return scan_row(*args)


def _row_key(row: str) -> tuple[int, int, int]:
    fields = row.split(",")
    if len(fields) != 6:
        raise ValueError(row)
    return int(fields[0]), int(fields[1]), int(fields[2])


def load_state(path: str, plan: ScanPlan) -> list[str]:
    """Rows already completed; creates the file with its header if absent."""
    if not os.path.exists(path) or os.path.getsize(path) == 0:
        with open(path, "w") as fh:
            fh.write(plan.header() + "\n")
        return []
    with open(path) as fh:
        text = fh.read()
    complete, _, partial = text.rpartition("\n")
    lines = complete.split("\n") if complete else []
    if not lines or lines[0] != plan.header():
        raise StateFileError(f"{path}: header does not match this scan")
    expected = plan.instances()
    rows = lines[1:]
    if len(rows) > len(expected):
        raise StateFileError(f"{path}: more rows than the scan has instances")
    for i, row in enumerate(rows):
        inst = expected[i]
        try:
            key = _row_key(row)
        except ValueError:
            raise StateFileError(f"{path}: malformed row {i + 1}: {row!r}") from None
        if key != (inst.q, inst.ell, inst.n):
            raise StateFileError(f"{path}: row {i + 1} is out of order: {row!r}")
    if partial:
        # interrupted mid-write: drop the fragment
        with open(path, "r+") as fh:
            fh.truncate(len(complete) + 1)
    return rows


def iter_scan(
    plan: ScanPlan, *, jobs: int = 1, state_path: Optional[str] = None
) -> Iterator[str]:
    """Yield CSV rows in ascending (q, ell, n), resuming from ``state_path``."""
    done: Sequence[str] = load_state(state_path, plan) if state_path else []
    yield from done
    todo = [(inst, plan.bit_budget) for inst in plan.instances()[len(done) :]]
    state = open(state_path, "a") if state_path else None
    try:
        if jobs <= 1 or len(todo) < 2:
            results = map(_scan_row_args, todo)
            for row in results:
                _record(state, row)
                yield row
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                # map preserves submission order
                for row in pool.map(_scan_row_args, todo, chunksize=8):
                    _record(state, row)
                    yield row
    finally:
        if state is not None:
            state.close()


def _record(state, row: str) -> None:
    if state is not None:
        state.write(row + "\n")
        state.flush()
