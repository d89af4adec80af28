"""Acceptance gate: the eleven property batteries at their stated sizes and time limits.

Each criterion prints one PASS/FAIL line.  Run directly with
``python tests/test_acceptance.py [seed]`` for the lines alone.
"""

import os
import sys

import pytest

from pseudoval.suite import BATTERIES, run_battery

SEED = int(os.environ.get("PSEUDOVAL_SEED", "7"))
TOTAL_LIMIT = 90.0

# smallest number of individual checks each criterion implies
MIN_CHECKS = {
    1: 7 * 200,   # (field, breadth) combinations realizable x 200 triples
    2: 300,
    3: 100,
    4: 100,
    5: 50 * 5,
    6: 300,
    7: 100,
    8: 20,
    9: 1 + 10 + 45,  # at least every subset of the first few indices
    10: 56 + 10 + 20,
    11: 50 + 50 + 100 + 50,
}

_elapsed = {}


@pytest.mark.parametrize("number", sorted(BATTERIES))
def test_criterion(number, capsys):
    res = run_battery(number, SEED)
    _elapsed[number] = res.elapsed
    with capsys.disabled():
        print(f"\n{res.line()}")
        for note in res.notes:
            print(f"    note: {note}")
        for failure in res.failures[:5]:
            print(f"    failure: {failure}")
    assert res.passed, res.failures[:5]
    assert res.count >= MIN_CHECKS[number]
    assert res.within_time, f"{res.elapsed:.2f}s exceeds {res.limit}s"


def test_total_runtime(capsys):
    missing = [n for n in BATTERIES if n not in _elapsed]
    for n in missing:
        _elapsed[n] = run_battery(n, SEED).elapsed
    total = sum(_elapsed.values())
    status = "PASS" if total < TOTAL_LIMIT else "FAIL"
    with capsys.disabled():
        print(f"\n{status} total acceptance runtime {total:.2f}s (limit {TOTAL_LIMIT:g}s)")
    assert total < TOTAL_LIMIT


if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else SEED
    results = [run_battery(n, seed) for n in sorted(BATTERIES)]
    for r in results:
        print(r.line())
    total = sum(r.elapsed for r in results)
    print(f"{'PASS' if total < TOTAL_LIMIT else 'FAIL'} total {total:.2f}s (limit {TOTAL_LIMIT:g}s)")
    sys.exit(0 if all(r.ok for r in results) and total < TOTAL_LIMIT else 1)
