"""The ten acceptance criteria at full size, one line per criterion.

The pass/fail lines are printed in the terminal summary.
"""

import pytest

from creature_lab import faults
from creature_lab.acceptance import CRITERIA, QUICK, run_all
from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("crit", CRITERIA, ids=lambda c: f"criterion_{c.number:02d}")
def test_criterion(crit):
    r = crit()
    ACCEPTANCE_LINES.append(r.line())
    assert r.ok, r.details.get("failure")
    if r.limit is not None:
        assert r.seconds <= r.limit, f"{r.seconds:.2f}s over the {r.limit}s budget"


def test_quick_suite_under_ten_seconds():
    res = run_all(quick=True)
    assert [r.number for r in res] == list(QUICK)
    assert all(r.passed for r in res)
    assert sum(r.seconds for r in res) < 10


@pytest.mark.parametrize("fault,number,needle", [
    ("flip-strong", 4, "GaugeError"),
    ("skip-disjoint", 8, "recycled internal node"),
    ("lose-color", 2, "homogeneity invariant broken"),
])
def test_injected_fault_is_reported(fault, number, needle):
    faults.enable(fault)
    try:
        (r,) = run_all(only={number})
    finally:
        faults.disable()
    assert not r.passed and needle in r.line()
