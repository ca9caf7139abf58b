"""Acceptance gate: every criterion at its stated tolerance and budget.

Monte Carlo criteria run >= 2*10^4 samples (10^5 for the rare annulus
events) and accept within 4 standard errors of the exact rational target;
everything else is exact with zero tolerance. One pass/fail line prints
per criterion. The same suite backs `padicgeo reproduce-paper`.
"""

import pytest

from padicgeo.accept import CRITERIA, run_criterion

SEED = 42


def _report(res):
    state = "pass" if res.passed and res.runtime_ok else "FAIL"
    print(
        f"\ncriterion {res.index:2d}  {state}  {res.runtime:7.2f}s"
        f" (budget {res.runtime_budget:.0f}s)  {res.name}"
    )


@pytest.mark.parametrize("index", range(1, len(CRITERIA) + 1))
def test_criterion(index):
    res = run_criterion(index, seed=SEED)
    _report(res)
    assert res.passed, f"criterion {index} failed: {res.details}"
    assert res.runtime_ok, (
        f"criterion {index} exceeded its runtime budget: "
        f"{res.runtime:.2f}s >= {res.runtime_budget:.0f}s"
    )
