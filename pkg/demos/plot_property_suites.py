"""
Randomised property suites
==========================

The same seeded suites that back ``cayley-wrap verify`` can be run from Python.
"""
from cayley_wrap.suites import SUITES, run_suite

for name in sorted(SUITES):
    res = run_suite(name, seed=42, samples=200)
    print(f"{name:14s} level {res.level}  max residual {res.max_residual:.2e}  "
          f"tol {res.tolerance:.0e}  {'PASS' if res.passed else 'FAIL'}")
