"""
Brute-force cross-checks
========================

Every suite compares a fast path against exhaustive exact computation on
random small instances. Seeds make the runs reproducible.
"""

from dsr_analyzer.oracle import SUITES, run_suite

for name in SUITES:
    r = run_suite(name, seed=1, cases=50)
    details = ", ".join(f"{k} {v}" for k, v in sorted(r.details.items()))
    print(f"{name:17s} {r.passed:3d}/{r.cases}  {r.seconds:5.2f}s  {details}")
