"""Closed forms against brute force.

Searches piecewise-constant unit controls (40 steps) for the shortest horizon
that lands on a target orbit, and compares with the synthesis. The search only
ever certifies upper bounds, so every ratio should sit at or just above 1.
"""

import math

from kpsynth.oracle import SearchBudget, oracle_report
from kpsynth.orbitspace import OrbitPoint

budget = SearchBudget(n_steps=40, restarts=10_000, seed=0)
targets = [
    OrbitPoint(0.0, 0.0),
    OrbitPoint(math.pi - 1.0, 0.0),
    OrbitPoint(math.pi, math.pi / 2),
    OrbitPoint(1.5, math.pi),
    OrbitPoint(2.0, 2.0),
]
for p in targets:
    r = oracle_report(p, budget)
    print("target=(%.3f, %.3f)  closed form=%.4f  oracle=%.4f  ratio=%.4f" % (
        p.rho, p.theta, r["closed_form"], r["estimate"], r["ratio"]))
