"""Frontiers of the projected reachable sets.

Below ``T = pi`` the frontier starts on the segment OB (``alpha = 0``);
at ``T = pi`` it passes through the centre; above it the frontier starts on
the symmetric segment AO, and at ``T = pi sqrt(3)`` everything is reached.
Writes one CSV per time plus a manifest in ``out/frontiers``.
"""

import math
from pathlib import Path

from kpsynth.orbitspace import OrbitPoint
from kpsynth.reachable import default_times, export_frontiers, frontier, frontier_alpha_range, reachable_contains

out = Path(__file__).with_name("out") / "frontiers"

times = default_times(12) + [math.pi]
names = export_frontiers(times, out, "csv")
print("wrote", len(names), "files to", out)

# %% the regime change
for T in times:
    lo, hi = frontier_alpha_range(T)
    c = frontier(T)
    print("T=%.4f  alpha in [%.4f, %.4f]  %5d samples  min rho=%.2e" % (
        T, lo, hi, len(c.samples), min(p.rho for p in c.points)))

# %% membership grows with T
p = OrbitPoint(1.0, 2.5)
print([reachable_contains(T, p) for T in times[:-1]])
