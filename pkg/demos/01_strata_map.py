"""Orbit types across the half disc.

Walks a polar grid of the orbit space and labels every point by its isotropy
type, then checks a few named matrices against the map. Writes
``out/strata_map.csv`` (the data behind the strata picture).
"""

import math
from collections import Counter
from pathlib import Path

import numpy as np

from kpsynth import liegroup as lg
from kpsynth.orbitspace import OrbitPoint, Stratum, classify, project, representative, strata_map

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# %% the grid
rows = strata_map(n_rho=61, n_theta=61)
print(Counter(r["stratum"] for r in rows))

with open(out / "strata_map.csv", "w") as fh:
    fh.write("rho,theta,x,y,stratum\n")
    for r in rows:
        fh.write("%r,%r,%r,%r,%s\n" % (r["rho"], r["theta"], r["x"], r["y"], r["stratum"]))

# %% named points
named = {
    "B (identity)": np.eye(3),
    "A (J)": lg.J,
    "O (a K- element)": lg.k_minus(0.7),
    "rim, K+(pi/2)": lg.k_plus(math.pi / 2),
    "segment OB, H(1)": lg.h(1.0),
    "segment AO": representative(OrbitPoint(1.0, math.pi)),
    "interior": representative(OrbitPoint(1.5, 1.0)),
}
for name, x in named.items():
    p = project(x)
    print("%-20s rho=%.4f theta=%.4f  %s" % (name, p.rho, p.theta, classify(x).value))

# %% the partial order, as a table
order = list(Stratum)
print("      " + " ".join("%7s" % s.value for s in order))
for a in order:
    print("%-6s" % a.value + " ".join("%7s" % ("<=" if a <= b else "") for b in order))

# %% the map is G-invariant: conjugating moves a matrix inside its orbit only
rng = np.random.default_rng(0)
x = lg.random_rotation(rng)
ys = [lg.conjugate(lg.random_symmetry(rng), x) for _ in range(5)]
print("spread of projections over an orbit:", max(project(y).distance(project(x)) for y in ys))
