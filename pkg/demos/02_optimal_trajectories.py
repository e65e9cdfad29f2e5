"""Optimal geodesics drawn in the orbit space.

For a grid of ``alpha`` the reduced geodesic ``e^{-alpha k t} e^{(alpha k + p1) t}``
is projected to the half disc up to the time it stops being optimal. Small
``alpha`` dies on the segment of symmetric matrices, large ``alpha`` on the
rim. Writes ``out/trajectories.csv``.
"""

import math
from pathlib import Path

import numpy as np

from kpsynth.geodesics import reduced_disc_xy
from kpsynth.synthesis import ALPHA_CRIT, T_MAX, loss_of_optimality_time, solve
from kpsynth.orbitspace import OrbitPoint, representative

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

alphas = np.concatenate([np.linspace(0.0, ALPHA_CRIT, 7), [0.8, 1.2, 2.0, 4.0]])

# %% loss-of-optimality times
for a in alphas:
    print("alpha=%.4f  optimal until t=%.6f" % (a, loss_of_optimality_time(float(a))))
print("between pi=%.4f and pi*sqrt(3)=%.4f" % (math.pi, T_MAX))

# %% sample and export
with open(out / "trajectories.csv", "w") as fh:
    fh.write("alpha,t,x,y\n")
    for a in alphas:
        t_end = loss_of_optimality_time(float(a))
        ts = np.linspace(0.0, t_end, 400)
        x, y = reduced_disc_xy(a, ts)
        for t, xi, yi in zip(ts, x, y):
            fh.write("%r,%r,%r,%r\n" % (float(a), float(t), float(xi), float(yi)))

# %% end points: the symmetric segment below 1/sqrt(3), the rim above
for a in alphas:
    x, y = reduced_disc_xy(a, loss_of_optimality_time(float(a)))
    print("alpha=%.4f  ends at rho=%.4f theta=%.4f" % (a, math.hypot(x, y), math.atan2(y, x)))

# %% a full solve, with the control that drives it
res = solve(representative(OrbitPoint(2.0, 2.0)))
print(res.to_json())
for t in np.linspace(0, res.T_min, 5):
    print("t=%.3f u=(%.4f, %.4f)" % ((t,) + res.control(t)))
print("residual at T_min:", res.residual())
