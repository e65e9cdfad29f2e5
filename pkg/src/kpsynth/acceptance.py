"""Quantitative acceptance checks, shared by the test suite and ``kpsynth verify``.

Each ``criterion_N`` returns a :class:`CriterionResult`; none of them raise
on a failed check, so a report always lists all nine.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import liegroup as lg
from .geodesics import GeodesicSpec, geodesic_at, reduced_invariants, reduced_matrix
from .oracle import SearchBudget, estimate_min_time
from .orbitspace import OrbitPoint, Stratum, classify, project, representative
from .reachable import frontier, frontier_alpha_range, reachable_contains
from .synthesis import (
    ALPHA_CRIT,
    T_MAX,
    TAU_SOL,
    cut_report,
    isotropy_invariance_check,
    loss_of_optimality_time,
    min_time_boundary,
    orbit_min_time,
    solve,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    data: dict = field(default_factory=dict, repr=False)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return "[%s] %d. %s (%.1fs): %s" % (tag, self.number, self.name, self.seconds, self.detail)


def _timed(number, name, fn):
    t0 = time.perf_counter()
    passed, detail, data = fn()
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0, data)


#: Oracle targets: origin, segment, rim, point A, symmetric segment and interior.
ORACLE_TARGETS = (
    (0.0, 0.0),
    (math.pi - 1.0, 0.0),
    (math.pi, math.pi),
    (math.pi, 0.5 * math.pi),
    (1.5, math.pi),
    (2.0, 2.0),
    (0.5, 0.5),
    (1.0, 1.0),
    (2.5, 0.7),
    (3.0, 1.5),
    (0.8, 2.8),
    (2.8, 2.6),
)


def criterion_1(seed: int = 0):
    def run():
        worst = 0.0
        for theta in np.linspace(math.pi / 50, math.pi, 50):
            T, a = min_time_boundary(theta)
            root = math.sqrt(theta * (4 * math.pi - theta))
            worst = max(worst, abs(T - root), abs(a - (2 * math.pi - theta) / root))
            # the reduced geodesic must sit on the rim at the right angle
            z, sigma = reduced_invariants(a, T)
            worst = max(worst, abs(z - 1.0), abs(sigma - 2.0 * math.cos(theta)))
        T, a = min_time_boundary(math.pi)
        worst = max(worst, abs(T - T_MAX), abs(a - ALPHA_CRIT))
        return worst <= 1e-9, "max error %.2e over 50 angles and point A" % worst, {"error": worst}

    return _timed(1, "boundary minimum time", run)


def criterion_2(seed: int = 0):
    def run():
        rng = np.random.default_rng(seed)
        err_o = max(abs(solve(lg.k_minus(r)).T_min - math.pi) for r in rng.uniform(0, 2 * math.pi, 5))
        err_s = 0.0
        for s in np.linspace(0.05, math.pi - 0.05, 20):
            x = representative(OrbitPoint(math.pi - s, 0.0))
            err_s = max(err_s, abs(solve(x).T_min - s))
        ok = err_o <= 1e-7 and err_s <= 1e-6
        return ok, "origin error %.2e, segment error %.2e" % (err_o, err_s), {}

    return _timed(2, "origin and segment", run)


def criterion_3(seed: int = 0, budget: SearchBudget | None = None):
    budget = budget or SearchBudget(n_steps=40, restarts=10_000, seed=seed)

    def run():
        rows = []
        ok = True
        for rho, theta in ORACLE_TARGETS:
            p = OrbitPoint(rho, theta)
            exact = orbit_min_time(p)[0]
            est = estimate_min_time(p, budget)
            ratio = est / exact
            ok &= exact - TAU_SOL <= est <= 1.05 * exact
            rows.append({"target": [rho, theta], "estimate": est, "closed_form": exact, "ratio": ratio})
        worst = max(r["ratio"] for r in rows)
        low = min(r["estimate"] - r["closed_form"] for r in rows)
        return ok, "ratios in [%.4f, %.4f], min slack %.1e" % (
            min(r["ratio"] for r in rows), worst, low), {"rows": rows}

    return _timed(3, "oracle agreement", run)


def criterion_4(seed: int = 0):
    def run():
        alphas = np.linspace(-3.0, 3.0, 100)
        ts = np.linspace(0.0, 2.0 * math.pi, 100)
        closed = reduced_matrix(alphas[:, None], ts[None, :])
        worst = 0.0
        for i, a in enumerate(alphas):
            g = GeodesicSpec.reduced(a)
            for j, t in enumerate(ts):
                worst = max(worst, np.abs(geodesic_at(g, t) - closed[i, j]).max())
        # central differences against dX/dt = e^{-A_k t} A_p e^{A_k t} X
        rng = np.random.default_rng(1)
        h = 1e-5
        ode = 0.0
        for _ in range(200):
            kk = lg.random_symmetry(rng)
            g = GeodesicSpec.reduced(rng.uniform(-3, 3)).conjugated(kk)
            t = rng.uniform(0.1, 6.0)
            x = geodesic_at(g, t)
            dx = (geodesic_at(g, t + h) - geodesic_at(g, t - h)) / (2 * h)
            rhs = lg.exp(-g.A_k, t) @ g.A_p.matrix @ lg.exp(g.A_k, t) @ x
            ode = max(ode, np.abs(dx - rhs).max())
        ok = worst <= 1e-10 and ode < 1e-6
        return ok, "closed form vs exp %.2e, ODE residual %.2e" % (worst, ode), {}

    return _timed(4, "ODE and closed-form consistency", run)


def criterion_5(seed: int = 0):
    def run():
        rng = np.random.default_rng(seed)
        proj_err = time_err = 0.0
        for _ in range(500):
            x = lg.random_rotation(rng)
            kk = lg.random_symmetry(rng)
            y = lg.conjugate(kk, x)
            p, q = project(x), project(y)
            proj_err = max(proj_err, abs(p.rho - q.rho), abs(p.theta - q.theta))
            time_err = max(time_err, abs(solve(x).T_min - solve(y).T_min))
        ok = proj_err <= 1e-9 and time_err <= 1e-6
        return ok, "projection %.2e, T_min %.2e over 500 pairs" % (proj_err, time_err), {}

    return _timed(5, "symmetry invariants", run)


def _cut_samples(rng):
    """Ten cut points covering every cut stratum, plus non-cut points."""
    cut = [lg.J, lg.k_plus(1.0), lg.k_plus(2.5), lg.k_minus(0.3), lg.k_minus(4.0)]
    for rho in (0.7, 1.9, 2.9):
        cut.append(lg.conjugate(lg.random_symmetry(rng), representative(OrbitPoint(rho, math.pi))))
    cut.append(lg.conjugate(lg.random_symmetry(rng), lg.k_plus(-2.0)))
    cut.append(lg.conjugate(lg.random_symmetry(rng), representative(OrbitPoint(0.0, 0.0))))
    clear = [lg.IDENTITY, representative(OrbitPoint(1.0, 0.0)), representative(OrbitPoint(2.5, 0.0))]
    for _ in range(10):
        clear.append(lg.random_rotation(rng))
    return cut, clear


def _expected_cut(x) -> bool:
    """K+ rim, K- centre, and the symmetric matrices (theta = pi, J included)."""
    stratum = classify(x)
    if stratum in (Stratum.W, Stratum.KPLUS):
        return True
    return stratum in (Stratum.V, Stratum.FULLG) and project(x).theta > 0.5 * math.pi


def _witnesses_ok(x, report) -> bool:
    sol = solve(x)
    specs = report.witnesses
    if len(specs) < 2 or specs[0].isclose(specs[1], 1e-6):
        return False
    return all(np.linalg.norm(geodesic_at(g, sol.T_min) - x) <= TAU_SOL for g in specs[:2])


def criterion_6(seed: int = 0):
    def run():
        rng = np.random.default_rng(seed)
        cut, clear = _cut_samples(rng)
        bad = []
        for x in cut + clear:
            rep = cut_report(x)
            if rep.on_cut != _expected_cut(x):
                bad.append(("label", classify(x).value))
            elif rep.on_cut and not (rep.on_critical and _witnesses_ok(x, rep)):
                bad.append(("witness", classify(x).value))
        ok = not bad
        return ok, "%d cut points with 2 witnesses, %d clear points%s" % (
            len(cut), len(clear), "" if ok else ", failures %r" % bad), {}

    return _timed(6, "cut-locus classification", run)


def criterion_7(seed: int = 0):
    def run():
        rng = np.random.default_rng(seed)
        times = np.linspace(T_MAX / 10, T_MAX, 10)
        pts = [OrbitPoint(math.pi * math.sqrt(u), math.pi * v) for u, v in rng.random((200, 2))]
        tmins = np.array([orbit_min_time(p)[0] for p in pts])
        nested = True
        for p in pts:
            inside = [reachable_contains(T, p) for T in times]
            # once inside, always inside
            nested &= all(b or not a for a, b in zip(inside, inside[1:]))
        front_err = 0.0
        for T in times:
            curve = frontier(T)
            sel = curve.points[:: max(1, len(curve.points) // 50)] + [curve.points[-1]]
            front_err = max(front_err, max(abs(orbit_min_time(p)[0] - T) for p in sel))
        # regime change: the frontier leaves the origin exactly at T = pi
        starts = [frontier_alpha_range(T)[0] for T in (0.9 * math.pi, math.pi, 1.1 * math.pi)]
        rho_pi = min(p.rho for p in frontier(math.pi).points)
        regime = starts[0] == 0.0 and starts[1] == 0.0 and starts[2] > 0.0 and rho_pi <= 1e-9
        ok = nested and front_err <= 1e-4 and regime
        return ok, "nested=%s, frontier error %.2e, regime change at pi=%s (T_min range %.2f..%.2f)" % (
            nested, front_err, regime, tmins.min(), tmins.max()), {}

    return _timed(7, "reachable-set properties", run)


def criterion_8(seed: int = 0):
    def run():
        alphas = np.linspace(0.0, ALPHA_CRIT, 22)[1:-1]
        vals = [loss_of_optimality_time(float(a)) for a in alphas]
        ok = all(math.pi < v < T_MAX for v in vals)
        return ok, "loss times in [%.4f, %.4f]" % (min(vals), max(vals)), {"times": vals}

    return _timed(8, "loss-of-optimality bracket", run)


def criterion_9(seed: int = 0):
    def run():
        rng = np.random.default_rng(seed)
        passes = 0
        targets = [lg.random_rotation(rng) for _ in range(15)]
        targets += [lg.conjugate(lg.random_symmetry(rng), representative(OrbitPoint(r, 0.0)))
                    for r in (0.5, 1.0, 1.5, 2.0, 2.5)]
        for x in targets:
            passes += isotropy_invariance_check(x, solve(x).spec, 3)
        fails = 0
        for theta in np.linspace(0.3, 3.0, 10):
            x = lg.k_plus(theta)
            fails += not isotropy_invariance_check(x, solve(x).spec, 3)
        ok = passes == 20 and fails == 10
        return ok, "%d/20 non-cut targets pass, %d/10 rim targets fail" % (passes, fails), {}

    return _timed(9, "isotropy invariance", run)


CRITERIA = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9,
)


def run_all(seed: int = 0, echo=None) -> list[CriterionResult]:
    out = []
    for number, fn in enumerate(CRITERIA, 1):
        try:
            res = fn(seed)
        except Exception as exc:  # a crash is a failure, not an abort
            res = CriterionResult(number, fn.__name__, False, repr(exc))
        out.append(res)
        if echo is not None:
            echo(res.line())
    return out
