import json
import math

import numpy as np
import pytest
from scipy.optimize import brentq
from hypothesis import given
from hypothesis import strategies as st

from kpsynth import liegroup as lg
from kpsynth.exceptions import InvalidInputError
from kpsynth.geodesics import GeodesicSpec, geodesic_at, reduced_invariants, reduced_matrix
from kpsynth.orbitspace import OrbitPoint, Stratum, classify, project, representative
from kpsynth.synthesis import (
    ALPHA_CRIT,
    T_MAX,
    TAU_SOL,
    CutLocusReport,
    cut_report,
    cut_segment_alpha,
    isotropy_invariance_check,
    loss_of_optimality_time,
    min_time_boundary,
    min_time_origin,
    min_time_segment_OB,
    orbit_min_time,
    solve,
    stratum_path,
)


def brute_force_min_time(p):
    """Unrestricted minimum over every (alpha, t) reaching ``p``, with no optimality domain.

    For fixed alpha the level set X33 = z is explicit,
    ``cos(w t) = (1 + a^2) z - a^2``, which splits into branches
    ``t = (+-acos(c) + 2 pi m) / w``. Along each branch the trace condition is
    solved in alpha by bracketing on a dense grid.
    """
    z = math.cos(math.pi - p.rho)
    sigma = math.cos(p.theta) * (1 + z)
    # the level set exists only while (1 + a^2) z - a^2 >= -1
    a_max = math.sqrt((1 + z) / (1 - z)) if z < 1 else 80.0
    alphas = np.concatenate([np.linspace(0, 3, 6000), np.geomspace(3, 80, 2000)[1:]])
    alphas = alphas[alphas <= a_max]

    def branch(a, sign, m):
        a = np.asarray(a, dtype=float)
        c = (1 + a * a) * z - a * a
        w = np.sqrt(1 + a * a)
        return (sign * np.arccos(np.clip(c, -1, 1)) + 2 * math.pi * m) / w

    def resid(a, sign, m):
        return reduced_invariants(a, branch(a, sign, m))[1] - sigma

    best = math.inf
    for sign, m in ((1, 0), (-1, 1), (1, 1), (-1, 2)):
        vals = resid(alphas, sign, m)
        for i in np.flatnonzero(vals[:-1] * vals[1:] <= 0):
            a = brentq(lambda x: float(resid(x, sign, m)), alphas[i], alphas[i + 1], xtol=1e-14)
            best = min(best, float(branch(a, sign, m)))
    return best


# --- closed forms -----------------------------------------------------------


def test_boundary_examples():
    T, a = min_time_boundary(math.pi)
    assert T == pytest.approx(math.pi * math.sqrt(3), abs=1e-12)
    assert a == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    T, _ = min_time_boundary(math.pi / 2)
    assert T == pytest.approx(math.pi * math.sqrt(7) / 2, abs=1e-12)
    small = [min_time_boundary(th)[0] for th in (1e-2, 1e-4, 1e-6)]
    assert small[0] > small[1] > small[2] > 0 and small[2] < 1e-2
    for bad in (0.0, -1.0, 4.0):
        with pytest.raises(InvalidInputError):
            min_time_boundary(bad)


def test_boundary_time_increasing():
    ts = [min_time_boundary(th)[0] for th in np.linspace(1e-3, math.pi, 200)]
    assert np.all(np.diff(ts) > 0)


def test_boundary_branch_dominance():
    for th in np.linspace(0.01, math.pi, 60):
        # both branches solve sqrt(1 + a^2) T = 2 pi with a T = theta or 2 pi - theta
        t_plus = math.sqrt((2 * math.pi - th) * (2 * math.pi + th))
        a_plus = th / t_plus
        t_minus, a_minus = min_time_boundary(th)
        for t, a, at in ((t_plus, a_plus, th), (t_minus, a_minus, 2 * math.pi - th)):
            assert math.sqrt(1 + a * a) * t == pytest.approx(2 * math.pi, abs=1e-12)
            assert a * t == pytest.approx(at, abs=1e-12)
            assert math.cos(a * t) == pytest.approx(math.cos(th), abs=1e-12)
        assert t_minus <= t_plus + 1e-15


def test_segment_and_origin():
    assert min_time_segment_OB(math.pi / 2) == (math.pi / 2, 0.0)
    assert min_time_segment_OB(math.pi - 1e-9)[0] == pytest.approx(min_time_origin()[0])
    assert min_time_origin() == (math.pi, 0.0)
    p = project(geodesic_at(GeodesicSpec(lg.ZERO, lg.p1), math.pi))
    assert p.rho == pytest.approx(0.0, abs=1e-9)
    for bad in (0.0, math.pi, -0.1):
        with pytest.raises(InvalidInputError):
            min_time_segment_OB(bad)


def test_loss_of_optimality_examples():
    assert loss_of_optimality_time(ALPHA_CRIT) == pytest.approx(T_MAX, abs=1e-12)
    assert loss_of_optimality_time(2.0) == pytest.approx(2 * math.pi / math.sqrt(5), abs=1e-15)
    assert math.pi < loss_of_optimality_time(0.3) < T_MAX
    assert loss_of_optimality_time(0.0) == math.pi
    with pytest.raises(InvalidInputError):
        loss_of_optimality_time(-0.1)


def test_loss_time_lands_on_symmetric_segment():
    for a in np.linspace(0.02, ALPHA_CRIT - 0.02, 15):
        t = loss_of_optimality_time(float(a))
        x = reduced_matrix(a, t)
        assert np.trace(x) == pytest.approx(-1.0, abs=1e-12)
        assert project(x).theta == pytest.approx(math.pi, abs=1e-6)


def test_loss_time_monotone_and_continuous():
    ts = [loss_of_optimality_time(float(a)) for a in np.linspace(0, ALPHA_CRIT, 200)]
    assert np.all(np.diff(ts) > 0)
    assert ts[-1] == pytest.approx(T_MAX, abs=1e-9)


def test_cut_segment_alpha_round_trip():
    for rho in np.linspace(0.1, math.pi - 0.1, 9):
        a = cut_segment_alpha(rho)
        p = project(reduced_matrix(a, loss_of_optimality_time(a)))
        assert p.rho == pytest.approx(rho, abs=1e-9)


# --- solve -------------------------------------------------------------------


def test_solve_examples():
    r = solve(np.eye(3))
    assert r.T_min == 0.0
    r = solve(lg.J)
    assert r.T_min == pytest.approx(T_MAX, abs=1e-12) and r.alpha == pytest.approx(ALPHA_CRIT, abs=1e-12)
    assert solve(lg.k_minus(2.0)).T_min == pytest.approx(math.pi, abs=1e-12)
    assert solve(lg.h(1.0)).T_min == pytest.approx(1.0, abs=1e-12)


def test_solve_rejects_non_rotations():
    with pytest.raises(InvalidInputError):
        solve(np.eye(3) * 1.01)


def test_solve_round_trip(rng):
    for _ in range(200):
        x = lg.random_rotation(rng)
        r = solve(x)
        assert r.residual() <= TAU_SOL
        assert r.A_p.norm() == pytest.approx(1.0, abs=1e-12)
        assert 0.0 <= r.T_min <= T_MAX + 1e-12


def test_solve_round_trip_on_singular_strata(rng):
    targets = [lg.J, lg.k_plus(0.3), lg.k_plus(-2.0), lg.k_minus(1.0), lg.h(2.0)]
    targets += [lg.conjugate(lg.random_symmetry(rng), representative(OrbitPoint(r, math.pi)))
                for r in (0.2, 1.0, 2.0, 3.0)]
    for x in targets:
        assert solve(x).residual() <= TAU_SOL


def test_solve_equivariance(rng):
    for _ in range(100):
        x = lg.random_rotation(rng)
        y = lg.conjugate(lg.random_symmetry(rng), x)
        assert solve(x).T_min == pytest.approx(solve(y).T_min, abs=1e-6)


@pytest.mark.parametrize("pt", [(2.0, 2.0), (0.5, 0.5), (1.0, 1.0), (2.5, 0.7), (3.0, 1.5), (0.8, 2.8)])
def test_interior_time_matches_unrestricted_branch_search(pt):
    p = OrbitPoint(*pt)
    T, _ = orbit_min_time(p)
    assert brute_force_min_time(p) == pytest.approx(T, abs=1e-8)


def test_result_serialisation():
    r = solve(lg.J)
    d = json.loads(r.to_json())
    assert set(d) == {"T_min", "alpha", "A_k", "A_p", "conjugator"}
    assert set(d["conjugator"]) == {"angle", "component"}
    u = r.control(1.0)
    assert math.hypot(*u) == pytest.approx(1.0)


@given(st.floats(0.05, math.pi - 0.05), st.floats(0.05, math.pi - 0.05))
def test_orbit_time_below_global_bound(rho, theta):
    T, a = orbit_min_time(OrbitPoint(rho, theta))
    assert 0.0 < T <= T_MAX + 1e-12
    assert T <= loss_of_optimality_time(a) + 1e-9


def test_optimal_interval_stratification(rng):
    # before T_min the optimal geodesic stays in one stratum, below that of the target
    for x in [lg.random_rotation(rng) for _ in range(10)] + [lg.h(1.5)]:
        r = solve(x)
        path = stratum_path(r.spec, r.T_min, 40)
        assert len(set(path)) == 1
        assert path[0] <= classify(x)


# --- cut locus ---------------------------------------------------------------


def test_cut_report_examples(rng):
    rep = cut_report(lg.k_plus(math.pi / 2))
    assert rep.on_cut and rep.on_critical and len(rep.witnesses) >= 2
    assert not cut_report(lg.h(1.0)).on_cut
    assert not cut_report(np.eye(3)).on_cut
    assert not cut_report(lg.random_rotation(rng)).on_cut
    x = representative(OrbitPoint(1.3, math.pi))
    rep = cut_report(x)
    assert rep.on_cut and len(rep.witnesses) >= 2
    T = solve(x).T_min
    g1, g2 = rep.witnesses[:2]
    for g in (g1, g2):
        assert np.linalg.norm(geodesic_at(g, T) - x) <= TAU_SOL
    # distinct curves that meet again at T
    assert np.linalg.norm(geodesic_at(g1, 0.5 * T) - geodesic_at(g2, 0.5 * T)) > 1e-3


def test_cut_report_on_remaining_strata():
    for x in (lg.J, lg.k_minus(0.5)):
        rep = cut_report(x)
        assert rep.on_cut and rep.on_critical and not rep.witnesses[0].isclose(rep.witnesses[1], 1e-6)


def test_cut_report_structure():
    with pytest.raises(ValueError):
        CutLocusReport(True, False, ())
    with pytest.raises(ValueError):
        CutLocusReport(True, True, (GeodesicSpec.reduced(0.1),))
    assert CutLocusReport(False, True).witnesses == ()


def test_isotropy_invariance_examples(rng):
    x = lg.h(1.0)
    assert isotropy_invariance_check(x, solve(x).spec, 3)
    for th in (0.5, 1.5, 2.5):
        x = lg.k_plus(th)
        assert not isotropy_invariance_check(x, solve(x).spec, 0)
        assert not isotropy_invariance_check(x, GeodesicSpec(lg.ZERO, lg.p2), 0)
    x = lg.random_rotation(rng)
    assert isotropy_invariance_check(x, GeodesicSpec.reduced(2.0), 3)
    assert classify(x) is Stratum.TRIVIAL
