"""Minimum-time synthesis for the K-P problem on SO(3).

The solver works on the orbit space first (which geodesic parameter
``alpha`` and which time ``T`` reach the orbit of the target) and then moves
inside the orbit with a conjugating symmetry element.

Closed forms cover the singular strata:

* rim ``rho = pi`` (matrices of ``K+``): ``T = sqrt(theta (4 pi - theta))``
* centre (matrices of ``K-``): ``T = pi`` with ``alpha = 0``
* open segment ``theta = 0``: ``T = pi - rho`` with ``alpha = 0``

Interior targets and the symmetric matrices (``theta = pi``) are found by
root-finding on the explicit reduced geodesics.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import liegroup as lg
from .exceptions import InvalidInputError, LiftError, NumericalFailure
from .geodesics import (
    GeodesicSpec,
    geodesic_at,
    optimal_control,
    reduced_half_angle_cos,
    reduced_invariants,
    reduced_matrix,
)
from .orbitspace import (
    OrbitPoint,
    Stratum,
    classify_point,
    find_conjugator,
    isotropy_group,
    project,
)

#: Tolerance of the solve postcondition, Frobenius norm on SO(3).
TAU_SOL = 1e-7
#: ``alpha`` at which the optimal geodesic reaches J; separates the two regimes.
ALPHA_CRIT = 1.0 / math.sqrt(3.0)
T_MAX = math.pi * math.sqrt(3.0)

_SCAN = 1500


@dataclass(frozen=True)
class SynthesisResult:
    T_min: float
    alpha: float
    A_k: lg.AlgebraElement
    A_p: lg.AlgebraElement
    conjugator: lg.SymmetryElement
    target: np.ndarray = field(repr=False, compare=False)

    @property
    def spec(self) -> GeodesicSpec:
        return GeodesicSpec(self.A_k, self.A_p, 1.0)

    def residual(self) -> float:
        return float(np.linalg.norm(geodesic_at(self.spec, self.T_min) - self.target))

    def control(self, t: float) -> tuple[float, float]:
        return optimal_control(self.spec, t)

    def to_dict(self) -> dict:
        return {
            "T_min": self.T_min,
            "alpha": self.alpha,
            "A_k": self.A_k.coords.tolist(),
            "A_p": self.A_p.coords.tolist(),
            "conjugator": self.conjugator.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class CutLocusReport:
    on_cut: bool
    on_critical: bool
    witnesses: tuple[GeodesicSpec, ...] = ()

    def __post_init__(self):
        # cut points are critical points (geodesics are analytic)
        if self.on_cut and not self.on_critical:
            raise ValueError("a cut point must be critical")
        if self.on_cut and len(self.witnesses) < 2:
            raise ValueError("a cut point needs two witnesses")


# --- closed forms -----------------------------------------------------------


def min_time_boundary(theta: float) -> tuple[float, float]:
    """Minimum time and ``alpha`` for the ``K+`` element with angle ``theta``."""
    if not (0.0 < theta <= math.pi):
        raise InvalidInputError("theta must lie in (0, pi]")
    root = math.sqrt(theta * (4.0 * math.pi - theta))
    return root, (2.0 * math.pi - theta) / root


def min_time_segment_OB(s: float) -> tuple[float, float]:
    """Points ``H(s)`` with ``0 < s < pi`` are reached along ``e^{p1 t}`` at ``t = s``."""
    if not (0.0 < s < math.pi):
        raise InvalidInputError("s must lie in (0, pi)")
    return s, 0.0


def min_time_origin() -> tuple[float, float]:
    return math.pi, 0.0


@functools.lru_cache(maxsize=8192)
def loss_of_optimality_time(alpha: float) -> float:
    """Time at which the reduced geodesic with parameter ``alpha`` stops being optimal.

    For ``alpha >= 1/sqrt(3)`` this is the return to the rim,
    ``2 pi / sqrt(1 + alpha^2)``. Below that the geodesic dies on the
    symmetric matrices (trace ``-1``), located by bracketing the sign change
    of the signed half-angle cosine.
    """
    if alpha < 0.0 or not math.isfinite(alpha):
        raise InvalidInputError("alpha must be a non-negative number")
    if alpha == 0.0:
        return math.pi
    w = math.sqrt(1.0 + alpha * alpha)
    if alpha >= ALPHA_CRIT:
        return 2.0 * math.pi / w
    ts = np.linspace(0.0, 2.0 * math.pi / w, 257)
    vals = reduced_half_angle_cos(alpha, ts)
    idx = np.flatnonzero(vals <= 0.0)
    if idx.size == 0 or idx[0] == 0:
        raise NumericalFailure("no sign change for alpha=%r" % alpha)
    i = int(idx[0])
    if vals[i] == 0.0:
        return float(ts[i])
    try:
        return float(
            brentq(
                lambda t: float(reduced_half_angle_cos(alpha, t)),
                ts[i - 1],
                ts[i],
                xtol=1e-15,
                rtol=4 * np.finfo(float).eps,
                maxiter=200,
            )
        )
    except (RuntimeError, ValueError) as exc:
        raise NumericalFailure(str(exc)) from exc


def cut_segment_alpha(rho: float) -> float:
    """``alpha`` whose geodesic loses optimality on the symmetric matrix at radius ``rho``."""
    z_target = math.cos(math.pi - rho)

    def f(a):
        return float(reduced_invariants(a, loss_of_optimality_time(a))[0]) - z_target

    lo, hi = 0.0, ALPHA_CRIT
    if f(lo) >= 0.0:
        return lo
    if f(hi) <= 0.0:
        return hi
    return float(brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))


# --- orbit-space inversion --------------------------------------------------


def _level_set(phi: np.ndarray, z_target: float):
    """``(alpha, t)`` on the level set ``X33 = z_target``, parametrised by ``phi = w t``."""
    a2 = np.maximum((z_target - np.cos(phi)) / (1.0 - z_target), 0.0)
    return np.sqrt(a2), phi / np.sqrt(1.0 + a2)


def _interior_candidates(z_target: float, sigma_target: float) -> list[tuple[float, float]]:
    """All ``(alpha, t)`` with ``wt <= 2 pi`` reaching the invariants ``(z, sigma)``."""
    phi0 = math.acos(z_target)
    phis = np.linspace(phi0, 2.0 * math.pi - phi0, _SCAN)

    def f(phi):
        a, t = _level_set(phi, z_target)
        return reduced_invariants(a, t)[1] - sigma_target

    vals = f(phis)
    brackets = []
    for i in range(len(phis) - 1):
        if vals[i] == 0.0:
            brackets.append((phis[i], phis[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            brackets.append((phis[i], phis[i + 1]))
    # a pair of roots inside one cell shows up as an extremum that stays on one side
    d = np.diff(vals)
    for i in np.flatnonzero(d[:-1] * d[1:] <= 0.0) + 1:
        sgn = math.copysign(1.0, vals[i])
        if vals[i - 1] * sgn <= 0.0 or vals[i + 1] * sgn <= 0.0:
            continue
        res = minimize_scalar(
            lambda x: sgn * float(f(x)),
            bounds=(phis[i - 1], phis[i + 1]),
            method="bounded",
            options={"xatol": 1e-14},
        )
        if res.fun < 0.0:
            brackets.append((phis[i - 1], res.x))
            brackets.append((res.x, phis[i + 1]))
    found = []
    for lo, hi in brackets:
        if lo == hi:
            root = lo
        else:
            root = brentq(lambda x: float(f(x)), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        a, t = _level_set(np.asarray(root), z_target)
        found.append((float(a), float(t)))
    return found


def orbit_min_time(p: OrbitPoint) -> tuple[float, float]:
    """``(T_min, alpha)`` of the optimal reduced geodesic reaching the orbit ``p``."""
    if p.mode != "half_disc":
        p = OrbitPoint(p.rho, abs(p.theta))
    stratum = classify_point(p)
    if stratum is Stratum.FULLG:
        if p.theta < 0.5 * math.pi:
            return 0.0, 0.0
        return min_time_boundary(math.pi)
    if stratum is Stratum.KPLUS:
        return min_time_boundary(p.theta)
    if stratum is Stratum.W:
        return min_time_origin()
    if stratum is Stratum.V and p.theta < 0.5 * math.pi:
        return min_time_segment_OB(math.pi - p.rho)
    if stratum is Stratum.V:
        a = cut_segment_alpha(p.rho)
        return loss_of_optimality_time(a), a
    z = math.cos(math.pi - p.rho)
    sigma = math.cos(p.theta) * (1.0 + z)
    best = None
    for a, t in _interior_candidates(z, sigma):
        if t <= 0.0 or t > loss_of_optimality_time(a) + 1e-9:
            continue
        if best is None or t < best[0]:
            best = (t, a)
    if best is None:
        raise NumericalFailure("no optimal geodesic reaches %r" % (p,))
    return best


def solve(x_f) -> SynthesisResult:
    """Minimum time, optimal ``(A_k, A_p)`` and conjugator for the target ``x_f``."""
    x_f = lg.check_rotation(x_f)
    p = project(x_f)
    t_min, alpha = orbit_min_time(p)
    y = reduced_matrix(alpha, t_min)
    try:
        kk = find_conjugator(y, x_f, tol=1e-6)
    except LiftError:
        # the mirror geodesic reaches the same orbit
        kk = find_conjugator(reduced_matrix(-alpha, t_min), x_f, tol=1e-6)
        alpha_signed = -alpha
    else:
        alpha_signed = alpha
    a_k = lg.conjugate(kk, alpha_signed * lg.k)
    a_p = lg.conjugate(kk, lg.p1)
    # exact zeros where the algebra says so
    a_k = lg.AlgebraElement(0.0, 0.0, a_k.c)
    a_p = lg.AlgebraElement(a_p.a, a_p.b, 0.0)
    return SynthesisResult(t_min, alpha, a_k, a_p, kk, x_f)


# --- cut locus ---------------------------------------------------------------


def _on_cut(stratum: Stratum, p: OrbitPoint) -> bool:
    if stratum in (Stratum.KPLUS, Stratum.W):
        return True
    if stratum is Stratum.FULLG:
        return p.theta > 0.5 * math.pi
    if stratum is Stratum.V:
        return p.theta > 0.5 * math.pi
    return False


def cut_report(x_f) -> CutLocusReport:
    x_f = lg.check_rotation(x_f)
    p = project(x_f)
    stratum = classify_point(p)
    if not _on_cut(stratum, p):
        return CutLocusReport(False, False, ())
    sol = solve(x_f)
    first = sol.spec
    witnesses = [first]
    for g in isotropy_group(x_f):
        other = first.conjugated(g)
        if not other.isclose(first, 1e-6):
            witnesses.append(other)
            break
    return CutLocusReport(True, True, tuple(witnesses))


def isotropy_invariance_check(x_f, g: GeodesicSpec, n_max: int) -> bool:
    """Do all ``ad_{A_k}^n A_p`` (``n <= n_max``) commute with the isotropy group of ``x_f``?"""
    terms = [lg.ad_power(g.A_k, g.A_p, n).matrix for n in range(n_max + 1)]
    for hh in isotropy_group(x_f):
        for m in terms:
            if np.abs(hh @ m @ hh.T - m).max() > 1e-9:
                return False
    return True


def stratum_path(spec: GeodesicSpec, t_end: float, n: int = 50) -> list[Stratum]:
    """Strata visited at ``n`` interior times of ``(0, t_end)``."""
    ts = np.linspace(0.0, t_end, n + 2)[1:-1]
    return [classify_point(project(geodesic_at(spec, float(t)))) for t in ts]
