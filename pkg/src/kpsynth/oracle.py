"""Brute-force minimum-time estimates from piecewise-constant unit controls.

This module knows nothing about geodesics. It searches directly over
control schedules ``u_i = (cos phi_i, sin phi_i)`` held for ``dt`` each and
bisects on the horizon. A horizon counts as feasible only once a schedule
lands exactly (to round-off) on the target orbit, so every returned time is
achieved by an admissible control and bounds the true minimum from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import liegroup as lg
from .exceptions import InvalidInputError, NoEstimateError
from .orbitspace import OrbitPoint


@dataclass(frozen=True)
class ControlSchedule:
    dt: float
    angles: tuple[float, ...] = ()

    def __post_init__(self):
        if self.dt < 0.0:
            raise InvalidInputError("dt must be non-negative")
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))

    @property
    def duration(self) -> float:
        return self.dt * len(self.angles)

    def controls(self) -> np.ndarray:
        a = np.asarray(self.angles)
        return np.stack([np.cos(a), np.sin(a)], axis=-1)


@dataclass(frozen=True)
class SearchBudget:
    n_steps: int = 40
    restarts: int = 10_000
    n_polish: int = 32
    max_iter: int = 150
    t_tol: float = 1e-3
    t_max: float = 2.0 * math.pi
    hit_tol: float = 1e-13
    seed: int = 0


@dataclass
class OracleResult:
    target: OrbitPoint
    estimate: float
    schedule: ControlSchedule
    evaluations: int = 0
    history: list = field(default_factory=list)


def step_matrices(angles, dt: float) -> np.ndarray:
    """Exact exponentials ``exp((cos phi p1 + sin phi p2) dt)``; shape ``angles.shape + (3, 3)``."""
    phi = np.asarray(angles, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    sd, cd = math.sin(dt), 1.0 - math.cos(dt)
    # axis n = (c, s, 0): E = I + sd [n]x + cd (n n^T - I)
    out = np.zeros(phi.shape + (3, 3))
    out[..., 0, 0] = 1.0 + cd * (c * c - 1.0)
    out[..., 0, 1] = cd * c * s
    out[..., 0, 2] = sd * s
    out[..., 1, 0] = cd * c * s
    out[..., 1, 1] = 1.0 + cd * (s * s - 1.0)
    out[..., 1, 2] = -sd * c
    out[..., 2, 0] = -sd * s
    out[..., 2, 1] = sd * c
    out[..., 2, 2] = 1.0 - cd
    return out


def _step_derivatives(angles, dt: float) -> np.ndarray:
    phi = np.asarray(angles, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    sd, cd = math.sin(dt), 1.0 - math.cos(dt)
    out = np.zeros(phi.shape + (3, 3))
    out[..., 0, 0] = -2.0 * cd * c * s
    out[..., 0, 1] = cd * (c * c - s * s)
    out[..., 0, 2] = sd * c
    out[..., 1, 0] = cd * (c * c - s * s)
    out[..., 1, 1] = 2.0 * cd * c * s
    out[..., 1, 2] = sd * s
    out[..., 2, 0] = -sd * c
    out[..., 2, 1] = -sd * s
    return out


def _quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of stacked quaternions ``(w, x, y, z)``."""
    w1, x1, y1, z1 = np.moveaxis(a, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def integrate(c: ControlSchedule) -> np.ndarray:
    """Final state ``E_N ... E_1`` of ``dX/dt = (u1 p1 + u2 p2) X`` from the identity.

    Steps are composed as unit quaternions (rotation by ``dt`` about
    ``(cos phi, sin phi, 0)``) and normalised once, so the result is
    orthogonal to round-off whatever the schedule length.
    """
    phi = np.asarray(c.angles, dtype=float)
    if phi.size == 0:
        return np.eye(3)
    h = 0.5 * c.dt
    q = np.stack([np.full_like(phi, math.cos(h)), math.sin(h) * np.cos(phi),
                  math.sin(h) * np.sin(phi), np.zeros_like(phi)], axis=-1)
    # pairwise products keep the rounding error at O(log N)
    while len(q) > 1:
        if len(q) % 2:
            q = np.concatenate([q, [[1.0, 0.0, 0.0, 0.0]]])
        q = _quat_mul(q[1::2], q[0::2])
    return lg.quaternion_to_matrix(q[0] / np.linalg.norm(q[0]))


def _batch_final(angles: np.ndarray, dt: float) -> np.ndarray:
    steps = step_matrices(angles, dt)
    x = np.broadcast_to(np.eye(3), angles.shape[:-1] + (3, 3)).copy()
    for i in range(angles.shape[-1]):
        x = steps[..., i, :, :] @ x
    return x


def _disc_xy(z, sigma):
    z = np.clip(z, -1.0, 1.0)
    rho = math.pi - np.arccos(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(1.0 + z > 1e-15, sigma / (1.0 + z), 1.0)
    theta = np.arccos(np.clip(ratio, -1.0, 1.0))
    return rho * np.cos(theta), rho * np.sin(theta)


def _residual_and_jacobian(phi: np.ndarray, dt: float, target: tuple[float, float]):
    steps = step_matrices(phi, dt)
    dsteps = _step_derivatives(phi, dt)
    n = len(phi)
    prefix = [np.eye(3)]
    for i in range(n):
        prefix.append(steps[i] @ prefix[-1])
    suffix = [np.eye(3)] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] @ steps[i]
    x = prefix[-1]
    r = np.array([x[2, 2] - target[0], x[0, 0] + x[1, 1] - target[1]])
    jac = np.empty((2, n))
    for i in range(n):
        d = suffix[i + 1] @ dsteps[i] @ prefix[i]
        jac[0, i] = d[2, 2]
        jac[1, i] = d[0, 0] + d[1, 1]
    return r, jac


def polish(phi, dt: float, target: tuple[float, float], max_iter: int = 60, tol: float = 1e-13):
    """Minimum-norm Gauss-Newton on the two orbit invariants."""
    phi = np.array(phi, dtype=float)
    r, jac = _residual_and_jacobian(phi, dt, target)
    trail = []
    for _ in range(max_iter):
        err = np.abs(r).max()
        if err <= tol:
            break
        trail.append(err)
        # stuck in a local minimum of the residual
        if len(trail) > 10 and err > 0.9 * trail[-11]:
            break
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        lam = 1.0
        while lam > 1e-4:
            cand = phi + lam * step
            r2, jac2 = _residual_and_jacobian(cand, dt, target)
            if np.abs(r2).max() < err:
                phi, r, jac = cand, r2, jac2
                break
            lam *= 0.5
        else:
            break
    return phi, float(np.abs(r).max())


def _random_profiles(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """Random low-order angle profiles plus a share of unstructured schedules."""
    tau = (np.arange(n) + 0.5) / n
    a = rng.uniform(0.0, 2.0 * math.pi, size=(count, 1))
    b = rng.uniform(-2.5 * math.pi, 2.5 * math.pi, size=(count, 1))
    c = rng.uniform(-math.pi, math.pi, size=(count, 1))
    phi = a + b * tau + c * tau * tau
    n_raw = count // 10
    phi[:n_raw] = rng.uniform(0.0, 2.0 * math.pi, size=(n_raw, n))
    return phi


def _feasible(T: float, target: OrbitPoint, budget: SearchBudget, rng: np.random.Generator, warm=None):
    n = budget.n_steps
    dt = T / n
    z_t = math.cos(math.pi - target.rho)
    inv = (z_t, math.cos(target.theta) * (1.0 + z_t))
    tx, ty = target.xy
    phis = _random_profiles(rng, budget.restarts, n)
    xs = _batch_final(phis, dt)
    x, y = _disc_xy(xs[:, 2, 2], xs[:, 0, 0] + xs[:, 1, 1])
    dist = np.hypot(x - tx, y - ty)
    # nearest candidates can all sit in one bad basin; mix in random ones
    n_near = (budget.n_polish + 1) // 2
    order = np.argsort(dist)
    near = order[:n_near]
    rest = order[n_near:]
    far = rng.choice(rest, size=min(budget.n_polish - n_near, rest.size), replace=False)
    starts = [phis[i] for i in np.concatenate([near, far])]
    if warm is not None:
        starts.insert(0, np.asarray(warm, dtype=float))
    for phi0 in starts:
        phi, err = polish(phi0, dt, inv, max_iter=budget.max_iter, tol=budget.hit_tol)
        if err <= budget.hit_tol:
            return ControlSchedule(dt, phi)
    return None


def search_min_time(target: OrbitPoint, budget: SearchBudget | None = None) -> OracleResult:
    budget = budget or SearchBudget()
    if target.mode != "half_disc":
        target = OrbitPoint(target.rho, abs(target.theta))
    seeds = np.random.SeedSequence(budget.seed)
    if target.rho >= math.pi and target.theta == 0.0:
        return OracleResult(target, 0.0, ControlSchedule(0.0, ()), 0, [])
    lo, hi = 0.0, budget.t_max
    best = _feasible(hi, target, budget, np.random.default_rng(seeds.spawn(1)[0]))
    history = [(hi, best is not None)]
    if best is None:
        raise NoEstimateError("target not reached within horizon %g" % hi)
    while hi - lo > budget.t_tol:
        mid = 0.5 * (lo + hi)
        rng = np.random.default_rng(seeds.spawn(1)[0])
        sched = _feasible(mid, target, budget, rng, warm=best.angles)
        history.append((mid, sched is not None))
        if sched is None:
            lo = mid
        else:
            hi, best = mid, sched
    return OracleResult(target, hi, best, len(history), history)


def estimate_min_time(target: OrbitPoint, budget: SearchBudget | None = None) -> float:
    """Upper bound on the minimum time to reach the orbit ``target``."""
    return search_min_time(target, budget).estimate


def oracle_report(target: OrbitPoint, budget: SearchBudget | None = None) -> dict:
    """``{"target", "estimate", "closed_form", "ratio"}`` for one target."""
    from .synthesis import orbit_min_time

    est = estimate_min_time(target, budget)
    exact = orbit_min_time(target)[0]
    ratio = est / exact if exact > 0.0 else (1.0 if est == 0.0 else math.inf)
    return {"target": [target.rho, target.theta], "estimate": est, "closed_form": exact, "ratio": ratio}
