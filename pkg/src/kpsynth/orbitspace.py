"""The orbit space SO(3)/G as a half disc, and its orbit-type strata.

A point of the half disc has polar coordinates ``(rho, theta)`` with
``rho = pi - s`` and ``theta = r`` where ``H(s) K+(r)`` is the orbit
representative. The centre is the class of ``K-``, the arc ``rho = pi`` is
``K+`` (with the identity at ``theta = 0`` and ``J`` at ``theta = pi``).

With only the connected component ``K+`` acting the quotient is the full
disc; ``mode="full_disc"`` keeps the sign of ``theta`` given by the
``K+``-invariant ``X[0, 1] - X[1, 0]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import liegroup as lg
from .exceptions import InvalidInputError, LiftError

TAU_STRAT = 1e-7
TAU_NUM = 1e-9
_THETA_CUTOFF = 1e-15

Mode = Literal["half_disc", "full_disc"]


@dataclass(frozen=True)
class OrbitPoint:
    rho: float
    theta: float = 0.0
    mode: Mode = "half_disc"

    def __post_init__(self):
        if self.mode not in ("half_disc", "full_disc"):
            raise InvalidInputError("unknown mode %r" % (self.mode,))
        if not (-TAU_NUM <= self.rho <= math.pi + TAU_NUM):
            raise InvalidInputError("rho must lie in [0, pi]")
        lo = 0.0 if self.mode == "half_disc" else -math.pi
        if not (lo - TAU_NUM <= self.theta <= math.pi + TAU_NUM):
            raise InvalidInputError("theta out of range for mode %s" % self.mode)
        object.__setattr__(self, "rho", min(max(float(self.rho), 0.0), math.pi))
        theta = min(max(float(self.theta), lo), math.pi)
        if self.mode == "full_disc" and theta == -math.pi:
            theta = math.pi
        if self.rho == 0.0:
            theta = 0.0
        object.__setattr__(self, "theta", theta)

    @property
    def xy(self) -> tuple[float, float]:
        """Cartesian coordinates in the disc."""
        return self.rho * math.cos(self.theta), self.rho * math.sin(self.theta)

    def distance(self, other: OrbitPoint) -> float:
        x0, y0 = self.xy
        x1, y1 = other.xy
        return math.hypot(x1 - x0, y1 - y0)

    def to_dict(self) -> dict:
        return {"rho": self.rho, "theta": self.theta, "mode": self.mode}

    @classmethod
    def from_dict(cls, d: dict) -> OrbitPoint:
        return cls(float(d["rho"]), float(d["theta"]), d.get("mode", "half_disc"))


class Stratum(enum.Enum):
    """Orbit types, named after the isotropy group."""

    TRIVIAL = "Trivial"
    V = "V"
    W = "W"
    KPLUS = "Kplus"
    FULLG = "FullG"

    def __le__(self, other: Stratum) -> bool:
        return (self, other) in _ORDER

    def __lt__(self, other: Stratum) -> bool:
        return self != other and self <= other

    def __ge__(self, other: Stratum) -> bool:
        return other <= self

    def __gt__(self, other: Stratum) -> bool:
        return other < self


_COVERS = {
    Stratum.TRIVIAL: (Stratum.V, Stratum.KPLUS),
    Stratum.V: (Stratum.W,),
    Stratum.W: (Stratum.FULLG,),
    Stratum.KPLUS: (Stratum.FULLG,),
    Stratum.FULLG: (),
}


def _closure():
    order = set()
    for s in Stratum:
        stack = [s]
        while stack:
            cur = stack.pop()
            order.add((s, cur))
            stack.extend(_COVERS[cur])
    return frozenset(order)


_ORDER = _closure()


def _clamp_unit(x: float, what: str) -> float:
    if x > 1.0 + lg.TAU_ORTH or x < -1.0 - lg.TAU_ORTH:
        raise InvalidInputError("%s = %r outside [-1, 1]" % (what, x))
    return min(1.0, max(-1.0, x))


def invariants(x) -> tuple[float, float]:
    """The two G-invariants ``(X[2, 2], X[0, 0] + X[1, 1])``."""
    x = np.asarray(x, dtype=float)
    return float(x[2, 2]), float(x[0, 0] + x[1, 1])


def point_from_invariants(z: float, sigma: float, sign: float = 1.0, mode: Mode = "half_disc") -> OrbitPoint:
    z = _clamp_unit(z, "X33")
    s = math.acos(z)
    # theta is only lost once 1 + X33 is round-off; cutting off earlier
    # would move points near the centre by up to rho * pi
    if 1.0 + z <= _THETA_CUTOFF:
        r = 0.0
    else:
        r = math.acos(min(1.0, max(-1.0, sigma / (1.0 + z))))
    if mode == "full_disc" and sign < 0.0:
        r = -r
    return OrbitPoint(math.pi - s, r, mode)


def project(x, mode: Mode = "half_disc") -> OrbitPoint:
    """Orbit of ``x`` in polar coordinates on the (half) disc."""
    x = np.asarray(x, dtype=float)
    if x.shape != (3, 3):
        raise InvalidInputError("expected a 3x3 matrix")
    z, sigma = invariants(x)
    return point_from_invariants(z, sigma, x[0, 1] - x[1, 0], mode)


def representative(p: OrbitPoint) -> np.ndarray:
    """``H(pi - rho) K+(theta)``, the canonical matrix of the orbit ``p``."""
    return lg.h(math.pi - p.rho) @ lg.k_plus(p.theta)


def classify(x) -> Stratum:
    """Orbit type of ``x`` under ``G = K+ u K-``."""
    return classify_point(project(x))


def classify_point(p: OrbitPoint) -> Stratum:
    theta = abs(p.theta)
    at_rim = p.rho >= math.pi - TAU_STRAT
    on_axis = theta <= TAU_STRAT or theta >= math.pi - TAU_STRAT
    if p.rho <= TAU_STRAT:
        return Stratum.W
    if at_rim:
        if theta <= TAU_STRAT or theta >= math.pi - TAU_STRAT:
            return Stratum.FULLG
        return Stratum.KPLUS
    if on_axis:
        return Stratum.V
    return Stratum.TRIVIAL


# --- conjugators -----------------------------------------------------------

_F = lg.k_minus(0.0)  # diag(1, -1, -1)


def _plus_angle_candidates(y: np.ndarray, x: np.ndarray) -> list[float]:
    """Angles r for which K+(r) y K+(r)^T could equal x."""
    # K+(r) acts on the first two coordinates as rotation by -r.
    pairs = [(y[:2, 2], x[:2, 2]), (y[2, :2], x[2, :2])]
    cross = sum(a[0] * b[1] - a[1] * b[0] for a, b in pairs)
    dot = sum(a[0] * b[0] + a[1] * b[1] for a, b in pairs)
    out = []
    if math.hypot(cross, dot) > 1e-12:
        out.append(-math.atan2(cross, dot))
    # traceless symmetric part of the 2x2 block turns by twice the angle
    zy = complex(0.5 * (y[0, 0] - y[1, 1]), 0.5 * (y[0, 1] + y[1, 0]))
    zx = complex(0.5 * (x[0, 0] - x[1, 1]), 0.5 * (x[0, 1] + x[1, 0]))
    if abs(zy) > 1e-12 and abs(zx) > 1e-12:
        phi = -0.5 * math.atan2((zx / zy).imag, (zx / zy).real)
        out.extend([phi, phi + math.pi])
    out.append(0.0)
    return out


def find_conjugator(y, x, tol: float = 1e-7) -> lg.SymmetryElement:
    """Return ``K`` in G with ``K y K^{-1} = x``.

    Both components of G are scanned; raises :class:`LiftError` when no
    element matches within ``tol`` (Frobenius norm).
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    best, best_err = None, math.inf
    for component in ("plus", "minus"):
        # K-(r) = K+(r) F, so conjugating by K-(r) is K+(r) (F y F) K+(r)^T
        yy = y if component == "plus" else _F @ y @ _F
        for r in _plus_angle_candidates(yy, x):
            cand = lg.SymmetryElement(r, component)
            err = float(np.linalg.norm(lg.conjugate(cand, y) - x))
            if err < best_err:
                best, best_err = cand, err
    if best is None or best_err > tol:
        raise LiftError("no symmetry element found (best residual %.3e)" % best_err)
    return best


def lift_conjugator(p: OrbitPoint, x_f, tol: float = 1e-7) -> lg.SymmetryElement:
    """``K`` in G with ``K representative(p) K^{-1} = x_f``."""
    return find_conjugator(representative(p), x_f, tol)


# --- isotropy ---------------------------------------------------------------

_KPLUS_SAMPLES = 64

W_GROUP = (lg.IDENTITY, lg.k_minus(0.0), lg.k_minus(math.pi), lg.J)
V_GROUP = (lg.IDENTITY, lg.k_minus(0.0))


def isotropy_group(x, n_samples: int = _KPLUS_SAMPLES) -> list[np.ndarray]:
    """Elements of the isotropy group of ``x``.

    Finite groups are returned exactly; the continuous ``K+`` factor is
    sampled at ``n_samples`` angles.
    """
    p = project(x)
    stratum = classify_point(p)
    angles = np.linspace(0.0, 2.0 * math.pi, n_samples, endpoint=False)
    if stratum is Stratum.TRIVIAL:
        return [lg.IDENTITY.copy()]
    if stratum is Stratum.FULLG:
        return [lg.k_plus(a) for a in angles] + [lg.k_minus(a) for a in angles]
    if stratum is Stratum.KPLUS:
        return [lg.k_plus(a) for a in angles]
    base = W_GROUP if stratum is Stratum.W else V_GROUP
    # arccos only resolves theta to ~1e-8 near the axis; snap onto the stratum
    snapped = OrbitPoint(p.rho, 0.0 if p.theta < 0.5 * math.pi else math.pi)
    kk = lift_conjugator(snapped, x, tol=1e-6).matrix
    return [kk @ g @ kk.T for g in base]


# --- SU(2) cross-check ------------------------------------------------------


def su2_disc_point(u) -> complex:
    """Unit-disc coordinate of ``u = [[x, y], [-y*, x*]]`` in SU(2)/diagonal."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidInputError("expected a 2x2 matrix")
    x, y = u[0, 0], u[0, 1]
    if abs(abs(x) ** 2 + abs(y) ** 2 - 1.0) > 1e-9:
        raise InvalidInputError("|x|^2 + |y|^2 must equal 1")
    return complex(x)


def su2_to_so3(u) -> np.ndarray:
    """Image of ``u`` in SO(3) under the covering map, axes matched to p1, p2, k."""
    u = np.asarray(u, dtype=complex)
    x, y = u[0, 0], u[0, 1]
    # u = q0 - i (q3 sz + q1 sx + q2 sy) convention with x = q0 - i q3, y = -q2 - i q1
    q0, q3 = x.real, -x.imag
    q2, q1 = -y.real, -y.imag
    return lg.quaternion_to_matrix((q0, q1, q2, q3))


def strata_map(n_rho: int = 41, n_theta: int = 41, mode: Mode = "half_disc") -> list[dict]:
    """Orbit type on a polar grid of the disc; the grid hits the rim, centre and axis."""
    lo = 0.0 if mode == "half_disc" else -math.pi
    rows = []
    for rho in np.linspace(0.0, math.pi, n_rho):
        for theta in np.linspace(lo, math.pi, n_theta):
            p = OrbitPoint(float(rho), float(theta), mode)
            x, y = p.xy
            rows.append({"rho": float(rho), "theta": float(theta), "x": x, "y": y,
                         "stratum": classify_point(p).value})
    return rows
