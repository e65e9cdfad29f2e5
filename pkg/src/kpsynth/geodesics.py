"""Closed-form K-P geodesics and their orbit-space projections.

A geodesic through the identity is ``X(t) = e^{-A_k t} e^{(A_k + A_p) t}``
with ``A_k`` in the K-part and ``A_p`` in the P-part, ``|A_p| = L``. The curve
solves ``dX/dt = e^{-A_k t} A_p e^{A_k t} X``, so that conjugated P-element is
the control.

Up to the action of G every unit-speed geodesic is ``e^{-a k t}
e^{(a k + p1) t}`` for a single real parameter ``a`` ("alpha").
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import liegroup as lg
from .exceptions import InvalidInputError
from .orbitspace import Mode, OrbitPoint, point_from_invariants, project


@dataclass(frozen=True)
class GeodesicSpec:
    """Parameters ``(A_k, A_p)`` of a geodesic with speed ``L = |A_p|``."""

    A_k: lg.AlgebraElement
    A_p: lg.AlgebraElement
    speed: float = 1.0

    def __post_init__(self):
        if abs(self.A_k.a) > 1e-12 or abs(self.A_k.b) > 1e-12:
            raise InvalidInputError("A_k must lie in the K-part")
        if abs(self.A_p.c) > 1e-12:
            raise InvalidInputError("A_p must lie in the P-part")
        if self.speed <= 0.0:
            raise InvalidInputError("speed must be positive")
        if abs(self.A_p.norm() - self.speed) > 1e-9 * max(1.0, self.speed):
            raise InvalidInputError("|A_p| must equal the speed bound")

    @classmethod
    def reduced(cls, alpha: float, speed: float = 1.0) -> GeodesicSpec:
        """The representative ``(alpha k, p1)`` scaled to speed ``speed``."""
        return cls(speed * alpha * lg.k, speed * lg.p1, speed)

    def conjugated(self, g) -> GeodesicSpec:
        return GeodesicSpec(lg.conjugate(g, self.A_k), lg.conjugate(g, self.A_p), self.speed)

    def isclose(self, other: GeodesicSpec, atol: float = 1e-9) -> bool:
        return self.A_k.isclose(other.A_k, atol) and self.A_p.isclose(other.A_p, atol)

    def to_dict(self) -> dict:
        return {"A_k": self.A_k.coords.tolist(), "A_p": self.A_p.coords.tolist(), "speed": self.speed}


@dataclass(frozen=True)
class ReducedGeodesic:
    alpha: float
    speed: float = 1.0

    def __post_init__(self):
        if self.alpha < 0.0:
            raise InvalidInputError("alpha must be non-negative")
        if self.speed <= 0.0:
            raise InvalidInputError("speed must be positive")


def geodesic_at(g: GeodesicSpec, t: float) -> np.ndarray:
    if t < 0.0:
        raise InvalidInputError("t must be non-negative")
    return lg.exp(-g.A_k, t) @ lg.exp(g.A_k + g.A_p, t)


def optimal_control(g: GeodesicSpec, t: float) -> tuple[float, float]:
    """Coordinates ``(u1, u2)`` of ``e^{-A_k t} A_p e^{A_k t}`` on ``{p1, p2}``."""
    if t < 0.0:
        raise InvalidInputError("t must be non-negative")
    # Ad of a rotation about the k axis is the same rotation of the coordinate vector
    u = lg.exp(-g.A_k, t) @ g.A_p.coords
    return float(u[0]), float(u[1])


def reduced_matrix(alpha, t):
    """Closed-form entries of ``e^{-alpha k t} e^{(alpha k + p1) t}``.

    Broadcasts over array ``alpha`` and ``t``; the result has shape
    ``broadcast(alpha, t).shape + (3, 3)``.
    """
    alpha, t = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(t, dtype=float))
    a2 = alpha * alpha
    w = np.sqrt(1.0 + a2)
    c1 = np.cos(w * t)
    c2 = np.sin(w * t) / w
    c3 = alpha * (1.0 - c1) / (1.0 + a2)
    d = (1.0 + c1 * a2) / (1.0 + a2)
    ca, sa = np.cos(alpha * t), np.sin(alpha * t)
    out = np.empty(alpha.shape + (3, 3))
    out[..., 0, 0] = d * ca + c2 * alpha * sa
    out[..., 0, 1] = c1 * sa - c2 * alpha * ca
    out[..., 0, 2] = c3 * ca - c2 * sa
    out[..., 1, 0] = -d * sa + c2 * alpha * ca
    out[..., 1, 1] = c1 * ca + c2 * alpha * sa
    out[..., 1, 2] = -c2 * ca - c3 * sa
    out[..., 2, 0] = c3
    out[..., 2, 1] = c2
    out[..., 2, 2] = (c1 + a2) / (1.0 + a2)
    return out


def reduced_invariants(alpha, t):
    """``(X33, X11 + X22)`` along the reduced geodesic, vectorised."""
    alpha, t = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(t, dtype=float))
    a2 = alpha * alpha
    w = np.sqrt(1.0 + a2)
    c1 = np.cos(w * t)
    c2 = np.sin(w * t) / w
    d = (1.0 + c1 * a2) / (1.0 + a2)
    z = (c1 + a2) / (1.0 + a2)
    sigma = (d + c1) * np.cos(alpha * t) + 2.0 * c2 * alpha * np.sin(alpha * t)
    return z, sigma


def reduced_half_angle_cos(alpha, t):
    """Signed ``cos(phi / 2)`` of the rotation angle ``phi`` of the reduced geodesic.

    Computed on the SU(2) lift, so it changes sign exactly where the curve
    crosses the rotations by pi (trace ``-1``).
    """
    alpha = np.asarray(alpha, dtype=float)
    t = np.asarray(t, dtype=float)
    w = np.sqrt(1.0 + alpha * alpha)
    return np.cos(0.5 * alpha * t) * np.cos(0.5 * w * t) + (alpha / w) * np.sin(
        0.5 * alpha * t
    ) * np.sin(0.5 * w * t)


def reduced_disc_xy(alpha, t):
    """Cartesian half-disc coordinates along the reduced geodesic, vectorised."""
    z, sigma = reduced_invariants(alpha, t)
    z = np.clip(z, -1.0, 1.0)
    rho = math.pi - np.arccos(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(1.0 + z > 1e-15, sigma / (1.0 + z), 1.0)
    theta = np.arccos(np.clip(ratio, -1.0, 1.0))
    return rho * np.cos(theta), rho * np.sin(theta)


def reduced_projection(r: ReducedGeodesic, t: float, mode: Mode = "half_disc") -> OrbitPoint:
    if t < 0.0:
        raise InvalidInputError("t must be non-negative")
    tt = r.speed * t
    if mode == "half_disc":
        z, sigma = reduced_invariants(r.alpha, tt)
        return point_from_invariants(float(z), float(sigma))
    return project(reduced_matrix(r.alpha, tt), mode)


def drift_reduce(a: lg.AlgebraElement, t: float, states) -> list[np.ndarray]:
    """Map driftless reachable states ``U`` to ``e^{a t} U`` for the drifted system."""
    if abs(a.a) > 1e-12 or abs(a.b) > 1e-12:
        raise InvalidInputError("drift must lie in the K-part")
    e = lg.exp(a, t)
    return [e @ np.asarray(u, dtype=float) for u in states]


def drift_transformed_control(a: lg.AlgebraElement, t: float, u: tuple[float, float]) -> tuple[float, float]:
    """Control ``v`` of the driftless system equivalent to ``u`` on the drifted one.

    ``e^{-a t} (u1 p1 + u2 p2) e^{a t} = v1 p1 + v2 p2`` and ``|v| = |u|``.
    """
    v = lg.exp(-a, t) @ np.array([u[0], u[1], 0.0])
    return float(v[0]), float(v[1])


# --- sampling / export ------------------------------------------------------


def sample(g: GeodesicSpec, times, mode: Mode = "half_disc") -> list[dict]:
    """Rows ``{t, rho, theta, X}`` along ``g``."""
    rows = []
    for t in times:
        x = geodesic_at(g, float(t))
        p = project(x, mode)
        rows.append({"t": float(t), "rho": p.rho, "theta": p.theta, "X": x.tolist()})
    return rows


def rows_to_csv(rows: list[dict], with_matrix: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["t", "rho", "theta"]
    if with_matrix:
        header += ["X%d%d" % (i + 1, j + 1) for i in range(3) for j in range(3)]
    writer.writerow(header)
    for row in rows:
        out = [repr(row["t"]), repr(row["rho"]), repr(row["theta"])]
        if with_matrix:
            out += [repr(v) for line in row["X"] for v in line]
        writer.writerow(out)
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=1)
