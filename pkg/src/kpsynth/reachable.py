"""Boundaries of the projected reachable sets and membership tests."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .exceptions import InvalidInputError
from .geodesics import ReducedGeodesic, reduced_disc_xy, reduced_projection
from .orbitspace import OrbitPoint
from .synthesis import ALPHA_CRIT, T_MAX, TAU_SOL, loss_of_optimality_time, orbit_min_time

#: Maximum distance between consecutive frontier samples in the disc.
H_MAX = 0.01


@dataclass(frozen=True)
class FrontierCurve:
    time: float
    samples: tuple[tuple[float, OrbitPoint], ...]

    @property
    def alphas(self) -> np.ndarray:
        return np.array([a for a, _ in self.samples])

    @property
    def points(self) -> list[OrbitPoint]:
        return [p for _, p in self.samples]

    def max_step(self) -> float:
        pts = self.points
        return max((pts[i].distance(pts[i + 1]) for i in range(len(pts) - 1)), default=0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["alpha", "rho", "theta"])
        for a, p in self.samples:
            writer.writerow([repr(a), repr(p.rho), repr(p.theta)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "samples": [{"alpha": a, **p.to_dict()} for a, p in self.samples],
        }


def frontier_alpha_range(T: float) -> tuple[float, float]:
    """Range of ``alpha`` whose geodesics are still optimal at time ``T``.

    Below ``T = pi`` it starts at 0; above it starts at the geodesic that
    dies on the symmetric matrices exactly at ``T``. It always ends at the
    geodesic reaching the rim at ``T``.
    """
    if not (0.0 < T <= T_MAX + 1e-12):
        raise InvalidInputError("T must lie in (0, pi*sqrt(3)]")
    T = min(T, T_MAX)
    end = math.sqrt(max((2.0 * math.pi / T) ** 2 - 1.0, 0.0))
    if T <= math.pi:
        start = 0.0
    elif T >= T_MAX:
        start = end = ALPHA_CRIT
    else:
        start = brentq(
            lambda a: loss_of_optimality_time(a) - T,
            0.0,
            ALPHA_CRIT,
            xtol=1e-15,
            rtol=4 * np.finfo(float).eps,
            maxiter=200,
        )
        end = max(end, start)
    return start, end


def frontier(T: float, h_max: float = H_MAX, max_points: int = 200_000) -> FrontierCurve:
    """Boundary of the projected reachable set at time ``T`` as an ``alpha``-ordered curve."""
    start, end = frontier_alpha_range(T)
    T = min(T, T_MAX)
    if start == end:
        # the frontier has shrunk to the single point A
        return FrontierCurve(float(T), ((float(start), reduced_projection(ReducedGeodesic(start), T)),))
    # arctan spacing copes with the unbounded alpha range for small T
    psi = np.linspace(math.atan(start), math.atan(end), 65)
    alphas = np.tan(psi)
    alphas[0], alphas[-1] = start, end
    while True:
        x, y = reduced_disc_xy(alphas, T)
        gaps = np.hypot(np.diff(x), np.diff(y))
        wide = np.flatnonzero(gaps > h_max)
        if wide.size == 0 or alphas.size > max_points:
            break
        mids = 0.5 * (alphas[wide] + alphas[wide + 1])
        alphas = np.sort(np.concatenate([alphas, mids]))
    samples = tuple((float(a), reduced_projection(ReducedGeodesic(float(a)), T)) for a in alphas)
    return FrontierCurve(float(T), samples)


def reachable_contains(T: float, p: OrbitPoint) -> bool:
    if T < 0.0:
        raise InvalidInputError("T must be non-negative")
    return orbit_min_time(p)[0] <= T + TAU_SOL


def default_times(n: int = 12) -> list[float]:
    """Evenly spaced times in ``(0, pi*sqrt(3)]``."""
    return [T_MAX * (i + 1) / n for i in range(n)]


def export_frontiers(times, directory, fmt: str = "csv") -> list[str]:
    """Write one file per time plus ``manifest.json``; return the file names."""
    from pathlib import Path

    if fmt not in ("csv", "json"):
        raise InvalidInputError("format must be csv or json")
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for i, T in enumerate(times):
        curve = frontier(float(T))
        name = "frontier_%03d.%s" % (i, fmt)
        text = curve.to_csv() if fmt == "csv" else json.dumps(curve.to_dict()) + "\n"
        (out / name).write_text(text)
        names.append(name)
    manifest = {"times": [float(T) for T in times], "files": names}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return names + ["manifest.json"]
