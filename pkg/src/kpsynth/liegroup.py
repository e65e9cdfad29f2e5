"""SO(3), so(3) and the K-P Cartan decomposition.

Group elements are plain ``(3, 3)`` numpy arrays. Algebra elements carry
their coordinates in the basis ``{p1, p2, k}`` where ``p1`` and ``p2`` span
the P-part (the controlled directions) and ``k`` spans the K-part. In this
basis the coordinates coincide with the usual axis vector of a skew matrix,
so ``exp`` is the Rodrigues formula.

The symmetry group is ``G = K+ u K-`` acting by conjugation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .exceptions import InvalidInputError

#: Tolerance for orthogonality and determinant checks.
TAU_ORTH = 1e-9

P1 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
P2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
K = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

IDENTITY = np.eye(3)
#: Rotation by pi about the k axis; fixed by every element of G.
J = np.diag([-1.0, -1.0, 1.0])


def hat(v) -> np.ndarray:
    """Skew-symmetric matrix of the vector ``v`` (``hat(v) @ w == cross(v, w)``)."""
    a, b, c = v
    return np.array([[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]])


def vee(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`hat`; uses the skew part of ``m``."""
    return 0.5 * np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])


@dataclass(frozen=True)
class AlgebraElement:
    """The element ``a*p1 + b*p2 + c*k`` of so(3)."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> AlgebraElement:
        a, b, c = vee(np.asarray(m, dtype=float))
        return cls(float(a), float(b), float(c))

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])

    @property
    def matrix(self) -> np.ndarray:
        return hat(self.coords)

    @property
    def p_part(self) -> AlgebraElement:
        return AlgebraElement(self.a, self.b, 0.0)

    @property
    def k_part(self) -> AlgebraElement:
        return AlgebraElement(0.0, 0.0, self.c)

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self))

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.a - other.a, self.b - other.b, self.c - other.c)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(-self.a, -self.b, -self.c)

    def __mul__(self, scalar: float) -> AlgebraElement:
        return AlgebraElement(scalar * self.a, scalar * self.b, scalar * self.c)

    __rmul__ = __mul__

    def isclose(self, other: AlgebraElement, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coords, other.coords, rtol=0.0, atol=atol))


p1 = AlgebraElement(1.0, 0.0, 0.0)
p2 = AlgebraElement(0.0, 1.0, 0.0)
k = AlgebraElement(0.0, 0.0, 1.0)
ZERO = AlgebraElement()


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, AlgebraElement):
        return x.matrix
    return np.asarray(x, dtype=float)


def inner_product(x, y) -> float:
    """``-1/2 Tr(x y)``; makes ``{p1, p2, k}`` orthonormal."""
    return float(-0.5 * np.trace(_as_matrix(x) @ _as_matrix(y)))


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Matrix commutator ``[x, y] = xy - yx``."""
    mx, my = x.matrix, y.matrix
    return AlgebraElement.from_matrix(mx @ my - my @ mx)


def ad_power(x: AlgebraElement, y: AlgebraElement, n: int) -> AlgebraElement:
    """``ad_x^n (y)``."""
    for _ in range(n):
        y = bracket(x, y)
    return y


def cartan_split(x: AlgebraElement) -> tuple[AlgebraElement, AlgebraElement]:
    """Return ``(p_part, k_part)`` with ``p_part + k_part == x``."""
    return x.p_part, x.k_part


def rodrigues(axis_angle) -> np.ndarray:
    """Exponential of ``hat(axis_angle)`` in closed form."""
    w = np.asarray(axis_angle, dtype=float)
    theta = float(np.linalg.norm(w))
    if theta == 0.0:
        return np.eye(3)
    W = hat(w / theta)
    return np.eye(3) + math.sin(theta) * W + (1.0 - math.cos(theta)) * (W @ W)


def exp(x: AlgebraElement, t: float = 1.0) -> np.ndarray:
    """``e^{x t}``."""
    return rodrigues(t * x.coords)


def is_rotation(m, tol: float = TAU_ORTH) -> bool:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        return False
    return bool(
        np.abs(m.T @ m - np.eye(3)).max() <= tol and abs(np.linalg.det(m) - 1.0) <= tol
    )


def check_rotation(m, tol: float = TAU_ORTH) -> np.ndarray:
    """Return ``m`` as a float array, raising if it is not in SO(3) within ``tol``."""
    arr = np.asarray(m, dtype=float)
    if not is_rotation(arr, tol):
        raise InvalidInputError("matrix is not a rotation within tolerance %g" % tol)
    return arr


def nearest_rotation(m) -> np.ndarray:
    """Polar projection onto SO(3). Never applied implicitly."""
    u, _, vt = np.linalg.svd(np.asarray(m, dtype=float))
    d = np.sign(np.linalg.det(u @ vt))
    return u @ np.diag([1.0, 1.0, d]) @ vt


def k_plus(r: float) -> np.ndarray:
    c, s = math.cos(r), math.sin(r)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def k_minus(r: float) -> np.ndarray:
    c, s = math.cos(r), math.sin(r)
    return np.array([[c, -s, 0.0], [-s, -c, 0.0], [0.0, 0.0, -1.0]])


def h(s: float) -> np.ndarray:
    """``e^{p1 s}``, rotation by ``s`` about the p1 axis."""
    return exp(p1, s)


@dataclass(frozen=True)
class SymmetryElement:
    """An element ``K+(angle)`` or ``K-(angle)`` of G."""

    angle: float = 0.0
    component: Literal["plus", "minus"] = "plus"

    def __post_init__(self):
        if self.component not in ("plus", "minus"):
            raise InvalidInputError("component must be 'plus' or 'minus'")
        object.__setattr__(self, "angle", float(self.angle) % (2.0 * math.pi))

    @property
    def matrix(self) -> np.ndarray:
        if self.component == "plus":
            return k_plus(self.angle)
        return k_minus(self.angle)

    def inverse(self) -> SymmetryElement:
        # K-(r) is an involution.
        if self.component == "plus":
            return SymmetryElement(-self.angle, "plus")
        return self

    def __matmul__(self, other: SymmetryElement) -> SymmetryElement:
        return symmetry_from_matrix(self.matrix @ other.matrix)

    def to_dict(self) -> dict:
        return {"angle": self.angle, "component": self.component}


def symmetry_from_matrix(m, tol: float = 1e-9) -> SymmetryElement:
    """Recover the :class:`SymmetryElement` whose matrix is ``m``."""
    m = np.asarray(m, dtype=float)
    if abs(m[2, 2] - 1.0) <= tol:
        el = SymmetryElement(math.atan2(m[0, 1], m[0, 0]), "plus")
    elif abs(m[2, 2] + 1.0) <= tol:
        el = SymmetryElement(math.atan2(-m[0, 1], m[0, 0]), "minus")
    else:
        raise InvalidInputError("matrix is not in K+ or K-")
    if np.abs(el.matrix - m).max() > max(tol, 1e-7):
        raise InvalidInputError("matrix is not in K+ or K-")
    return el


def _sym_matrix(g) -> np.ndarray:
    if isinstance(g, SymmetryElement):
        return g.matrix
    return np.asarray(g, dtype=float)


def conjugate(g, x):
    """``g x g^{-1}`` for a group matrix or an :class:`AlgebraElement` ``x``."""
    gm = _sym_matrix(g)
    if isinstance(x, AlgebraElement):
        return AlgebraElement.from_matrix(gm @ x.matrix @ gm.T)
    return gm @ np.asarray(x, dtype=float) @ gm.T


def random_symmetry(rng: np.random.Generator) -> SymmetryElement:
    return SymmetryElement(rng.uniform(0.0, 2.0 * math.pi), "plus" if rng.random() < 0.5 else "minus")


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed rotation from a uniform unit quaternion."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return quaternion_to_matrix(q)


def quaternion_to_matrix(q) -> np.ndarray:
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )
