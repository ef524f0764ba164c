"""Linear and affine algebra of Minkowski 2+1 space.

Vectors are plain float64 numpy arrays of shape (3,); the scalar product is
``x1*y1 + x2*y2 - x3*y3``.  Points of the affine space are wrapped in
:class:`Point` so that only ``point - point`` and ``point + vector`` exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotLorentzOrthogonal, NotSpacelike

EPS_NULL = 1e-9
EPS_ORTH = 1e-9

J = np.diag([1.0, 1.0, -1.0])


def vec(*xs) -> np.ndarray:
    """Build a vector from three numbers or from one 3-sequence."""
    if len(xs) == 1:
        xs = xs[0]
    v = np.asarray(xs, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValueError(f"expected 3 components, got {v.shape}")
    return v


def lorentz_dot(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(u[0] * v[0] + u[1] * v[1] - u[2] * v[2])


def norm(v) -> float:
    """Euclidean length of a 3-vector."""
    v = np.asarray(v, dtype=float)
    return math.sqrt(float(v @ v))


def cross3(u, v) -> np.ndarray:
    """Euclidean cross product of two 3-vectors (cheaper than ``np.cross``)."""
    return np.array(
        [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]], dtype=float
    )


def lorentz_cross(u, v) -> np.ndarray:
    """Lorentzian cross product.

    Fixed by ``lorentz_dot(lorentz_cross(u, v), w) == det[u v w]``: the
    Euclidean cross product with its third component negated.
    """
    c = cross3(u, v)
    c[2] = -c[2]
    return c


def det3(u, v, w) -> float:
    return float(cross3(u, v) @ np.asarray(w, dtype=float))


class Causality(NamedTuple):
    kind: str  # "zero" | "timelike" | "null" | "spacelike"
    unit: bool = False

    def __str__(self):
        return f"{self.kind} (unit)" if self.unit else self.kind


def causal_class(v, eps: float = EPS_NULL) -> Causality:
    """Classify ``v`` by the sign of ``v.v``.

    The null band is relative: ``|v.v| <= eps * |v|^2`` (Euclidean norm), so
    classification does not depend on the scale of ``v``.
    """
    x, y, z = (float(c) for c in np.asarray(v, dtype=float))
    n2 = x * x + y * y + z * z
    if n2 == 0.0:
        return Causality("zero")
    q = x * x + y * y - z * z
    if abs(q) <= eps * n2:
        return Causality("null")
    if q < 0:
        return Causality("timelike")
    return Causality("spacelike", abs(q - 1.0) <= eps)


def is_spacelike(v, eps: float = EPS_NULL) -> bool:
    return causal_class(v, eps).kind == "spacelike"


def unit(v) -> np.ndarray:
    """Scale a spacelike or timelike vector to ``|v.v| = 1``."""
    v = np.asarray(v, dtype=float)
    return v / np.sqrt(abs(lorentz_dot(v, v)))


@dataclass(frozen=True, eq=False)
class NullFrame:
    u: np.ndarray
    u_minus: np.ndarray
    u_plus: np.ndarray

    def as_matrix(self) -> np.ndarray:
        return np.column_stack([self.u, self.u_minus, self.u_plus])


def null_frame(u) -> NullFrame:
    """Null frame ``(u, u-, u+)`` of a spacelike vector.

    ``u-`` and ``u+`` are the null vectors of ``u``-perp with third
    coordinate 1, labelled so that ``det[u, u-, u+] > 0``.
    """
    u = vec(u)
    if not is_spacelike(u):
        raise NotSpacelike(f"director {u.tolist()} is {causal_class(u)}")
    # (a, b, 1) null and orthogonal to u: a^2 + b^2 = 1, u1 a + u2 b = u3
    r2 = u[0] ** 2 + u[1] ** 2
    base = (u[2] / r2) * u[:2]
    h = np.sqrt(max(0.0, 1.0 - u[2] ** 2 / r2) / r2) * np.array([-u[1], u[0]])
    c1 = np.array([*(base + h), 1.0])
    c2 = np.array([*(base - h), 1.0])
    if det3(u, c1, c2) > 0:
        return NullFrame(u, c1, c2)
    return NullFrame(u, c2, c1)


def negate_frame_law(u, tol: float = 1e-12) -> bool:
    """Check that negating a director swaps its null vectors."""
    f = null_frame(u)
    g = null_frame(-vec(u))
    return bool(
        np.allclose(g.u_minus, f.u_plus, atol=tol, rtol=0)
        and np.allclose(g.u_plus, f.u_minus, atol=tol, rtol=0)
    )


def _orth_scale(A) -> float:
    return max(1.0, float(np.sum(A * A)))


def check_lorentz(A, eps: float = EPS_ORTH) -> np.ndarray:
    """Return ``A`` as an array, raising unless it lies in SO(2,1)."""
    A = np.asarray(A, dtype=float)
    if A.shape != (3, 3):
        raise NotLorentzOrthogonal(f"expected a 3x3 matrix, got {A.shape}")
    scale = _orth_scale(A)
    err = np.max(np.abs(A.T @ J @ A - J))
    if err > eps * scale:
        raise NotLorentzOrthogonal(f"A^T J A differs from J by {err:.3g}")
    d = np.linalg.det(A)
    if abs(d - 1.0) > eps * scale:
        raise NotLorentzOrthogonal(f"det A = {d!r}, expected 1")
    return A


def linear_class(A, eps: float = EPS_ORTH) -> str:
    """Hyperbolic / parabolic / elliptic / identity classification.

    Every element of SO(2,1) has 1 as an eigenvalue, so the characteristic
    polynomial factors as ``(x - 1)(x^2 - (tr A - 1) x + 1)`` and the
    remaining pair is real and distinct exactly when ``|tr A - 1| > 2``.
    """
    A = check_lorentz(A, eps)
    scale = _orth_scale(A)
    if np.max(np.abs(A - np.eye(3))) <= eps * scale:
        return "identity"
    tr = float(np.trace(A))
    if abs(tr - 3.0) <= eps * scale:
        return "parabolic"
    if tr > 3.0 or tr < -1.0 - eps * scale:
        return "hyperbolic"
    return "elliptic"


def boost(rapidity: float, axis: int = 0) -> np.ndarray:
    """Lorentz boost mixing spatial axis ``axis`` (0 or 1) with time."""
    c, s = np.cosh(rapidity), np.sinh(rapidity)
    B = np.eye(3)
    B[axis, axis] = B[2, 2] = c
    B[axis, 2] = B[2, axis] = s
    return B


def rotation(theta: float) -> np.ndarray:
    """Rotation of the spacelike x1x2-plane."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def random_lorentz(rng, max_rapidity: float = 1.5, orthochronous: bool = True):
    """Random element of SO(2,1), as rotation * boost * rotation."""
    A = rotation(rng.uniform(0, 2 * np.pi)) @ boost(
        rng.uniform(-max_rapidity, max_rapidity)
    ) @ rotation(rng.uniform(0, 2 * np.pi))
    if not orthochronous:
        A = np.diag([1.0, -1.0, -1.0]) @ A
    return A


class Point:
    """A point of the affine space, ``o + coords``."""

    __slots__ = ("coords",)

    def __init__(self, *xs):
        object.__setattr__(self, "coords", vec(*xs))
        self.coords.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("Point is immutable")

    def __sub__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.coords - other.coords

    def __add__(self, v):
        if isinstance(v, Point):
            return NotImplemented
        return Point(self.coords + vec(v))

    def __eq__(self, other):
        return isinstance(other, Point) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(tuple(self.coords))

    def __repr__(self):
        return f"Point({', '.join(repr(float(x)) for x in self.coords)})"

    def isclose(self, other: "Point", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coords, other.coords, atol=atol, rtol=0))


ORIGIN = Point(0.0, 0.0, 0.0)


@dataclass(frozen=True, eq=False)
class Isometry:
    """Orientation-preserving affine isometry ``p -> o + A(p - o) + v``."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "linear", check_lorentz(self.linear))
        object.__setattr__(self, "translation", vec(self.translation))

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def translation_by(cls, v) -> "Isometry":
        return cls(np.eye(3), vec(v))

    def __call__(self, p: Point) -> Point:
        return apply(self, p)

    def inverse(self) -> "Isometry":
        Ainv = J @ self.linear.T @ J
        return Isometry(Ainv, -Ainv @ self.translation)


def apply(gamma: Isometry, p: Point) -> Point:
    return Point(gamma.linear @ p.coords + gamma.translation)


def compose(g1: Isometry, g2: Isometry) -> Isometry:
    """``compose(g1, g2)(p) == g1(g2(p))``."""
    return Isometry(g1.linear @ g2.linear, g1.linear @ g2.translation + g1.translation)
