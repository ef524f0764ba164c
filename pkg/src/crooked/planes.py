"""Crooked planes and the two analytic disjointness criteria."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CrossingPair, DegeneratePair, NotSpacelike, NotUltraparallel
from .minkowski import (
    EPS_NULL,
    NullFrame,
    Point,
    causal_class,
    cross3,
    is_spacelike,
    lorentz_cross,
    lorentz_dot,
    norm,
    null_frame,
    unit,
    vec,
)

# relative threshold below which two null directions are considered equal
_JD = np.array([1.0, 1.0, -1.0])

ASYMPTOTIC_ANGLE = 1e-9
# relative slack used for the weak inequalities of consistent orientation
ORIENT_TOL = 1e-9
# relative margin a strict inequality must clear to count as satisfied
STRICT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CrookedPlane:
    vertex: Point
    director: np.ndarray
    frame: NullFrame = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.vertex, Point):
            object.__setattr__(self, "vertex", Point(self.vertex))
        u = vec(self.director)
        object.__setattr__(self, "director", u)
        object.__setattr__(self, "frame", null_frame(u))

    @property
    def u_minus(self):
        return self.frame.u_minus

    @property
    def u_plus(self):
        return self.frame.u_plus

    def negated(self) -> "CrookedPlane":
        return CrookedPlane(self.vertex, -self.director)

    def contains(self, q: Point, tol: float = 1e-9) -> bool:
        return contains_point(self, q, tol)


def _check_pair(u1, u2):
    u1, u2 = vec(u1), vec(u2)
    for u in (u1, u2):
        if not is_spacelike(u):
            raise NotSpacelike(f"director {u.tolist()} is {causal_class(u)}")
    c = cross3(u1, u2)
    if norm(c) <= 1e-12 * norm(u1) * norm(u2):
        raise DegeneratePair("directors are parallel")
    return u1, u2


def pair_class(u1, u2) -> str:
    """``crossing`` / ``ultraparallel`` / ``asymptotic`` from the causal type
    of the line ``u1-perp & u2-perp``, which is spanned by ``u1 x u2``."""
    u1, u2 = _check_pair(u1, u2)
    kind = causal_class(lorentz_cross(u1, u2)).kind
    return {"timelike": "crossing", "spacelike": "ultraparallel", "null": "asymptotic"}[kind]


def _orientation_score(u1, u2, nulls=None) -> float:
    """Largest of ``u1.u2`` and the ``u_i . u_j^{+-}`` (all scaled), which is
    ``<= 0`` exactly for a consistently oriented pair.

    The null vectors of ``u`` and ``-u`` coincide as a set, so ``nulls`` can
    be shared between sign choices.
    """
    if nulls is None:
        f1, f2 = null_frame(u1), null_frame(u2)
        nulls = [x / norm(x) for x in (f1.u_minus, f1.u_plus, f2.u_minus, f2.u_plus)]
    n1, n2 = norm(u1), norm(u2)
    terms = [lorentz_dot(u1, u2) / (n1 * n2)]
    for ui, ni in ((u1, n1), (u2, n2)):
        for x in nulls:
            terms.append(lorentz_dot(ui, x) / ni)
    return max(terms)


def consistently_oriented(u1, u2) -> bool:
    u1, u2 = _check_pair(u1, u2)
    if pair_class(u1, u2) == "crossing":
        raise CrossingPair("crossing directors have no consistent orientation")
    if lorentz_dot(u1, u2) >= 0:
        return False
    # the weak inequalities are exact zeros along a shared null direction
    return _orientation_score(u1, u2) <= ORIENT_TOL


def normalize_consistent(w1, w2):
    """Unique unit-spacelike ``(u1, u2)``, ``u_i`` in ``R w_i``, consistently
    oriented.  Of the four sign choices the one with the most negative
    orientation score is taken, which is robust when weak inequalities are
    tight."""
    w1, w2 = vec(w1), vec(w2)
    a, b = _normalize_cached(w1.tobytes(), w2.tobytes())
    return np.array(a), np.array(b)


@functools.lru_cache(maxsize=4096)
def _normalize_cached(k1: bytes, k2: bytes):
    # the predicates of one pair all normalize the same two directors
    w1, w2 = _check_pair(np.frombuffer(k1), np.frombuffer(k2))
    if pair_class(w1, w2) == "crossing":
        raise CrossingPair("crossing directors have no consistent orientation")
    a, b = unit(w1), unit(w2)
    f1, f2 = null_frame(a), null_frame(b)
    N = np.array([f1.u_minus, f1.u_plus, f2.u_minus, f2.u_plus])
    N /= np.sqrt((N * N).sum(axis=1))[:, None]
    NJ = N * _JD
    A, B = NJ @ a, NJ @ b
    ab = lorentz_dot(a, b)
    # score of (s1 a, s2 b) = max(s1 s2 a.b, max s1 A, max s2 B), as in
    # _orientation_score
    ext = {1.0: (A.max(), B.max()), -1.0: (-A.min(), -B.min())}
    best = min(
        itertools.product((1.0, -1.0), repeat=2),
        key=lambda s: max(s[0] * s[1] * ab, ext[s[0]][0], ext[s[1]][1]),
    )
    return tuple(best[0] * a + 0.0), tuple(best[1] * b + 0.0)


def stem_coordinates(u, x):
    """Coefficients ``(a, b)`` of the projection of ``x`` on ``a u- - b u+``."""
    f = null_frame(u)
    m = lorentz_dot(f.u_minus, f.u_plus)
    x = vec(x)
    return lorentz_dot(x, f.u_plus) / m, -lorentz_dot(x, f.u_minus) / m


def in_stem_quadrant(u, x, eps: float = EPS_NULL) -> str:
    """Membership of ``x`` in the stem quadrant ``{a u- - b u+ : a, b >= 0} - {0}``.

    Returns ``interior``, ``edge`` (exactly one of ``a, b`` is zero) or
    ``outside``.
    """
    u = vec(u)
    if not is_spacelike(u):
        raise NotSpacelike(f"director {u.tolist()} is {causal_class(u)}")
    x = vec(x)
    nx = norm(x)
    if nx == 0.0:
        return "outside"
    if abs(lorentz_dot(x, u)) > eps * nx * norm(u):
        return "outside"
    f = null_frame(u)
    dm = lorentz_dot(x, f.u_minus) / nx
    dp = lorentz_dot(x, f.u_plus) / nx
    if dm < -eps or dp > eps:
        return "outside"
    if abs(dm) <= eps or abs(dp) <= eps:
        return "edge"
    return "interior"


def dg_margin(cp1: CrookedPlane, cp2: CrookedPlane) -> float:
    """Left minus right side of the disjointness inequality, divided by
    ``|p2 - p1|`` so that it is scale free; positive iff disjoint."""
    if pair_class(cp1.director, cp2.director) != "ultraparallel":
        raise NotUltraparallel("disjointness inequality needs ultraparallel directors")
    u1, u2 = normalize_consistent(cp1.director, cp2.director)
    d = cp2.vertex - cp1.vertex
    nd = norm(d)
    if nd == 0.0:
        return 0.0
    lhs = lorentz_dot(d, lorentz_cross(u1, u2))
    rhs = abs(lorentz_dot(d, u1)) + abs(lorentz_dot(d, u2))
    return (lhs - rhs) / nd


def dg_disjoint(cp1: CrookedPlane, cp2: CrookedPlane) -> bool:
    return dg_margin(cp1, cp2) > STRICT_TOL


def _same_direction(a, b) -> bool:
    c = cross3(a, b)
    return norm(c) <= ASYMPTOTIC_ANGLE * norm(a) * norm(b)


def cone_inequalities(cp1: CrookedPlane, cp2: CrookedPlane):
    """Scaled values of the four half-space inequalities for ``p2 - p1``.

    Directors are first signed so that ``(-u1, u2)`` is consistently
    oriented.  Entries whose two null vectors coincide (asymptotic pairs)
    are ``None``.
    """
    v1, v2 = normalize_consistent(cp1.director, cp2.director)
    f1, f2 = null_frame(-v1), null_frame(v2)
    d = cp2.vertex - cp1.vertex
    nd = norm(d)
    pairs = [
        (f1.u_minus, f2.u_plus),
        (f1.u_plus, f2.u_minus),
        (f1.u_minus, f2.u_minus),
        (f1.u_plus, f2.u_plus),
    ]
    out = []
    for a, b in pairs:
        if _same_direction(a, b):
            out.append(None)
            continue
        c = lorentz_cross(a, b)
        out.append(lorentz_dot(d, c) / (nd * norm(c)) if nd else 0.0)
    return out


def cone_margin(cp1: CrookedPlane, cp2: CrookedPlane) -> float:
    """Smallest scaled inequality value; positive iff ``p2 - p1`` lies in the
    open cone of vertex differences giving disjointness."""
    if _parallel(cp1.director, cp2.director):
        return -np.inf
    if pair_class(cp1.director, cp2.director) == "crossing":
        raise CrossingPair("crossing directors: crooked planes always meet")
    vals = [v for v in cone_inequalities(cp1, cp2) if v is not None]
    return min(vals)


def _parallel(u1, u2) -> bool:
    return _same_direction(vec(u1), vec(u2))


def cone_disjoint(cp1: CrookedPlane, cp2: CrookedPlane) -> bool:
    """Disjointness via the stem-quadrant cone.

    Crooked planes with parallel directors always meet (a wing of one crosses
    the opposite wing of the other), so that case returns ``False``.
    """
    return cone_margin(cp1, cp2) > STRICT_TOL


# -- point membership ------------------------------------------------------


def _dist_to_ray(x, r):
    s = max(0.0, float(x @ r) / float(r @ r))
    return float(norm(x - s * r))


def _dist_to_line(x, r):
    s = float(x @ r) / float(r @ r)
    return float(norm(x - s * r))


def _dist_to_sector(x, e1, e2):
    """Euclidean distance from ``x`` to the cone ``{a e1 + b e2 : a, b >= 0}``."""
    G = np.array([[e1 @ e1, e1 @ e2], [e1 @ e2, e2 @ e2]])
    a, b = np.linalg.solve(G, np.array([x @ e1, x @ e2]))
    if a >= 0 and b >= 0:
        return float(norm(x - a * e1 - b * e2))
    return min(_dist_to_ray(x, e1), _dist_to_ray(x, e2))


def _dist_to_halfplane(x, inward, edge):
    """Distance to ``{a inward + b edge : a >= 0, b real}``."""
    G = np.array([[inward @ inward, inward @ edge], [inward @ edge, edge @ edge]])
    a, b = np.linalg.solve(G, np.array([x @ inward, x @ edge]))
    if a >= 0:
        return float(norm(x - a * inward - b * edge))
    return _dist_to_line(x, edge)


def piece_distances(cp: CrookedPlane, q: Point) -> dict:
    """Euclidean distance from ``q`` to each of the four planar pieces."""
    x = q - cp.vertex
    u, um, up = cp.director, cp.u_minus, cp.u_plus
    return {
        "stem": min(_dist_to_sector(x, um, up), _dist_to_sector(x, -um, -up)),
        "wing_plus": _dist_to_halfplane(x, u, up),
        "wing_minus": _dist_to_halfplane(x, -u, um),
    }


def contains_point(cp: CrookedPlane, q: Point, tol: float = 1e-9) -> bool:
    """Whether ``q`` lies within Euclidean distance ``tol`` of the crooked plane.

    The stem is ``{x in u-perp : x.x <= 0}``, i.e. the two quadrants where the
    ``u-``/``u+`` coefficients share a sign.  The wings are the half-planes
    ``{a u + b u+ : a >= 0}`` and ``{-a u + b u- : a >= 0}``.
    """
    return min(piece_distances(cp, q).values()) <= tol
