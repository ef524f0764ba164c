"""Brute-force ground truth for crooked-plane disjointness.

Each planar piece of a crooked plane (two stem quadrants and two wings) is
clipped to a coordinate box around the vertex and meshed by triangles.  Two
meshes are intersected triangle against triangle: for non-coplanar pieces by
the interval-overlap test on the line where the two supporting planes meet,
for coplanar pieces by 2D polygon overlap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import shapely
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry import Polygon
from shapely.ops import nearest_points

from .errors import InvalidParams
from .minkowski import Point
from .planes import CrookedPlane, contains_point

log = logging.getLogger(__name__)

GRADING_RATIO = 1.5


@dataclass(frozen=True, eq=False)
class Piece:
    tag: str
    origin: np.ndarray  # apex of the piece (the vertex of the crooked plane)
    e1: np.ndarray
    e2: np.ndarray
    triangles: np.ndarray  # (m, 3, 3)
    corners: np.ndarray = None  # (k, 3) corners of the clipped convex polygon
    grid: np.ndarray = None  # (rings, chain, 3) mesh nodes
    cell: np.ndarray = None  # (m,) flat grid cell of each triangle

    @property
    def normal(self):
        n = np.cross(self.e1, self.e2)
        return n / np.linalg.norm(n)


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    vertices: np.ndarray  # (N, 3)
    triangles: np.ndarray  # (M, 3) int
    tags: tuple  # per triangle: "stem" | "wing_plus" | "wing_minus"
    pieces: tuple = ()

    def triangle_coords(self) -> np.ndarray:
        return self.vertices[self.triangles]


def _clip(poly, a, b, c):
    """Clip a convex 2D polygon by the half-plane ``a*s + b*r <= c``."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp <= 0:
            out.append(p)
        if fp * fq < 0:
            s = fp / (fp - fq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    return out


def _piece_polygon(e1, e2, kind, extent):
    """Clipped piece in ``(s, r)`` coordinates, ``x = s e1 + r e2``.

    ``kind`` is ``sector`` (``s, r >= 0``) or ``half`` (``s >= 0``).  The
    result is convex with the apex ``(0, 0)`` on its boundary.
    """
    # |s|, |r| bound over the box, from the pseudo-inverse of [e1 e2]
    M = np.column_stack([e1, e2])
    R = float(np.abs(np.linalg.pinv(M)).sum(axis=1).max() * extent) * 1.01 + 1.0
    if kind == "sector":
        poly = [(0.0, 0.0), (R, 0.0), (R, R), (0.0, R)]
    else:
        poly = [(0.0, -R), (R, -R), (R, R), (0.0, R)]
    for i in range(3):
        poly = _clip(poly, e1[i], e2[i], extent)
        poly = _clip(poly, -e1[i], -e2[i], extent)
        if not poly:
            break
    return poly


def _far_chain(poly, n):
    """Points along the boundary of ``poly`` that does not touch the apex.

    Chain corners are always included, so the fan from the apex tiles the
    polygon exactly.
    """
    pts = [np.asarray(p, dtype=float) for p in poly]
    m = len(pts)
    on_apex = [np.hypot(*p) <= 1e-12 for p in pts]
    if not any(on_apex):
        # half-plane piece: the apex sits inside the edge on s = 0
        i = next(i for i in range(m) if pts[i][0] == 0.0 and pts[(i + 1) % m][0] == 0.0)
        pts.insert(i + 1, np.zeros(2))
        m += 1
        on_apex = [np.hypot(*p) <= 1e-12 for p in pts]
    i0 = on_apex.index(True)
    order = [pts[(i0 + j) % m] for j in range(1, m)]
    lengths = np.array([np.linalg.norm(order[i + 1] - order[i]) for i in range(len(order) - 1)])
    if len(lengths) == 0 or lengths.sum() == 0:
        return np.zeros((0, 2))
    counts = np.maximum(1, np.round(n * lengths / lengths.sum()).astype(int))
    chain = []
    for i, c in enumerate(counts):
        for j in range(c):
            chain.append(order[i] + (order[i + 1] - order[i]) * (j / c))
    chain.append(order[-1])
    return np.array(chain)


def _ring_fractions(n):
    k = min(8, n // 2)
    steps = [GRADING_RATIO**j for j in range(k)] + [GRADING_RATIO**k] * (n - k)
    r = np.concatenate([[0.0], np.cumsum(steps)])
    return r / r[-1]


def _mesh_piece(origin, e1, e2, kind, extent, n, tag):
    poly = _piece_polygon(e1, e2, kind, extent)
    if len(poly) < 3:
        return Piece(tag, origin, e1, e2, np.zeros((0, 3, 3)), np.zeros((0, 3)), np.zeros((0, 0, 3)), np.zeros(0, int))
    chain = _far_chain(poly, n)
    rings = _ring_fractions(n)
    # grid[i, j] = rings[i] * chain[j]  in (s, r), lifted to 3D
    st = rings[:, None, None] * chain[None, :, :]
    P = origin + st[..., 0:1] * e1 + st[..., 1:2] * e2
    a, b, c, d = P[:-1, :-1], P[1:, :-1], P[1:, 1:], P[:-1, 1:]
    tri = np.concatenate(
        [np.stack([a, b, c], axis=-2).reshape(-1, 3, 3), np.stack([a, c, d], axis=-2).reshape(-1, 3, 3)]
    )
    # areas in the (s, r) chart, scaled by the chart's area element
    sa, sb, sc, sd = st[:-1, :-1], st[1:, :-1], st[1:, 1:], st[:-1, 1:]

    def area2(x, y, z):
        return np.abs((y[..., 0] - x[..., 0]) * (z[..., 1] - x[..., 1]) - (y[..., 1] - x[..., 1]) * (z[..., 0] - x[..., 0]))

    jac = 0.5 * float(np.linalg.norm(np.cross(e1, e2)))
    area = jac * np.concatenate([area2(sa, sb, sc).ravel(), area2(sa, sc, sd).ravel()])
    ncell = a.shape[0] * a.shape[1]
    cell = np.concatenate([np.arange(ncell), np.arange(ncell)])
    keep = area > 1e-12
    corners = origin + np.array([p[0] * e1 + p[1] * e2 for p in poly])
    return Piece(tag, origin, e1, e2, tri[keep], corners, P, cell[keep])


def crooked_pieces(cp: CrookedPlane, extent: float, n: int):
    if not extent > 0 or n < 2:
        raise InvalidParams(f"need extent > 0 and n >= 2, got {extent}, {n}")
    o = cp.vertex.coords
    u, um, up = cp.director, cp.u_minus, cp.u_plus
    return (
        _mesh_piece(o, um, up, "sector", extent, n, "stem"),
        _mesh_piece(o, -um, -up, "sector", extent, n, "stem"),
        _mesh_piece(o, u, up, "half", extent, n, "wing_plus"),
        _mesh_piece(o, -u, um, "half", extent, n, "wing_minus"),
    )


def mesh_crooked_plane(cp: CrookedPlane, extent: float, n: int) -> TriangleMesh:
    """Triangulate the crooked plane clipped to ``vertex + [-extent, extent]^3``.

    Each piece is fanned from the vertex with ``n`` rings (graded towards the
    vertex) and ``n`` boundary segments, so ``n^2`` cells per piece.
    """
    pieces = crooked_pieces(cp, extent, n)
    tris = np.concatenate([p.triangles for p in pieces])
    tags = tuple(t for p in pieces for t in [p.tag] * len(p.triangles))
    flat = np.round(tris.reshape(-1, 3), 12)
    verts, inv = np.unique(flat, axis=0, return_inverse=True)
    return TriangleMesh(tris.reshape(-1, 3).copy()[_first_index(inv, len(verts))], inv.reshape(-1, 3), tags, pieces)


def _first_index(inv, nv):
    idx = np.empty(nv, dtype=int)
    idx[inv[::-1]] = np.arange(len(inv))[::-1]
    return idx


# -- intersection ----------------------------------------------------------


def _line_intervals(tris, n, off, D, eps):
    """Intervals (along ``D``) where each triangle meets the plane
    ``x . n = off``; triangles that miss it are dropped."""
    d = tris @ n - off  # (m, 3)
    hit = (d.min(axis=1) <= eps) & (d.max(axis=1) >= -eps)
    tris, d = tris[hit], d[hit]
    if len(tris) == 0:
        return np.zeros((0, 2))
    proj = tris @ D  # (m, 3)
    lo = np.full(len(tris), np.inf)
    hi = np.full(len(tris), -np.inf)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        di, dj = d[:, i], d[:, j]
        cross = di * dj < 0
        with np.errstate(invalid="ignore", divide="ignore"):
            x = proj[:, i] + di / (di - dj) * (proj[:, j] - proj[:, i])
        lo = np.where(cross, np.minimum(lo, x), lo)
        hi = np.where(cross, np.maximum(hi, x), hi)
        on = np.abs(di) <= eps
        lo = np.where(on, np.minimum(lo, proj[:, i]), lo)
        hi = np.where(on, np.maximum(hi, proj[:, i]), hi)
    keep = lo <= hi
    return np.column_stack([lo[keep], hi[keep]])


def _near_triangles(P: Piece, n, off, eps):
    """Triangles of ``P`` whose grid cell straddles the plane ``x . n = off``."""
    d = P.grid @ n - off
    lo = np.minimum(np.minimum(d[:-1, :-1], d[1:, :-1]), np.minimum(d[1:, 1:], d[:-1, 1:]))
    hi = np.maximum(np.maximum(d[:-1, :-1], d[1:, :-1]), np.maximum(d[1:, 1:], d[:-1, 1:]))
    hit = ((lo <= eps) & (hi >= -eps)).ravel()
    return P.triangles[hit[P.cell]]


def _polygon_chord(corners, n, off, D, eps):
    if len(corners) < 3:
        return np.zeros((0, 2))
    fan = np.stack([np.repeat(corners[:1], len(corners) - 2, axis=0), corners[1:-1], corners[2:]], axis=1)
    I = _line_intervals(fan, n, off, D, eps)
    if len(I) == 0:
        return I
    return np.array([[I[:, 0].min(), I[:, 1].max()]])


def _union(I, eps):
    """Merge intervals into a sorted list of disjoint ones."""
    I = I[np.argsort(I[:, 0])]
    out = []
    lo, hi = I[0]
    for a, b in I[1:]:
        if a <= hi + eps:
            hi = max(hi, b)
        else:
            out.append((lo, hi))
            lo, hi = a, b
    out.append((lo, hi))
    return out


def _closest_shared(I, K, target, eps):
    """Parameter closest to ``target`` lying in both unions of intervals."""
    if len(I) == 0 or len(K) == 0:
        return None
    A, B = _union(I, eps), _union(K, eps)
    best = None
    i = j = 0
    while i < len(A) and j < len(B):
        lo = max(A[i][0], B[j][0])
        hi = min(A[i][1], B[j][1])
        if lo <= hi + eps:
            t = min(max(target, lo), max(lo, hi))
            if best is None or abs(t - target) < abs(best - target):
                best = t
        if A[i][1] < B[j][1]:
            i += 1
        else:
            j += 1
    return best


def _plane_line(n1, o1, n2, o2):
    D = np.cross(n1, n2)
    D /= np.linalg.norm(D)
    A = np.vstack([n1, n2, D])
    x0 = np.linalg.solve(A, np.array([o1, o2, 0.0]))
    return x0, D


def _coplanar_witness(P: Piece, Q: Piece):
    e1 = P.e1 / np.linalg.norm(P.e1)
    e2 = P.e2 - (P.e2 @ e1) * e1
    e2 /= np.linalg.norm(e2)
    o = P.origin

    def to2d(tris):
        rel = tris - o
        return np.stack([rel @ e1, rel @ e2], axis=-1)

    A = shapely.union_all([Polygon(t) for t in to2d(P.triangles)])
    B = shapely.union_all([Polygon(t) for t in to2d(Q.triangles)])
    if not A.intersects(B):
        return None
    _, pt = nearest_points(ShapelyPoint(0.0, 0.0), A.intersection(B))
    return o + pt.x * e1 + pt.y * e2


def _piece_witness(P: Piece, Q: Piece, eps: float):
    if len(P.triangles) == 0 or len(Q.triangles) == 0:
        return None
    nP, nQ = P.normal, Q.normal
    oP, oQ = float(nP @ P.origin), float(nQ @ Q.origin)
    if np.linalg.norm(np.cross(nP, nQ)) <= 1e-12:
        if abs(oP - float(nQ @ nP) * oQ) > eps:
            return None
        return _coplanar_witness(P, Q)
    x0, D = _plane_line(nP, oP, nQ, oQ)
    # broad phase: the triangles tile each convex polygon, so the polygons'
    # chords on the common line bound every triangle interval
    if _closest_shared(
        _polygon_chord(P.corners, nQ, oQ, D, eps), _polygon_chord(Q.corners, nP, oP, D, eps), 0.0, eps
    ) is None:
        return None
    I = _line_intervals(_near_triangles(P, nQ, oQ, eps), nQ, oQ, D, eps)
    K = _line_intervals(_near_triangles(Q, nP, oP, eps), nP, oP, D, eps)
    t = _closest_shared(I, K, float((P.origin - x0) @ D), eps)
    if t is None:
        return None
    return x0 + (t - x0 @ D) * D


@dataclass(frozen=True, eq=False)
class OracleResult:
    intersecting: bool
    witness: Optional[Point] = None
    pieces: Optional[tuple] = None
    extent: float = 0.0

    @property
    def verdict(self) -> str:
        return "intersecting" if self.intersecting else "no_intersection_found"


def oracle_disjoint(
    cp1: CrookedPlane, cp2: CrookedPlane, extent: float = 10.0, n: int = 64, eps: float = 1e-9
) -> OracleResult:
    """Search the two clipped meshes for a common point.

    ``no_intersection_found`` only covers the box of half-width ``extent``
    around each vertex.  A witness is kept only if it lies on both crooked
    planes within ``10 * eps`` (relative to its distance from the vertices);
    the surviving witness nearest to the first vertex is returned (ties
    broken lexicographically).
    """
    if not eps > 0:
        raise InvalidParams("eps must be positive")
    A = crooked_pieces(cp1, extent, n)
    B = crooked_pieces(cp2, extent, n)
    found = []
    for P in A:
        for Q in B:
            w = _piece_witness(P, Q, eps)
            if w is None:
                continue
            q = Point(w)
            scale = max(1.0, float(np.abs(w - cp1.vertex.coords).max()), float(np.abs(w - cp2.vertex.coords).max()))
            if contains_point(cp1, q, 10 * eps * scale) and contains_point(cp2, q, 10 * eps * scale):
                dist = round(float(np.linalg.norm(w - cp1.vertex.coords)), 9)
                found.append((dist, tuple(w), (P.tag, Q.tag)))
            else:
                log.debug("discarded unvalidated witness %s for pieces %s/%s", w, P.tag, Q.tag)
    if not found:
        return OracleResult(False, extent=extent)
    _, w, tags = min(found)
    return OracleResult(True, Point(w), tags, extent)


def oracle_disjoint_adaptive(cp1, cp2, extent=20.0, n=128, eps=1e-9, max_extent=80.0):
    """Oracle with extent doubling until an intersection appears or
    ``max_extent`` is exceeded."""
    e = extent
    while True:
        res = oracle_disjoint(cp1, cp2, e, n, eps)
        if res.intersecting or e * 2 > max_extent:
            return res
        log.info("no intersection at extent %g, doubling", e)
        e *= 2
