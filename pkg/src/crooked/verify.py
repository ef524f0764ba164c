"""Verification of candidate crooked foliations.

A candidate is a vertex curve ``p_t`` and a director curve ``u_t``.  It is
checked two ways: by the infinitesimal criterion (the tangent ``pdot_t`` lies
in the stem quadrant of ``u_t``) at every grid point, and by testing every
pair of leaves on the grid for disjointness.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import CrossingDirectors, DegeneratePair, InvalidParams, ZeroDerivative
from .flows import (
    HyperbolicFlow,
    OrbitParams,
    ParabolicFlow,
    hyp_director,
    hyp_orbit,
    hyp_velocity,
    par_director,
    par_orbit,
    par_velocity,
)
from .minkowski import Point, lorentz_dot, null_frame, vec
from .planes import (
    CrookedPlane,
    _same_direction,
    cone_disjoint,
    consistently_oriented,
    dg_disjoint,
    pair_class,
)

FAMILIES = ("ultraparallel", "asymptotic")
TOL_CLOSED = 1e-9
TOL_SAMPLED = 1e-6
DEFAULT_INTERVAL = (-2.0, 2.0)
DEFAULT_SAMPLES = 33
FD_STEP = 1e-5
WORKERS_ENV = "CROOKED_WORKERS"


@dataclass(frozen=True, eq=False)
class FoliationSpec:
    """Vertex and director curves of a candidate foliation.

    Exactly one source is set: a hyperbolic flow with orbit parameters, a
    parabolic flow, a pair of callables, or sampled arrays.  ``scale`` and
    ``offset`` reparametrize, ``t -> scale * t + offset``.
    """

    family: str
    flow: object = None
    params: Optional[OrbitParams] = None
    vertex_fn: Optional[Callable] = None
    director_fn: Optional[Callable] = None
    ts: Optional[np.ndarray] = None
    points: Optional[np.ndarray] = None
    directors: Optional[np.ndarray] = None
    breakpoints: tuple = ()
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParams(f"unknown family {self.family!r}")
        if not self.scale > 0:
            raise InvalidParams("reparametrization must be orientation preserving")
        if self.kind == "sampled":
            ts = np.asarray(self.ts, dtype=float)
            if len(ts) < 2 or np.any(np.diff(ts) <= 0):
                raise InvalidParams("sample parameters must be strictly increasing")
            object.__setattr__(self, "ts", ts)
            object.__setattr__(self, "points", np.asarray(self.points, dtype=float).reshape(len(ts), 3))
            object.__setattr__(self, "directors", np.asarray(self.directors, dtype=float).reshape(len(ts), 3))
        elif self.kind is None:
            raise InvalidParams("spec needs a flow, a pair of curves, or samples")

    # -- constructors --

    @classmethod
    def hyperbolic(cls, flow: HyperbolicFlow, params: OrbitParams, family="ultraparallel"):
        return cls(family, flow=flow, params=params)

    @classmethod
    def parabolic(cls, flow: ParabolicFlow):
        return cls("asymptotic", flow=flow)

    @classmethod
    def curves(cls, vertex, director, family="ultraparallel", breakpoints=()):
        return cls(family, vertex_fn=vertex, director_fn=director, breakpoints=tuple(breakpoints))

    @classmethod
    def sampled(cls, ts, points, directors, family="ultraparallel"):
        return cls(family, ts=ts, points=points, directors=directors)

    @property
    def kind(self) -> Optional[str]:
        if isinstance(self.flow, HyperbolicFlow):
            return "hyperbolic"
        if isinstance(self.flow, ParabolicFlow):
            return "parabolic"
        if self.vertex_fn is not None:
            return "curves"
        if self.ts is not None:
            return "sampled"
        return None

    @property
    def closed_form(self) -> bool:
        return self.kind in ("hyperbolic", "parabolic")

    def reparametrized(self, a: float, b: float) -> "FoliationSpec":
        """The same leaves with parameter ``t -> a t + b``, ``a > 0``."""
        if self.kind == "sampled":
            return replace(self, ts=(self.ts - b) / a)
        return replace(self, scale=self.scale * a, offset=self.scale * b + self.offset)

    # -- evaluation --

    def _s(self, t):
        return self.scale * t + self.offset

    def vertex(self, t: float) -> Point:
        s = self._s(t)
        k = self.kind
        if k == "hyperbolic":
            return hyp_orbit(self.flow, self.params, s)
        if k == "parabolic":
            return par_orbit(self.flow, s)
        if k == "curves":
            p = self.vertex_fn(s)
            return p if isinstance(p, Point) else Point(p)
        return Point([np.interp(t, self.ts, self.points[:, i]) for i in range(3)])

    def director(self, t: float) -> np.ndarray:
        s = self._s(t)
        k = self.kind
        if k == "hyperbolic":
            return hyp_director(self.flow, s, self.family)
        if k == "parabolic":
            return par_director(s)
        if k == "curves":
            return vec(self.director_fn(s))
        i = int(np.argmin(np.abs(self.ts - t)))
        return self.directors[i]

    def velocity(self, t: float) -> Optional[np.ndarray]:
        """Closed-form tangent, or ``None`` when it must be estimated."""
        s = self._s(t)
        if self.kind == "hyperbolic":
            return self.scale * hyp_velocity(self.flow, self.params, s)
        if self.kind == "parabolic":
            return self.scale * par_velocity(self.flow, s)
        return None

    def default_grid(self, interval=DEFAULT_INTERVAL, samples=DEFAULT_SAMPLES) -> np.ndarray:
        if self.kind == "sampled":
            return self.ts.copy()
        return np.linspace(interval[0], interval[1], samples)

    def shared_null(self) -> Optional[str]:
        """Which null vector (``minus``/``plus``) all directors share, for the
        asymptotic family."""
        if self.family != "asymptotic":
            return None
        if self.kind == "hyperbolic":
            return "plus"
        if self.kind == "parabolic":
            return "minus"
        if self.kind == "sampled":
            t0, t1 = self.ts[0], self.ts[-1]
        else:
            t0, t1 = -1.0, 1.0
        f0, f1 = null_frame(self.director(t0)), null_frame(self.director(t1))
        if _same_direction(f0.u_minus, f1.u_minus):
            return "minus"
        if _same_direction(f0.u_plus, f1.u_plus):
            return "plus"
        return None


def refine(grid, levels: int = 1) -> np.ndarray:
    """Dyadic subdivision, ``levels`` times."""
    g = np.asarray(grid, dtype=float)
    for _ in range(levels):
        mid = (g[:-1] + g[1:]) / 2
        out = np.empty(len(g) + len(mid))
        out[0::2], out[1::2] = g, mid
        g = out
    return g


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    """Order-preserving map, threaded when ``CROOKED_WORKERS > 1``."""
    n = _workers()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as ex:
        return list(ex.map(fn, items))


# -- normalization ---------------------------------------------------------


def check_normalized(spec: FoliationSpec, grid=None) -> bool:
    """``-u_t, u_s`` consistently oriented for the first and last grid values
    (one pair suffices), after checking no two grid directors cross."""
    grid = spec.default_grid() if grid is None else np.asarray(grid, dtype=float)
    if len(grid) < 2:
        raise InvalidParams("need at least two parameter values")
    us = [spec.director(t) for t in grid]
    for (i, a), (j, b) in itertools.combinations(enumerate(us), 2):
        try:
            cls = pair_class(a, b)
        except DegeneratePair:
            raise CrossingDirectors(
                f"directors at t={grid[i]:g} and t={grid[j]:g} are parallel", witness=(grid[i], grid[j])
            ) from None
        if cls == "crossing":
            raise CrossingDirectors(
                f"directors at t={grid[i]:g} and t={grid[j]:g} cross", witness=(grid[i], grid[j])
            )
    return consistently_oriented(-us[0], us[-1])


# -- infinitesimal criterion -----------------------------------------------


@dataclass(frozen=True)
class InfinitesimalRecord:
    t: float
    dot_u: float
    dot_minus: float
    dot_plus: float
    passed: bool
    note: str = ""


def _fd_velocity(spec: FoliationSpec, t: float, side: int = 0) -> np.ndarray:
    if spec.kind == "sampled":
        # second-order differences on the sample grid itself, endpoints included
        P = np.gradient(spec.points, spec.ts, axis=0, edge_order=2)
        i = int(np.argmin(np.abs(spec.ts - t)))
        return P[i]
    h = FD_STEP * max(1.0, abs(t))
    if side == 0:
        return (spec.vertex(t + h) - spec.vertex(t - h)) / (2 * h)
    if side > 0:
        return (spec.vertex(t + h) - spec.vertex(t)) / h
    return (spec.vertex(t) - spec.vertex(t - h)) / h


def _judge(pdot, u, shared, tol):
    f = null_frame(u)
    npd = float(np.linalg.norm(pdot))
    du = lorentz_dot(pdot, u)
    dm = lorentz_dot(pdot, f.u_minus)
    dp = lorentz_dot(pdot, f.u_plus)
    # compare scale-free versions of the three dot products
    su = du / (npd * np.linalg.norm(u))
    sm = dm / (npd * np.linalg.norm(f.u_minus))
    sp = dp / (npd * np.linalg.norm(f.u_plus))
    ok = bool(abs(su) <= tol and sm >= -tol and sp <= tol)
    note = ""
    # along the shared null direction the leaves cannot touch
    if shared == "plus" and not sp <= -tol:
        ok, note = False, "tangent on the shared -u+ edge"
    if shared == "minus" and not sm >= tol:
        ok, note = False, "tangent on the shared u- edge"
    return du, dm, dp, ok, note


def infinitesimal_check(spec: FoliationSpec, t: float, tol: Optional[float] = None) -> InfinitesimalRecord:
    """Whether ``pdot_t`` lies in the stem quadrant of ``u_t``.

    Raises :class:`ZeroDerivative` when the vertex curve is not regular at
    ``t``.  At a declared breakpoint both one-sided derivatives must pass.
    """
    if tol is None:
        tol = TOL_CLOSED if spec.closed_form else TOL_SAMPLED
    u = spec.director(t)
    shared = spec.shared_null()
    pdot = spec.velocity(t)
    if pdot is not None:
        tangents = [pdot]
    elif spec.kind == "curves" and any(abs(t - b) <= 1e-12 * max(1.0, abs(b)) for b in spec.breakpoints):
        tangents = [_fd_velocity(spec, t, -1), _fd_velocity(spec, t, +1)]
    else:
        tangents = [_fd_velocity(spec, t)]
    rec = None
    for v in tangents:
        scale = max(1.0, float(np.linalg.norm(spec.vertex(t).coords)))
        if np.linalg.norm(v) <= tol * scale:
            raise ZeroDerivative(f"vertex curve has zero tangent at t={t:g}")
        du, dm, dp, ok, note = _judge(v, u, shared, tol)
        if rec is None or (rec.passed and not ok):
            rec = InfinitesimalRecord(float(t), du, dm, dp, ok, note)
    return rec


# -- pairwise disjointness -------------------------------------------------


@dataclass(frozen=True)
class PairRecord:
    s: float
    t: float
    cone: bool
    dg: Optional[bool]  # None when the directors are not ultraparallel

    @property
    def passed(self) -> bool:
        return self.cone and self.dg is not False


def _pair_record(args):
    t, s, ct, cs = args
    cone = cone_disjoint(ct, cs)
    dg = dg_disjoint(ct, cs) if pair_class(ct.director, cs.director) == "ultraparallel" else None
    return PairRecord(float(s), float(t), bool(cone), None if dg is None else bool(dg))


def pairwise_check(spec: FoliationSpec, grid) -> list:
    """Disjointness of every pair of leaves ``s > t`` on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    if len(grid) > 1 and np.any(np.diff(grid) <= 0):
        raise InvalidParams("grid must be strictly increasing")
    leaves = [CrookedPlane(spec.vertex(t), spec.director(t)) for t in grid]
    jobs = [
        (grid[i], grid[j], leaves[i], leaves[j]) for i, j in itertools.combinations(range(len(grid)), 2)
    ]
    return _pmap(_pair_record, jobs)


# -- full report -----------------------------------------------------------


@dataclass
class VerificationReport:
    normalized_ok: bool
    infinitesimal: list = field(default_factory=list)
    pairwise: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.normalized_ok
            and all(r.passed for r in self.infinitesimal)
            and all(r.passed for r in self.pairwise)
        )

    def infinitesimal_failures(self):
        return [r for r in self.infinitesimal if not r.passed]

    def pairwise_failures(self):
        return [r for r in self.pairwise if not r.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "normalized_ok": self.normalized_ok,
            "infinitesimal": [asdict(r) for r in self.infinitesimal],
            "pairwise": [{**asdict(r), "passed": r.passed} for r in self.pairwise],
            "witnesses": self.witnesses,
        }


def verify(
    spec: FoliationSpec,
    grid=None,
    tol: Optional[float] = None,
    interval=DEFAULT_INTERVAL,
    samples: int = DEFAULT_SAMPLES,
    levels: int = 0,
) -> VerificationReport:
    """Normalization, infinitesimal criterion at every grid point, and
    pairwise disjointness over the grid refined ``levels`` times."""
    grid = spec.default_grid(interval, samples) if grid is None else np.asarray(grid, dtype=float)
    grid = refine(grid, levels)
    normalized = check_normalized(spec, grid)
    inf = _pmap(lambda t: infinitesimal_check(spec, t, tol), list(grid))
    pairs = pairwise_check(spec, grid)
    witnesses = [{"t": r.t, "kind": "infinitesimal"} for r in inf if not r.passed]
    witnesses += [{"s": r.s, "t": r.t, "kind": "pairwise"} for r in pairs if not r.passed]
    if not normalized:
        witnesses.insert(0, {"s": float(grid[-1]), "t": float(grid[0]), "kind": "normalization"})
    return VerificationReport(normalized, inf, pairs, witnesses)
