"""Closed-form one-parameter hyperbolic and parabolic isometry groups.

Every hyperbolic formula is written in the normalized model, where the
linear part is the boost mixing x1 with x3, the fixed eigenvector is
``x0 = (0, 1, 0)`` and the translational part of ``gamma_t`` is
``(0, alpha t, 0)``.  A flow carries a conjugating isometry that places the
model in the working frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import AxisCase, BadRegionParams, NotDisjoint, NotUltraparallel
from .minkowski import (
    EPS_NULL,
    J,
    Isometry,
    Point,
    causal_class,
    compose,
    lorentz_cross,
    lorentz_dot,
    unit,
    vec,
)
from .planes import CrookedPlane, dg_disjoint, normalize_consistent, pair_class

X0 = np.array([0.0, 1.0, 0.0])
X_PLUS = np.array([1.0, 0.0, 1.0])
X_MINUS = np.array([-1.0, 0.0, 1.0])

REGIONS = ("axis", "T", "W+", "W-", "S")
CALIBRATION_TOL = 1e-8


def _boost(lt):
    c, s = np.cosh(lt), np.sinh(lt)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]])


@dataclass(frozen=True, eq=False)
class HyperbolicFlow:
    l: float
    alpha: float
    conjugator: Isometry = field(default_factory=Isometry.identity)

    def __post_init__(self):
        if not self.l > 0:
            raise ValueError(f"l must be positive, got {self.l}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def mu(self) -> float:
        """Generalized Margulis invariant ``alpha / l``."""
        return self.alpha / self.l

    def to_model(self, p: Point) -> np.ndarray:
        C = self.conjugator
        return J @ C.linear.T @ J @ (p.coords - C.translation)

    def from_model(self, x) -> Point:
        C = self.conjugator
        return Point(C.linear @ x + C.translation)

    def isometry(self, t: float) -> Isometry:
        """``gamma_t`` in the working frame."""
        model = Isometry(_boost(self.l * t), self.alpha * t * X0)
        C = self.conjugator
        return compose(C, compose(model, C.inverse()))

    @property
    def axis_direction(self) -> np.ndarray:
        return self.conjugator.linear @ X0


def hyp_linear(flow: HyperbolicFlow, t: float) -> np.ndarray:
    A = flow.conjugator.linear
    return A @ _boost(flow.l * t) @ J @ A.T @ J


def margulis_invariant(flow: HyperbolicFlow, t: float) -> float:
    """Margulis invariant ``alpha |t|`` of ``gamma_t``."""
    return flow.alpha * abs(t)


def generalized_margulis(flow: HyperbolicFlow, t: float) -> float:
    """``alpha_t / l_t`` for ``gamma_t``; constant in ``t != 0``."""
    if t == 0:
        raise ValueError("gamma_0 is the identity")
    return margulis_invariant(flow, t) / (flow.l * abs(t))


@dataclass(frozen=True)
class OrbitParams:
    """Orbit of the hyperbolic flow in the normalized model.

    ``shift`` moves the orbit along the invariant axis; the standard
    normalization puts the origin on the axis, where it is zero.
    """

    region: str
    k: float = 0.0
    t0: float = 0.0
    shift: float = 0.0

    def __post_init__(self):
        if self.region not in REGIONS:
            raise BadRegionParams(f"unknown region {self.region!r}")
        if self.region != "axis" and self.k == 0:
            raise BadRegionParams(f"region {self.region} needs k != 0")


def _model_orbit(flow, params: OrbitParams, t):
    l, a, k, t0 = flow.l, flow.alpha, params.k, params.t0
    y = a * t + params.shift
    if params.region == "axis":
        return np.array([0.0, y, 0.0])
    if params.region == "T":
        return np.array([k * np.sinh(l * (t + t0)), y, k * np.cosh(l * (t + t0))])
    if params.region == "S":
        return np.array([k * np.cosh(l * (t + t0)), y, k * np.sinh(l * (t + t0))])
    e = k * np.exp(l * (t + t0)) if params.region == "W+" else k * np.exp(-l * (t + t0))
    sign = 1.0 if params.region == "W+" else -1.0
    return np.array([e, y, sign * e])


def _model_velocity(flow, params: OrbitParams, t):
    l, a, k, t0 = flow.l, flow.alpha, params.k, params.t0
    if params.region == "axis":
        return np.array([0.0, a, 0.0])
    if params.region == "T":
        return np.array([k * l * np.cosh(l * (t + t0)), a, k * l * np.sinh(l * (t + t0))])
    if params.region == "S":
        return np.array([k * l * np.sinh(l * (t + t0)), a, k * l * np.cosh(l * (t + t0))])
    if params.region == "W+":
        e = k * l * np.exp(l * (t + t0))
        return np.array([e, a, e])
    e = k * l * np.exp(-l * (t + t0))
    return np.array([-e, a, e])


def hyp_orbit(flow: HyperbolicFlow, params: OrbitParams, t: float) -> Point:
    return flow.from_model(_model_orbit(flow, params, t))


def hyp_velocity(flow: HyperbolicFlow, params: OrbitParams, t: float) -> np.ndarray:
    """Closed-form derivative of :func:`hyp_orbit` in ``t``."""
    return flow.conjugator.linear @ _model_velocity(flow, params, t)


def hyp_director(flow: HyperbolicFlow, t: float, family: str = "ultraparallel") -> np.ndarray:
    lt = flow.l * t
    if family == "ultraparallel":
        u = np.array([np.cosh(lt), 0.0, np.sinh(lt)])
    elif family == "asymptotic":
        e = np.exp(lt)
        u = np.array([e, 1.0, e])
    else:
        raise ValueError(f"unknown director family {family!r}")
    return flow.conjugator.linear @ u


@dataclass(frozen=True)
class Region:
    tag: str
    k: Optional[float] = None

    def __str__(self):
        if self.tag == "S":
            return f"S({self.k:.17g})"
        return {"axis": "Axis", "W+": "Wplus", "W-": "Wminus"}.get(self.tag, self.tag)


def orbit_params(flow: HyperbolicFlow, p: Point, eps: float = EPS_NULL) -> OrbitParams:
    """Orbit parameters ``(region, k, t0, shift)`` with ``hyp_orbit(.., 0) == p``.

    ``p = q + x`` with ``q`` on the axis and ``x`` orthogonal to it; the
    region is the causal type of ``x``.
    """
    m = flow.to_model(p)
    x1, x3 = m[0], m[2]
    shift = m[1]
    scale = max(1.0, float(np.linalg.norm(m)))
    if np.hypot(x1, x3) <= 1e-12 * scale:
        return OrbitParams("axis", shift=shift)
    kind = causal_class([x1, 0.0, x3], eps).kind
    l = flow.l
    if kind == "null":
        if x1 * x3 > 0:
            return OrbitParams("W+", k=x1, shift=shift)
        return OrbitParams("W-", k=x1, shift=shift)
    if kind == "timelike":
        k = np.copysign(np.sqrt(x3 * x3 - x1 * x1), x3)
        return OrbitParams("T", k=k, t0=np.arctanh(x1 / x3) / l, shift=shift)
    k = np.copysign(np.sqrt(x1 * x1 - x3 * x3), x1)
    return OrbitParams("S", k=k, t0=np.arctanh(x3 / x1) / l, shift=shift)


def region_classify(flow: HyperbolicFlow, p: Point) -> Region:
    params = orbit_params(flow, p)
    if params.region == "S":
        return Region("S", abs(params.k))
    return Region(params.region)


def hyp_admits_ultraparallel(flow: HyperbolicFlow, p: Point, tol: float = 1e-9) -> bool:
    """Whether ``C(gamma_t(p), g_t(u_0))`` with the ultraparallel directors is
    a crooked foliation: ``p`` on the axis, or on a calibrated S-orbit with
    ``|k| <= mu``."""
    params = orbit_params(flow, p)
    if params.region == "axis":
        return True
    if params.region != "S":
        return False
    return abs(params.t0) <= tol and abs(params.k) <= flow.mu * (1 + tol)


def hyp_admits_asymptotic(
    flow: HyperbolicFlow, p: Point, tol: float = 1e-9
) -> Optional[OrbitParams]:
    """Orbit through ``p`` admitting a foliation with the asymptotic
    directors ``g_t(1, 1, 1)``, or ``None``.

    ``pdot . u_t`` is constant along each orbit and vanishes exactly for
    ``k = mu / 2`` in W-, ``k = -mu e^{l t0}`` in T and ``k = mu e^{l t0}``
    in S.  On the S orbit ``pdot . u_t- = alpha sech(lt) (1 - e^{l t0}
    cosh(l t0))``, which is negative for ``t0 > 0``, so only ``t0 <= 0``
    survives there.
    """
    params = orbit_params(flow, p)
    if params.region in ("axis", "W+"):
        return None
    l, mu, k, t0 = flow.l, flow.mu, params.k, params.t0
    expected = {
        "W-": mu / 2,
        "T": -mu * np.exp(l * t0),
        "S": mu * np.exp(l * t0),
    }[params.region]
    if abs(k - expected) > tol * max(1.0, abs(expected)):
        return None
    if params.region == "S" and t0 > tol:
        return None
    return params


# -- parabolic -------------------------------------------------------------

#: columns are the basis vectors (0,1,1), (1,0,0), (0,2,0)
BASIS_B = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 2.0], [1.0, 0.0, 0.0]])
BASIS_B_INV = np.linalg.inv(BASIS_B)
GRAM_B = BASIS_B.T @ J @ BASIS_B


@dataclass(frozen=True)
class ParabolicFlow:
    """Parabolic one-parameter group; ``(a, b, c)`` is the translational part
    of ``gamma_1`` in the basis ``B``."""

    a: float
    b: float
    c: float

    @property
    def abc(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)

    def isometry(self, t: float) -> Isometry:
        return Isometry(
            BASIS_B @ par_linear(t) @ BASIS_B_INV,
            BASIS_B @ _cumulative(t) @ self.abc,
        )


def par_linear(t: float) -> np.ndarray:
    """``[g_t]`` in the basis ``B``."""
    return np.array([[1.0, t, -t * t], [0.0, 1.0, -2.0 * t], [0.0, 0.0, 1.0]])


def par_linear_standard(t: float) -> np.ndarray:
    return BASIS_B @ par_linear(t) @ BASIS_B_INV


def par_to_standard(v_b) -> np.ndarray:
    return BASIS_B @ vec(v_b)


def gram_dot(x_b, y_b) -> float:
    return float(vec(x_b) @ GRAM_B @ vec(y_b))


def _cumulative(t):
    # sum g_0 + ... + g_{t-1} in B, extended from integers to real t
    return np.array(
        [
            [t, (t - 1) * t / 2, -(t - 1) * t * (2 * t - 1) / 6],
            [0.0, t, -(t - 1) * t],
            [0.0, 0.0, t],
        ]
    )


def _cumulative_dot(t):
    return np.array(
        [
            [1.0, t - 0.5, -t * t + t - 1.0 / 6.0],
            [0.0, 1.0, -2.0 * t + 1.0],
            [0.0, 0.0, 1.0],
        ]
    )


def par_orbit(flow: ParabolicFlow, t: float) -> Point:
    """Orbit of the origin, ``gamma_t(o)``."""
    return Point(BASIS_B @ _cumulative(t) @ flow.abc)


def par_velocity(flow: ParabolicFlow, t: float) -> np.ndarray:
    return BASIS_B @ _cumulative_dot(t) @ flow.abc


def par_director(t: float) -> np.ndarray:
    """Director ``(t, 1, 0)`` in ``B``, i.e. ``(1, t, t)`` in standard coordinates."""
    return par_to_standard([t, 1.0, 0.0])


def par_director_frame_b(t: float):
    """Null vectors ``(u-, u+)`` of :func:`par_director` written in ``B``."""
    return np.array([1.0, 0.0, 0.0]), np.array([1.0, 2 * t / (t * t + 1), -1 / (t * t + 1)])


def par_admits(flow: ParabolicFlow, eps: float = 1e-9) -> bool:
    """``b = -c``, ``c > 0`` and ``a >= -4c/3``."""
    a, b, c = flow.a, flow.b, flow.c
    scale = max(1.0, abs(a), abs(b), abs(c))
    return abs(b + c) <= eps * scale and c > eps * scale and a + 4 * c / 3 >= -eps * scale


# -- calibration -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Calibration:
    flow: HyperbolicFlow
    params: Optional[OrbitParams]
    ln_ratio: Optional[float]
    calibrated: bool
    region: str

    @property
    def t0(self) -> Optional[float]:
        return None if self.params is None else self.params.t0


def calibrate(p0: Point, u0, p1: Point, u1) -> Calibration:
    """Place two disjoint crooked planes on one orbit of a hyperbolic flow.

    The flow fixes ``x`` (unit, orthogonal to both directors, with
    ``(p1 - p0) . x > 0``) and carries ``u0`` to ``+-u1`` at time 1, which
    fixes ``l``.  The displacement splits as ``alpha x0 + k1 x+ + k2 x-`` and
    the phase of the orbit is ``t0 = (ln(k1/k2) - l) / (2l)``; the pair is
    calibrated when ``t0 = 0``.
    """
    u0, u1 = vec(u0), vec(u1)
    if pair_class(u0, u1) != "ultraparallel":
        raise NotUltraparallel("calibration needs ultraparallel directors")
    if not dg_disjoint(CrookedPlane(p0, u0), CrookedPlane(p1, u1)):
        raise NotDisjoint("the two crooked planes intersect")
    v0, v1 = normalize_consistent(u0, u1)
    a0, a1 = -v0, v1  # (-a0, a1) consistently oriented: a normalized path
    x = unit(lorentz_cross(v0, v1))
    d = p1 - p0
    ch = lorentz_dot(a0, a1)
    l = float(np.arccosh(ch))
    w = (a1 - ch * a0) / np.sinh(l)
    C = np.column_stack([a0, x, w])
    dm = J @ C.T @ J @ d
    alpha = float(dm[1])
    k1 = (dm[0] + dm[2]) / 2
    k2 = (dm[2] - dm[0]) / 2
    nd = float(np.linalg.norm(d))
    if abs(k1) <= 1e-12 * nd and abs(k2) <= 1e-12 * nd:
        flow = HyperbolicFlow(l, alpha, Isometry(C, p0.coords))
        raise AxisCase("displacement is parallel to the flow axis", spec=(flow, OrbitParams("axis")))
    if k1 * k2 <= 0:
        region = "T" if k1 * k2 < 0 else ("W+" if k2 == 0 else "W-")
        flow = HyperbolicFlow(l, alpha, Isometry(C, p0.coords))
        return Calibration(flow, None, None, False, region)
    ln_ratio = float(np.log(k1 / k2))
    t0 = (ln_ratio - l) / (2 * l)
    k = np.copysign(2 * np.sqrt(k1 * k2) / (np.exp(l / 2) - np.exp(-l / 2)), k1)
    params = OrbitParams("S", k=float(k), t0=float(t0))
    model_p0 = np.array([k * np.cosh(l * t0), 0.0, k * np.sinh(l * t0)])
    flow = HyperbolicFlow(l, alpha, Isometry(C, p0.coords - C @ model_p0))
    calibrated = abs(ln_ratio - l) <= CALIBRATION_TOL * max(1.0, l)
    return Calibration(flow, params, ln_ratio, calibrated, "S")
