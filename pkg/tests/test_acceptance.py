"""Acceptance criteria 1-9.  Each test prints one ``PASS``/``FAIL`` line.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script,
``python3 tests/test_acceptance.py``.
"""

import sys
import time

import numpy as np
import pytest

from crooked.errors import NotDisjoint
from crooked.flows import (
    HyperbolicFlow,
    OrbitParams,
    ParabolicFlow,
    calibrate,
    hyp_admits_asymptotic,
    hyp_director,
    hyp_orbit,
    par_admits,
)
from crooked.minkowski import Isometry, det3, lorentz_dot, null_frame, random_lorentz
from crooked.oracle import oracle_disjoint, oracle_disjoint_adaptive
from crooked.planes import (
    CrookedPlane,
    cone_disjoint,
    cone_margin,
    contains_point,
    dg_disjoint,
    dg_margin,
    pair_class,
)
from crooked.minkowski import Point
from crooked.repro import (
    _asymptotic_cases,
    _dg_sides,
    parabolic_identities,
    repro_table1,
)
from crooked.verify import FoliationSpec, infinitesimal_check, verify

SEED = 20241018
N_FRAMES = 10_000
N_PAIRS = 10_000
N_ORACLE = 10_000


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    capture = getattr(report, "capsys", None)
    if capture is not None:
        with capture.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


@pytest.fixture(autouse=True)
def _show(capsys):
    report.capsys = capsys
    yield
    report.capsys = None


def spacelike_directors(rng, n):
    th = rng.uniform(0, 2 * np.pi, n)
    z = rng.uniform(-0.95, 0.95, n)
    s = rng.uniform(0.2, 5.0, n)
    return np.column_stack([np.cos(th), np.sin(th), z]) * s[:, None]


def ultraparallel_pairs(rng, n, box=5.0):
    out = []
    while len(out) < n:
        u1, u2 = spacelike_directors(rng, 2)
        if pair_class(u1, u2) != "ultraparallel":
            continue
        p1, p2 = rng.uniform(-box, box, (2, 3))
        out.append((CrookedPlane(Point(p1), u1), CrookedPlane(Point(p2), u2)))
    return out


# -- 1 ---------------------------------------------------------------------


def criterion_1():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    bad = 0
    for u in spacelike_directors(rng, N_FRAMES):
        f = null_frame(u)
        nu = np.linalg.norm(u)
        errs = [
            abs(lorentz_dot(f.u_minus, f.u_minus)),
            abs(lorentz_dot(f.u_plus, f.u_plus)),
            abs(lorentz_dot(f.u_minus, u)) / nu,
            abs(lorentz_dot(f.u_plus, u)) / nu,
            abs(f.u_minus[2] - 1.0),
            abs(f.u_plus[2] - 1.0),
        ]
        worst = max(worst, *errs)
        bad += not (det3(u, f.u_minus, f.u_plus) > 0 and lorentz_dot(f.u_minus, f.u_plus) < 0)
    elapsed = time.perf_counter() - start
    f = null_frame((0, 1, 0))
    exact = np.array_equal(f.u_minus, [-1, 0, 1]) and np.array_equal(f.u_plus, [1, 0, 1])
    tanh_err = 0.0
    for t in np.linspace(-3, 3, 25):
        g = null_frame((np.cosh(t), 0, np.sinh(t)))
        tanh_err = max(
            tanh_err,
            np.abs(g.u_minus - (np.tanh(t), 1 / np.cosh(t), 1)).max(),
            np.abs(g.u_plus - (np.tanh(t), -1 / np.cosh(t), 1)).max(),
        )
    ok = worst <= 1e-10 and bad == 0 and exact and tanh_err <= 1e-14 and elapsed < 5.0
    return ok, (
        f"{N_FRAMES} frames, max invariant error {worst:.1e}, {bad} sign failures, "
        f"(0,1,0) frame exact={exact}, tanh/sech frame error {tanh_err:.1e}, {elapsed:.2f}s"
    )


# -- 2 ---------------------------------------------------------------------


def criterion_2():
    rng = np.random.default_rng(SEED + 2)
    pairs = ultraparallel_pairs(rng, N_PAIRS)
    start = time.perf_counter()
    disagree = band = disjoint = 0
    for c1, c2 in pairs:
        m, c = dg_margin(c1, c2), cone_margin(c1, c2)
        if abs(m) <= 1e-7 or abs(c) <= 1e-7:
            band += 1
            continue
        d = dg_disjoint(c1, c2)
        disjoint += d
        disagree += d != cone_disjoint(c1, c2)
    elapsed = time.perf_counter() - start
    ok = disagree == 0 and elapsed < 10.0
    return ok, f"{N_PAIRS} pairs, {disjoint} disjoint, {band} in the 1e-7 band, {disagree} disagreements, {elapsed:.2f}s"


# -- 3 ---------------------------------------------------------------------


def criterion_3(n_pairs=N_ORACLE):
    rng = np.random.default_rng(SEED + 3)
    pairs = ultraparallel_pairs(rng, n_pairs)
    start = time.perf_counter()
    unsound = misses = resolved = bad_witness = intersecting = 0
    for c1, c2 in pairs:
        m = dg_margin(c1, c2)
        res = oracle_disjoint(c1, c2, 20.0, 64, 1e-9)
        if res.intersecting:
            intersecting += 1
            w = res.witness
            scale = max(1.0, np.abs(w - c1.vertex).max(), np.abs(w - c2.vertex).max())
            bad_witness += not (contains_point(c1, w, 1e-8 * scale) and contains_point(c2, w, 1e-8 * scale))
            if abs(m) > 1e-6 and dg_disjoint(c1, c2):
                unsound += 1
        elif m < -1e-3:
            # completeness: rerun at n = 128 with extent doubling up to 80
            again = oracle_disjoint_adaptive(c1, c2, 20.0, 128, 1e-9, 80.0)
            if again.intersecting:
                resolved += 1
            else:
                misses += 1
    elapsed = time.perf_counter() - start
    ok = unsound == 0 and misses == 0 and bad_witness == 0 and elapsed < 600
    return ok, (
        f"{n_pairs} pairs, {intersecting} intersecting, {unsound} soundness violations, "
        f"{resolved} completeness misses resolved by refinement/extent doubling, {misses} unresolved, "
        f"{bad_witness} invalid witnesses, {elapsed:.0f}s"
    )


# -- 4 ---------------------------------------------------------------------


def criterion_4():
    rng = np.random.default_rng(SEED + 4)
    worst, rhs_max, all_disjoint = 0.0, 0.0, True
    for _ in range(100):
        alpha = rng.uniform(0.1, 5.0)
        t, s = np.sort(rng.uniform(-3.0, 3.0, 2))
        spec = FoliationSpec.hyperbolic(HyperbolicFlow(1.0, alpha), OrbitParams("axis"))
        ct = CrookedPlane(spec.vertex(t), spec.director(t))
        cs = CrookedPlane(spec.vertex(s), spec.director(s))
        lhs, rhs = _dg_sides(ct, cs)
        expected = alpha * (s - t) * np.sinh(s - t)
        worst = max(worst, abs(lhs - expected) / expected)
        rhs_max = max(rhs_max, rhs)
        all_disjoint &= (
            dg_disjoint(ct, cs)
            and cone_disjoint(ct, cs)
            and oracle_disjoint(ct, cs, 10.0, 64).verdict == "no_intersection_found"
        )
    ok = worst <= 1e-9 and rhs_max == 0.0 and all_disjoint
    return ok, f"100 samples, LHS max rel error {worst:.1e}, RHS max {rhs_max}, all disjoint (dg, cone, oracle)={all_disjoint}"


# -- 5 ---------------------------------------------------------------------


def criterion_5():
    flow = HyperbolicFlow(1.0, 1.0)
    parts, ok = [], True
    for k in (0.25, 0.5, 1.0):
        rep = verify(FoliationSpec.hyperbolic(flow, OrbitParams("S", k=k)))
        ok &= rep.passed
        parts.append(f"k={k}:{'pass' if rep.passed else 'FAIL'}")
    # k = mu: the inequality reduces to x sinh x > 2 (cosh x - 1), x = l(s - t)
    x = np.linspace(1e-3, 5.0, 2001)
    taylor = bool(np.all(x * np.sinh(x) - 2 * (np.cosh(x) - 1) > 0))
    spec = FoliationSpec.hyperbolic(flow, OrbitParams("S", k=1.0))
    gaps = []
    for gap in np.linspace(0.05, 5.0, 40):
        ct = CrookedPlane(spec.vertex(-gap / 2), spec.director(-gap / 2))
        cs = CrookedPlane(spec.vertex(gap / 2), spec.director(gap / 2))
        gaps.append(dg_disjoint(ct, cs))
    ok &= taylor and all(gaps)
    parts.append(f"k=1 Taylor/gaps up to 5: {taylor and all(gaps)}")
    for k in (1.01, 2.0):
        spec = FoliationSpec.hyperbolic(flow, OrbitParams("S", k=k))
        rep = verify(spec)
        bad = rep.pairwise_failures()
        if rep.passed or not bad:
            ok = False
            parts.append(f"k={k}: no witness")
            continue
        r = min(bad, key=lambda r: (r.s - r.t, r.t))
        ct = CrookedPlane(spec.vertex(r.t), spec.director(r.t))
        cs = CrookedPlane(spec.vertex(r.s), spec.director(r.s))
        res = oracle_disjoint(ct, cs, 10.0, 64)
        ok &= res.intersecting
        parts.append(f"k={k}: fails, witness (s,t)=({r.s},{r.t}), oracle {res.verdict}")
    return ok, "; ".join(parts)


# -- 6 ---------------------------------------------------------------------


def _orbit_dot_expected(flow, params, t):
    l, k, t0 = flow.l, params.k, params.t0
    if params.region == "T":
        return k * l * np.cosh(l * t0)
    # W+: k l e^{l(t+t0)} (cosh lt - sinh lt);  W-: k l e^{-l(t+t0)} (-cosh lt - sinh lt)
    if params.region == "W+":
        return k * l * np.exp(l * (t + t0)) * (np.cosh(l * t) - np.sinh(l * t))
    return k * l * np.exp(-l * (t + t0)) * (-np.cosh(l * t) - np.sinh(l * t))


def criterion_6():
    ok = True
    worst_rel, min_abs = 0.0, np.inf
    parts = []
    for l, alpha in ((1.0, 1.0), (0.6, 1.7), (2.0, 0.5)):
        flow = HyperbolicFlow(l, alpha)
        for region in ("T", "W+", "W-"):
            for k, t0 in ((0.5, 0.0), (-1.3, 0.4), (2.0, -0.7)):
                params = OrbitParams(region, k=k, t0=t0)
                spec = FoliationSpec.hyperbolic(flow, params)
                for t in spec.default_grid():
                    r = infinitesimal_check(spec, t)
                    want = _orbit_dot_expected(flow, params, t)
                    ok &= not r.passed
                    worst_rel = max(worst_rel, abs(r.dot_u - want) / abs(want))
                    min_abs = min(min_abs, abs(r.dot_u))
    # the l-less form k l cosh(t0) only agrees with the derivative when l = 1
    flow = HyperbolicFlow(2.0, 1.0)
    r = infinitesimal_check(FoliationSpec.hyperbolic(flow, OrbitParams("T", k=1.0, t0=0.5)), 0.3)
    typo_gap = abs(r.dot_u - 2.0 * np.cosh(0.5))
    parts.append(f"T/W+/W- fail at every sample (27 specs x 33 samples)={ok}")
    parts.append(f"|pdot.u| >= {min_abs:.3g}")
    parts.append(f"max rel error vs k l cosh(l t0), k l e^(+-l(t+t0))(+-cosh - sinh): {worst_rel:.1e}")
    parts.append(f"k l cosh(t0) form off by {typo_gap:.3g} at l=2 (kl cosh(l t0) matches)")
    ok &= worst_rel <= 1e-9 and min_abs > 1e-3 and typo_gap > 1e-3
    return ok, "; ".join(parts)


# -- 7 ---------------------------------------------------------------------


def criterion_7():
    ok = True
    rows = []
    worst = 0.0
    for a in (-2.0, -4.0 / 3.0, 0.0, 1.0):
        flow = ParabolicFlow(a, -1.0, 1.0)
        passed = verify(FoliationSpec.parabolic(flow)).passed
        expected = a >= -4.0 / 3.0
        ok &= passed == expected == par_admits(flow)
        rows.append(f"a={a:.4g}:{'pass' if passed else 'fail'}")
        for t in np.linspace(-2, 2, 9):
            ids = parabolic_identities(flow, t)
            for key, val in ids["closed"].items():
                worst = max(worst, abs(val - ids["finite_difference"][key]))
    ok &= worst <= 1e-6
    return ok, (
        f"grid {' '.join(rows)} (a = -4/3 passes: boundary is non-strict); "
        f"identities b+c, 2c, -2(a+4c/3)/(t^2+1) max FD error {worst:.1e}"
    )


# -- 8 ---------------------------------------------------------------------


def criterion_8():
    flow, cases = _asymptotic_cases()
    ok = True
    parts = []
    for name, params in cases:
        p0 = hyp_orbit(flow, params, 0.0)
        found = hyp_admits_asymptotic(flow, p0)
        passed = verify(FoliationSpec.hyperbolic(flow, params, "asymptotic")).passed
        if name in ("case1-axis", "case2-W+"):
            good = found is None and not passed
            parts.append(f"{name}: none={good}")
        elif name == "case4-S-positive-t0":
            good = found is None and not passed
            parts.append(f"{name}: rejected={good}")
        else:
            unique = found is not None and found.region == params.region and np.isclose(found.k, params.k)
            perturbed = all(
                not infinitesimal_check(
                    FoliationSpec.hyperbolic(flow, OrbitParams(params.region, params.k * f, params.t0), "asymptotic"), t
                ).passed
                for f in (0.95, 1.05)
                for t in np.linspace(-2, 2, 9)
            )
            good = unique and passed and perturbed
            parts.append(f"{name}: verify={passed}, +-5% fails={perturbed}")
        ok &= good
    table = repro_table1()
    cells = {k: v["ok"] for k, v in table["cells"].items()}
    ok &= table["ok"]
    parts.append(f"table1 cells {cells}")
    return ok, "; ".join(parts)


# -- 9 ---------------------------------------------------------------------


def _construction(rng, t0, kmax):
    l = rng.uniform(0.2, 3.0)
    alpha = rng.uniform(0.2, 3.0)
    C = Isometry(random_lorentz(rng, max_rapidity=1.0), rng.uniform(-5, 5, 3))
    flow = HyperbolicFlow(l, alpha, C)
    k = flow.mu * rng.uniform(1e-3, kmax)
    k = flow.mu if rng.uniform() < 0.1 and kmax == 1.0 else k
    params = OrbitParams("S", k=k, t0=t0, shift=rng.uniform(-3, 3))
    s0 = rng.uniform(-1, 1)
    sign = rng.choice([-1.0, 1.0], 2)
    return flow, params, (
        hyp_orbit(flow, params, s0),
        sign[0] * hyp_director(flow, s0),
        hyp_orbit(flow, params, s0 + 1.0),
        sign[1] * hyp_director(flow, s0 + 1.0),
    )


def criterion_9():
    rng = np.random.default_rng(SEED + 9)
    worst_t0, spec_fail, flag_fail = 0.0, 0, 0
    for _ in range(100):
        flow, params, args = _construction(rng, 0.0, 1.0)
        cal = calibrate(*args)
        worst_t0 = max(worst_t0, abs(cal.t0))
        flag_fail += not cal.calibrated
        spec = FoliationSpec.hyperbolic(cal.flow, cal.params)
        spec_fail += not verify(spec, interval=(0.0, 1.0)).passed
    worst_ln, wrong_flag, rejected = 0.0, 0, 0
    done = 0
    while done < 100:
        t0 = rng.choice([-1.0, 1.0]) * rng.uniform(0.01, 1.0)
        flow, params, args = _construction(rng, t0, 0.5)
        try:
            cal = calibrate(*args)
        except NotDisjoint:
            rejected += 1  # outside the precondition: the input pair must be disjoint
            continue
        done += 1
        wrong_flag += cal.calibrated
        worst_ln = max(worst_ln, abs(abs(cal.ln_ratio - flow.l) - 2 * flow.l * abs(t0)))
    ok = worst_t0 <= 1e-8 and spec_fail == 0 and flag_fail == 0 and worst_ln <= 1e-8 and wrong_flag == 0
    return ok, (
        f"calibrated: max |t0| {worst_t0:.1e}, {flag_fail} not flagged, {spec_fail} emitted specs failing verify; "
        f"t0 != 0: {wrong_flag} wrongly calibrated, max ||ln-l| - 2l|t0|| {worst_ln:.1e} "
        f"({rejected} non-disjoint draws skipped)"
    )


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    report(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = [report(i, *fn()) for i, fn in enumerate(CRITERIA, 1)]
    sys.exit(0 if all(results) else 1)
