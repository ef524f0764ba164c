import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from crooked.errors import CrossingPair, DegeneratePair, NotSpacelike, NotUltraparallel
from crooked.flows import HyperbolicFlow, OrbitParams
from crooked.minkowski import Point, lorentz_dot, null_frame, random_lorentz
from crooked.planes import (
    CrookedPlane,
    cone_disjoint,
    cone_margin,
    consistently_oriented,
    contains_point,
    dg_disjoint,
    dg_margin,
    in_stem_quadrant,
    normalize_consistent,
    pair_class,
    stem_coordinates,
)
from crooked.verify import FoliationSpec

from conftest import random_spacelike, spacelike

C1, S1 = np.cosh(1.0), np.sinh(1.0)
E = np.e


def test_pair_class_examples():
    assert pair_class((1, 0, 0), (0, 1, 0)) == "crossing"
    assert pair_class((1, 0, 0), (C1, 0, S1)) == "ultraparallel"
    assert pair_class((1, 1, 1), (E, 1, E)) == "asymptotic"


def test_pair_class_parallel():
    with pytest.raises(DegeneratePair):
        pair_class((1, 0, 0), (-2, 0, 0))


def test_consistently_oriented_examples():
    assert consistently_oriented((-1, 0, 0), (C1, 0, S1))
    assert not consistently_oriented((1, 0, 0), (C1, 0, S1))


def test_consistently_oriented_negated_pair():
    # Negating both directors swaps u- and u+ in each frame, which flips the
    # sign of the null conditions, so the negated pair is not consistent.
    assert not consistently_oriented((1, 0, 0), (-C1, 0, -S1))


def test_normalize_examples():
    a, b = normalize_consistent((2, 0, 0), (-C1, 0, -S1))
    assert np.allclose(a, (-1, 0, 0)) and np.allclose(b, (C1, 0, S1))
    a, b = normalize_consistent((-3, 0, 0), (5 * C1, 0, 5 * S1))
    assert np.allclose(a, (-1, 0, 0)) and np.allclose(b, (C1, 0, S1))
    a, b = normalize_consistent((-1, 0, 0), (C1, 0, S1))
    assert np.allclose(a, (-1, 0, 0)) and np.allclose(b, (C1, 0, S1))


def test_stem_quadrant_examples():
    f = null_frame((1, 0, 0))
    assert in_stem_quadrant((1, 0, 0), f.u_minus) == "edge"
    assert in_stem_quadrant((1, 0, 0), f.u_plus) == "outside"
    assert in_stem_quadrant((1, 0, 0), (0, 2, 0)) == "interior"
    assert in_stem_quadrant((1, 0, 0), (0, -2, 0)) == "outside"
    assert in_stem_quadrant((1, 0, 0), (1, 0, 0)) == "outside"
    assert in_stem_quadrant((1, 0, 0), (0, 0, 0)) == "outside"


@given(spacelike, st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_stem_quadrant_members(u, a, b):
    assume(a + b > 1e-3)
    f = null_frame(u)
    x = a * f.u_minus - b * f.u_plus
    assert in_stem_quadrant(u, x) != "outside"
    ca, cb = stem_coordinates(u, x)
    assert np.isclose(ca, a, atol=1e-9) and np.isclose(cb, b, atol=1e-9)
    # a u- - b u+ has x.x = -2ab (u-.u+) >= 0: the quadrant is spacelike,
    # while the stem itself is the opposite-sign bowtie
    m = lorentz_dot(f.u_minus, f.u_plus)
    assert m < 0
    assert np.isclose(lorentz_dot(x, x), -2 * a * b * m, atol=1e-9 * (1 + a * b))
    assert lorentz_dot(x, x) >= -1e-9


@given(spacelike, st.floats(-5.0, 5.0), st.floats(-5.0, 5.0))
def test_bowtie(u, a, b):
    f = null_frame(u)
    x = a * f.u_minus + b * f.u_plus
    xx = lorentz_dot(x, x)
    assert np.isclose(xx, 2 * a * b * lorentz_dot(f.u_minus, f.u_plus), atol=1e-9 * (1 + abs(a * b)))
    if abs(a * b) > 1e-6:
        assert (xx <= 0) == (a * b >= 0)


def _axis_pair(alpha, t, s):
    spec = FoliationSpec.hyperbolic(HyperbolicFlow(1.0, alpha), OrbitParams("axis"))
    return CrookedPlane(spec.vertex(t), spec.director(t)), CrookedPlane(spec.vertex(s), spec.director(s))


def test_disjoint_examples():
    ct, cs = _axis_pair(1.0, 0.0, 1.0)
    assert dg_disjoint(ct, cs) and cone_disjoint(ct, cs)
    assert np.isclose(dg_margin(ct, cs) * np.linalg.norm(cs.vertex - ct.vertex), S1)
    same = CrookedPlane(Point(1, 2, 3), (C1, 0, S1))
    other = CrookedPlane(Point(1, 2, 3), (1, 0, 0))
    assert not dg_disjoint(same, other) and not cone_disjoint(same, other)


def test_alpha_kl_example():
    flow = HyperbolicFlow(1.0, 1.0)
    spec = FoliationSpec.hyperbolic(flow, OrbitParams("S", k=1.0))
    ct = CrookedPlane(spec.vertex(0.0), spec.director(0.0))
    cs = CrookedPlane(spec.vertex(1.0), spec.director(1.0))
    d = np.linalg.norm(cs.vertex - ct.vertex)
    assert np.isclose(dg_margin(ct, cs) * d, S1 - 2 * (C1 - 1))
    assert dg_disjoint(ct, cs) and cone_disjoint(ct, cs)


def test_asymptotic_case2_pair():
    def plane(t):
        return CrookedPlane(Point(np.exp(-t) / 2, t, -np.exp(-t) / 2), (np.exp(t), 1, np.exp(t)))

    assert cone_disjoint(plane(0.0), plane(1.0))
    with pytest.raises(NotUltraparallel):
        dg_disjoint(plane(0.0), plane(1.0))


def test_crossing_pairs_are_not_disjoint():
    a = CrookedPlane(Point(0, 0, 0), (1, 0, 0))
    b = CrookedPlane(Point(0, 50, 0), (0, 1, 0))
    with pytest.raises(CrossingPair):
        cone_disjoint(a, b)
    parallel = CrookedPlane(Point(0, 50, 0), (2, 0, 0))
    assert not cone_disjoint(a, parallel)


def _random_pair(rng):
    while True:
        u1, u2 = random_spacelike(rng, 2)
        if pair_class(u1, u2) == "ultraparallel":
            break
    p1, p2 = rng.uniform(-5, 5, (2, 3))
    return CrookedPlane(Point(p1), u1), CrookedPlane(Point(p2), u2)


@given(st.integers(0, 2**32 - 1))
def test_symmetry_and_negation(seed):
    c1, c2 = _random_pair(np.random.default_rng(seed))
    assume(abs(dg_margin(c1, c2)) > 1e-7)
    d = dg_disjoint(c1, c2)
    assert dg_disjoint(c2, c1) == d
    assert cone_disjoint(c1, c2) == cone_disjoint(c2, c1) == d
    assert dg_disjoint(c1.negated(), c2) == d == dg_disjoint(c1, c2.negated())
    assert cone_disjoint(c1.negated(), c2.negated()) == d


@given(st.integers(0, 2**32 - 1), st.booleans())
def test_isometry_equivariance(seed, orthochronous):
    rng = np.random.default_rng(seed)
    c1, c2 = _random_pair(rng)
    assume(abs(dg_margin(c1, c2)) > 1e-6)
    A = random_lorentz(rng, max_rapidity=1.0, orthochronous=orthochronous)
    v = rng.uniform(-3, 3, 3)

    def move(c):
        return CrookedPlane(Point(A @ c.vertex.coords + v), A @ c.director)

    assert dg_disjoint(move(c1), move(c2)) == dg_disjoint(c1, c2)
    assert cone_disjoint(move(c1), move(c2)) == cone_disjoint(c1, c2)


def test_margins_share_sign(rng):
    for _ in range(500):
        c1, c2 = _random_pair(rng)
        m = dg_margin(c1, c2)
        if abs(m) > 1e-7:
            assert (m > 0) == (cone_margin(c1, c2) > 0)


def test_contains_point_examples():
    u = np.array([1.0, 0.0, 0.0])
    cp = CrookedPlane(Point(1, 2, 3), u)
    v = cp.vertex
    assert contains_point(cp, v)
    assert contains_point(cp, v + cp.u_minus)
    assert contains_point(cp, v + u)
    assert not contains_point(cp, v + (cp.u_plus - u))
    assert contains_point(cp, v + (cp.u_minus - u))
    assert contains_point(cp, v + (0, 0, 2))
    assert not contains_point(cp, v + (0, 2, 0))


def test_plane_rejects_timelike_director():
    with pytest.raises(NotSpacelike):
        CrookedPlane(Point(0, 0, 0), (0, 0, 1))
