import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgeom.bodies import ConvexPolygon, DiskPolygon, intersect_disks
from scgeom.errors import DomainError, NoContainingBallError
from scgeom.fixtures import five_disk, seeded_points
from scgeom.lens_arc import arc_property, lens
from scgeom.oracles import SampleConfig, brute_hull_classifier, brute_hull_membership
from scgeom.rconvex import (
    arc_radius_bound,
    condition_A_check,
    condition_C_check,
    is_r_convex,
    local_r_convex_check,
    r_hull,
    radius_refinement,
    spherical_support_at,
    spherical_support_local,
    spherical_support_witness,
)


def test_spherical_support_examples(disk, square):
    assert spherical_support_at(disk, [1, 0], [1, 0], 1.0)
    w = spherical_support_witness(disk, [1, 0], [1, 0], 0.9)
    assert np.allclose(w, [-1, 0]) and np.linalg.norm(w - [0.1, 0]) == pytest.approx(1.1)
    w = spherical_support_witness(square, [0.5, 0], [0, -1], 1.0)
    assert tuple(w) in {(0.0, 0.0), (1.0, 0.0)}


def test_spherical_support_requires_normal(square):
    with pytest.raises(DomainError):
        spherical_support_at(square, [0.5, 0], [0, 1], 1.0)


def test_is_r_convex_examples(disk, square):
    assert is_r_convex(disk, 1.0).certified
    rep = is_r_convex(disk, 0.9)
    assert rep.refuted and rep.witness is not None
    rep = is_r_convex(square, 100.0)
    assert rep.refuted and rep.method == "flat_edge"


def test_is_r_convex_point_polygon():
    P = ConvexPolygon([[1.0, 2.0]])
    assert all(is_r_convex(P, r).certified for r in (1e-3, 1.0, 1e3))


def test_is_r_convex_implicit_never_certified(ellipse, union):
    assert is_r_convex(ellipse, 4.5).verdict == "inconclusive"
    assert is_r_convex(ellipse, 3.5).refuted
    for r in (1.0, 2.0):
        rep = is_r_convex(union, r)
        assert rep.refuted and rep.details["witness_kind"] == "midpoint"
        x, y, m = rep.witness
        assert union.contains(x) and union.contains(y) and not union.contains(m)


def test_is_r_convex_bad_input(disk):
    with pytest.raises(DomainError):
        is_r_convex(disk, 0.0)
    with pytest.raises(DomainError):
        is_r_convex(disk, 1.0, method="guess")


def test_r_hull_examples():
    H = r_hull([[0, 0]], 1.0)
    assert H.degenerate == "point" and np.allclose(H.point, 0)
    H = r_hull([[-1, 0], [1, 0]], 1.0)
    assert H.contains([0, 0.99]) and not H.contains([0, 1.01]) and H.contains([0.99, 0])
    with pytest.raises(NoContainingBallError) as e:
        r_hull([[-2, 0], [2, 0]], 1.0)
    assert e.value.enclosing_radius == pytest.approx(2.0)


def test_r_hull_properties():
    pts = seeded_points(20, 3)
    H = r_hull(pts, 2.0)
    assert isinstance(H, DiskPolygon)
    assert np.all(H.boundary_distance_many(pts) >= -1e-9)
    assert is_r_convex(H, 2.0).certified
    H2 = r_hull(np.vstack([H.vertices(), H.boundary_points(np.linspace(0, 1, 300, endpoint=False))]), 2.0)
    assert len(H2.arcs) == len(H.arcs)
    for a, b in zip(H.arcs, H2.arcs):
        assert np.allclose(a.center, b.center, atol=1e-9)


def test_r_hull_not_larger_than_sampled_hull():
    pts = seeded_points(20, 4)
    H = r_hull(pts, 2.0)
    O = brute_hull_classifier(pts, 2.0, SampleConfig(centers=1024))
    Q = np.random.default_rng(8).uniform(-0.5, 1.5, (100_000, 2))
    # the sampled hull is a superset; anything in H must be in it
    assert not np.any(H.contains_many(Q) & ~O.contains_many(Q))


def test_lens_hull_consistency():
    x, y = np.array([-0.4, 0.1]), np.array([0.5, -0.3])
    H, L = r_hull([x, y], 1.0), lens(x, y, 1.0)
    Q = np.random.default_rng(9).uniform(-1, 1, (10_000, 2))
    a, b = H.contains_many(Q), L.contains_many(Q)
    assert np.mean(a != b) == 0


def test_brute_hull_membership_examples():
    assert brute_hull_membership([[-1, 0], [1, 0]], 1.0, [0, 0.5])
    assert not brute_hull_membership([[-1, 0], [1, 0]], 1.0, [0, 1.01])
    assert brute_hull_membership([[0, 0], [1, 0], [1, 1], [0, 1]], 1.0, [0.5, 0.5])


def test_local_checks(disk, square, union):
    assert local_r_convex_check(disk, [1, 0], 0.2, 1.0)
    res = local_r_convex_check(square, [0.5, 0], 0.2, 1.0)
    assert not res and not square.contains(res.witness[-1])
    assert not local_r_convex_check(union, [0, 0], 0.1, 1.0)


def test_local_check_outside(disk):
    with pytest.raises(DomainError):
        local_r_convex_check(disk, [2, 0], 0.2, 1.0)


def test_spherical_support_local(disk, square):
    res = spherical_support_local(disk, [1, 0], 0.3, 1.0)
    assert res and np.allclose(res.witness[1], [1, 0])
    assert not spherical_support_local(disk, [1, 0], 0.3, 0.5)
    # the point named in the derivation: angle 0.25 on the circle
    p = np.array([math.cos(0.25), math.sin(0.25)])
    assert np.linalg.norm(p - [0.5, 0]) > 0.5
    assert not spherical_support_local(square, [0.5, 0], 0.1, 5.0)


def test_spherical_support_local_off_boundary(disk):
    with pytest.raises(DomainError):
        spherical_support_local(disk, [0.5, 0], 0.3, 1.0)


def test_condition_A(disk, square, three_disk):
    eps = [2.0**-i for i in range(1, 7)]
    assert condition_A_check(disk, 1.0, eps)
    for r in (0.5, 1.0, 10.0):
        res = condition_A_check(square, r, eps)
        assert not res and not square.contains(res.witness[2])
    assert condition_A_check(three_disk, 2.0, eps)


def test_condition_A_skips_large_eps(disk):
    res = condition_A_check(disk, 1.0, [5.0, 0.5])
    assert res and res.skipped == (5.0,)


def test_condition_C(disk, square, union):
    eps = [2.0**-i for i in range(1, 7)]
    assert condition_C_check(square, eps) and condition_C_check(disk, eps)
    res = condition_C_check(union, [1.0, 0.5, 0.25])
    assert not res
    x, y, m = res.witness
    assert x[0] * y[0] < 0 and not union.contains(m)


def test_radius_refinement():
    tr = radius_refinement(2, 1, 3)
    assert tr.sequence == pytest.approx((2, 4 / 3, 8 / 7, 16 / 15), abs=1e-15)
    tr = radius_refinement(2, 1, 10)
    assert tr.sequence[-1] == pytest.approx(2048 / 2047, abs=1e-12)
    assert all(b < a for a, b in zip(tr.sequence, tr.sequence[1:]))
    assert radius_refinement(1, 1, 5).sequence == (1.0,) * 6
    with pytest.raises(DomainError):
        radius_refinement(0.5, 1, 3)


def test_arc_radius_bound():
    assert arc_radius_bound(1, 2, 0.1) == pytest.approx(1.3331, abs=1e-4)
    assert arc_radius_bound(1, 2, 1e-4) == pytest.approx(4 / 3, abs=1e-6)
    rho = arc_radius_bound(1, 1 + 1e-9, 0.5)
    assert 1 < rho < 1 + 1e-9


@pytest.mark.parametrize("r,R", [(1, 2), (1, 1.5), (0.5, 1)])
def test_arc_bound_matches_refinement_step(r, R):
    assert arc_radius_bound(r, R, 1e-4) == pytest.approx(radius_refinement(R, r, 1).sequence[1], abs=1e-6)


@pytest.mark.parametrize("name", ["disk", "three_disk"])
def test_radius_monotonicity(name, request):
    body = request.getfixturevalue(name)
    assert all(is_r_convex(body, f).certified for f in (1.0, 1.1, 2.0, 10.0))
    F = five_disk()
    assert all(is_r_convex(F, f).certified for f in (1.0, 1.1, 2.0, 10.0))


gens = st.lists(st.tuples(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5)), min_size=2, max_size=5, unique=True)


@settings(max_examples=15, deadline=None)
@given(gens, st.floats(1.0, 3.0))
def test_arc_property_agrees_with_disk_polygon_verdict(C, r):
    D = intersect_disks(np.array(C), 1.0)
    if D.degenerate:
        return
    B = D.boundary_points(np.linspace(0, 1, 12, endpoint=False))
    ok = all(arc_property(D, B[i], B[j], r, levels=6) for i in range(len(B)) for j in range(i + 1, len(B)))
    assert ok and is_r_convex(D, r).certified
