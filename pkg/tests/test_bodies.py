import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgeom.bodies import ConvexPolygon, DiskPolygon, ImplicitBody, intersect_disks
from scgeom.errors import DimensionError, DomainError, InfeasibleError


def test_disk_contains(disk):
    assert disk.contains([0, 0]) and disk.contains([1, 0]) and not disk.contains([1.01, 0])


def test_contains_dimension_mismatch(disk):
    with pytest.raises(DimensionError):
        disk.contains([0, 0, 0])


def test_boundary_distance_examples(disk, square):
    assert disk.boundary_distance([0, 0]) == pytest.approx(1.0)
    assert disk.boundary_distance([2, 0]) == pytest.approx(-1.0)
    assert square.boundary_distance([0.5, 0.5]) == pytest.approx(0.5)


def test_normal_cones(disk, square):
    assert [tuple(v) for v in disk.normal_cone([1, 0]).extreme_rays] == [(1.0, 0.0)]
    corner = {tuple(np.round(v, 12) + 0.0) for v in square.normal_cone([1, 1]).extreme_rays}
    assert corner == {(1.0, 0.0), (0.0, 1.0)}
    assert [tuple(v + 0.0) for v in square.normal_cone([0.5, 0]).extreme_rays] == [(0.0, -1.0)]


def test_normal_cone_off_boundary(disk, square):
    with pytest.raises(DomainError):
        disk.normal_cone([0.5, 0])
    with pytest.raises(DomainError):
        square.normal_cone([0.5, 0.5])


def test_intersect_disks_single():
    D = intersect_disks([[0, 0]], 1)
    assert len(D.arcs) == 1 and D.arcs[0].sweep == pytest.approx(2 * math.pi)


def test_intersect_disks_tangent_point():
    D = intersect_disks([[-1, 0], [1, 0]], 1)
    assert D.degenerate == "point" and np.allclose(D.point, 0)


def test_intersect_disks_lens():
    D = intersect_disks([[-0.5, 0], [0.5, 0]], 1)
    assert sorted(tuple(a.center) for a in D.arcs) == [(-0.5, 0.0), (0.5, 0.0)]
    P = np.random.default_rng(0).uniform(-1, 1, (5000, 2))
    want = np.all(np.linalg.norm(P[:, None] - np.array([[-0.5, 0], [0.5, 0]])[None], axis=2) <= 1, axis=1)
    assert np.array_equal(D.contains_many(P), want)


def test_intersect_disks_empty():
    with pytest.raises(InfeasibleError) as e:
        intersect_disks([[0, 0], [3, 0]], 1)
    assert e.value.enclosing_radius == pytest.approx(1.5)


def test_duplicate_center_leaves_arcs_unchanged(three_disk):
    D2 = intersect_disks(np.vstack([three_disk.centers, three_disk.centers[:1]]), 1.0)
    assert len(D2.arcs) == len(three_disk.arcs)
    for a, b in zip(D2.arcs, three_disk.arcs):
        assert np.allclose(a.center, b.center) and a.start_angle == pytest.approx(b.start_angle)


def test_redundant_disk_dropped():
    D = intersect_disks([[0, 0], [0.05, 0], [0.02, 0.01]], 1)
    assert len(D.arcs) <= 3 and all(len(a.center) == 2 for a in D.arcs)
    assert D.contains([0.02, 0.0])


def test_diameters(disk, square):
    assert disk.diameter() == pytest.approx(2.0)
    assert square.diameter() == pytest.approx(math.sqrt(2))
    seg = ConvexPolygon([[0, 0], [3, 0]])
    assert seg.degenerate == "segment" and seg.diameter() == pytest.approx(3.0)


def test_polygon_normalisation():
    P = ConvexPolygon([[0, 0], [0, 1], [0.5, 1], [1, 1], [1, 0], [1, 0]])
    assert len(P.vertices) == 4
    # counterclockwise
    V = P.vertices
    area = 0.5 * np.sum(V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1])
    assert area == pytest.approx(1.0)


centers = st.lists(st.tuples(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6)), min_size=1, max_size=7)


@settings(max_examples=40, deadline=None)
@given(centers, st.integers(0, 2**32 - 1))
def test_disk_polygon_membership_matches_definition(C, seed):
    C = np.array(C)
    try:
        D = intersect_disks(C, 1.0)
    except InfeasibleError:
        return
    P = np.random.default_rng(seed).uniform(-1.7, 1.7, (400, 2))
    want = np.all(np.linalg.norm(P[:, None] - C[None], axis=2) <= 1 + D.tol.abs_geom, axis=1)
    assert np.array_equal(D.contains_many(P), want)


@settings(max_examples=30, deadline=None)
@given(centers)
def test_disk_polygon_boundary_distance_zero_on_arcs(C):
    try:
        D = intersect_disks(np.array(C), 1.0)
    except InfeasibleError:
        return
    if D.degenerate:
        return
    B = D.boundary_points(np.linspace(0, 1, 50, endpoint=False))
    assert np.all(np.abs(D.boundary_distance_many(B)) < 1e-9)


def test_normal_cone_rays_support_the_body(three_disk, square):
    for body, pts in ((three_disk, three_disk.vertices()), (square, square.vertices)):
        F = np.vstack([pts, body.boundary_points(np.linspace(0, 1, 200, endpoint=False))])
        for x in pts:
            for v in body.normal_cone(x).directions():
                assert np.max((F - x) @ v) <= 1e-9 * body.diameter()


def test_ray_exit_disk(disk):
    t = disk.ray_exit(np.array([[0.0, 0.0], [0.5, 0.0]]), np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert np.allclose(t, [1.0, math.sqrt(0.75)])


def test_implicit_ellipse_distances(ellipse):
    d = ellipse.boundary_distance_many(np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 0.5]]))
    assert d == pytest.approx([1.0, -1.0, 0.5], abs=1e-6)
    lo, hi = ellipse.diameter_bounds()
    assert lo <= 4.0 + 1e-9 <= hi + 1e-9 and lo > 3.99


def test_implicit_ball_and_sections():
    B = ImplicitBody.ball(1.0, [0.0, 0.0, 0.0])
    assert B.dim == 3 and B.convex
    S = B.section(np.zeros(3), np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
    assert S.dim == 2 and S.contains([0.99, 0]) and not S.contains([1.01, 0])


def test_implicit_bad_center():
    with pytest.raises(DomainError):
        ImplicitBody(lambda P: np.linalg.norm(P, axis=1) <= 1, ([-1, -1], [1, 1]), center=[5.0, 5.0])


def test_union_is_not_convex(union):
    assert not union.convex and union.contains([0, 0]) and not union.contains([0, 0.05])


def test_disk_polygon_radius_attribute(three_disk):
    assert isinstance(three_disk, DiskPolygon) and three_disk.radius == 1.0
    assert len(three_disk.arcs) == 3


def test_polygon_rejects_reflex_vertex():
    with pytest.raises(DomainError):
        ConvexPolygon([[0, 0], [2, 0], [1, 0.2], [2, 2], [0, 2]])
