import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scgeom.errors import DegenerateChordError, DomainError, NoContainingBallError
from scgeom.geometry_core import (
    Ball,
    ball_limit_constant,
    ball_modulus,
    chord_circle_centers,
    min_enclosing_ball,
    perp_directions,
    sphere_directions,
)

coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
points2 = st.lists(st.tuples(coords, coords), min_size=1, max_size=25)


@pytest.mark.parametrize("r,eps,want", [(1, 0, 0.0), (1, 2, 1.0), (1, 1, 1 - math.sqrt(3) / 2)])
def test_ball_modulus_values(r, eps, want):
    assert ball_modulus(r, eps) == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize("r,eps", [(1, -0.1), (1, 2.1), (0, 0.5), (-1, 0.1)])
def test_ball_modulus_domain(r, eps):
    with pytest.raises(DomainError):
        ball_modulus(r, eps)


def test_ball_modulus_small_eps_is_accurate():
    # the naive difference would lose every digit here
    e = 1e-9
    assert ball_modulus(1.0, e) == pytest.approx(e * e / 8, rel=1e-12)


@pytest.mark.parametrize("r,want", [(1, 0.125), (2, 0.0625), (0.125, 1.0)])
def test_ball_limit_constant(r, want):
    assert ball_limit_constant(r) == want


def test_ball_limit_constant_domain():
    with pytest.raises(DomainError):
        ball_limit_constant(0.0)


def test_ball_modulus_strictly_above_limit_and_decreasing_in_r():
    R = np.linspace(0.2, 4, 20)
    for r in R:
        E = np.linspace(0.01, 2, 20) * r
        assert all(ball_modulus(r, e) / e**2 > ball_limit_constant(r) for e in E)
    for e in np.linspace(0.05, 0.4, 8):
        vals = [ball_modulus(r, e) for r in R]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_chord_centers_diameter():
    cp, cm = chord_circle_centers([-1, 0], [1, 0], 1)
    assert np.allclose(cp, 0) and np.allclose(cm, 0)


def test_chord_centers_short_chord():
    x, y = np.array([-0.5, 0.0]), np.array([0.5, 0.0])
    cp, cm = chord_circle_centers(x, y, 1)
    for c in (cp, cm):
        assert np.linalg.norm(c - x) == pytest.approx(1) and np.linalg.norm(c - y) == pytest.approx(1)
    assert sorted([cp[1], cm[1]]) == pytest.approx([-math.sqrt(0.75), math.sqrt(0.75)])


def test_chord_centers_vertical():
    cp, cm = chord_circle_centers([0, 0], [0, 1], 1)
    assert sorted([tuple(np.round(cp, 12)), tuple(np.round(cm, 12))]) == [
        (round(-math.sqrt(0.75), 12), 0.5),
        (round(math.sqrt(0.75), 12), 0.5),
    ]


def test_chord_centers_errors():
    with pytest.raises(NoContainingBallError):
        chord_circle_centers([0, 0], [3, 0], 1)
    with pytest.raises(DegenerateChordError):
        chord_circle_centers([1, 1], [1, 1], 1)


@settings(max_examples=60, deadline=None)
@given(coords, coords, coords, coords, st.floats(0.1, 20))
def test_chord_centers_symmetric(a, b, c, d, r):
    x, y = np.array([a, b]), np.array([c, d])
    dist = np.linalg.norm(y - x)
    if dist < 1e-6 or dist > 2 * r * (1 - 1e-9):
        return
    cp, cm = chord_circle_centers(x, y, r)
    assert np.allclose(cp + cm, x + y, atol=1e-9)
    for cc in (cp, cm):
        assert abs(np.linalg.norm(cc - x) - r) < 1e-8 * max(1, r)


def test_perp_directions_axes():
    assert {tuple(v) for v in np.round(perp_directions([1, 0]), 12) + 0.0} == {(0.0, 1.0), (0.0, -1.0)}
    assert {tuple(v) for v in np.round(perp_directions([0, 1]), 12) + 0.0} == {(1.0, 0.0), (-1.0, 0.0)}
    got = {tuple(v) for v in np.round(perp_directions([1, 0, 0]), 12) + 0.0}
    assert got == {(0.0, 1.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, 1.0), (0.0, 0.0, -1.0)}


def test_perp_directions_zero():
    with pytest.raises(DomainError):
        perp_directions([0, 0])


@pytest.mark.parametrize("d,k", [(2, 0), (3, 0), (3, 16), (5, 9)])
def test_perp_directions_orthogonal_and_deterministic(d, k):
    u = np.arange(1, d + 1, dtype=float)
    u /= np.linalg.norm(u)
    V = perp_directions(u, k=k, seed=3)
    assert np.all(np.abs(V @ u) < 1e-12)
    assert np.allclose(np.linalg.norm(V, axis=1), 1)
    assert np.array_equal(V, perp_directions(u, k=k, seed=3))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_sphere_directions_unit(d):
    D = sphere_directions(d, 50, seed=1)
    assert D.shape == (50, d)
    assert np.allclose(np.linalg.norm(D, axis=1), 1)


def test_ball_zero_radius():
    b = Ball([1.0, 2.0], 0.0)
    assert b.contains([1.0, 2.0]) and not b.contains([1.0, 2.1])
    with pytest.raises(DomainError):
        Ball([0.0, 0.0], -1.0)


def _brute_meb_radius(P):
    # smallest circle through 2 or 3 points containing all of them
    best = math.inf
    P = [np.asarray(p, dtype=float) for p in P]
    cands = []
    for a, b in itertools.combinations(P, 2):
        cands.append((0.5 * (a + b), 0.5 * np.linalg.norm(a - b)))
    for a, b, c in itertools.combinations(P, 3):
        d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
        if abs(d) < 1e-12:
            continue
        ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
        uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
        u = np.array([ux, uy])
        cands.append((u, np.linalg.norm(a - u)))
    for c, r in cands:
        if all(np.linalg.norm(p - c) <= r * (1 + 1e-9) + 1e-9 for p in P):
            best = min(best, r)
    return best if len(P) > 1 else 0.0


@settings(max_examples=60, deadline=None)
@given(points2)
def test_min_enclosing_ball_matches_brute_force(pts):
    P = np.array(pts)
    b = min_enclosing_ball(P)
    assert np.all(np.linalg.norm(P - b.center, axis=1) <= b.radius * (1 + 1e-9) + 1e-9)
    if len(P) <= 8:
        assert b.radius == pytest.approx(_brute_meb_radius(P), rel=1e-7, abs=1e-9)


def test_min_enclosing_ball_examples():
    b = min_enclosing_ball([[0, 0], [4, 0]])
    assert b.radius == pytest.approx(2) and np.allclose(b.center, [2, 0])
    b = min_enclosing_ball([[0, 0], [1, 0], [0, 1], [1, 1], [0.5, 0.5]])
    assert b.radius == pytest.approx(math.sqrt(0.5))
