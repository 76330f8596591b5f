import math

import numpy as np
import pytest

from scgeom.errors import BudgetError, DomainError, EmptyBodyError, NoContainingBallError
from scgeom.geometry_core import ball_modulus
from scgeom.oracles import GridBody, SampleConfig, brute_delta, brute_lens, grid_body


def _disk(P):
    return np.sum(P * P, axis=1) <= 1


def test_brute_delta_disk(disk):
    s = brute_delta(disk, 1.0)
    assert abs(s.delta - 0.1340) <= 0.02 and abs(s.delta - ball_modulus(1, 1)) <= 0.02
    assert s.error == pytest.approx(0.02)
    x, y = s.witness_pair
    assert abs(np.linalg.norm(y - x) - 1.0) <= 0.01


def test_brute_delta_square(square):
    assert abs(brute_delta(square, 0.5).delta) <= 0.02


def test_brute_delta_vacuous(disk):
    assert brute_delta(disk, 3.0).delta == math.inf


def test_brute_delta_budget(disk):
    with pytest.raises(BudgetError):
        brute_delta(disk, 1.0, SampleConfig(max_cells=1000))


def test_brute_lens_examples():
    for n in (64, 256, 1024):
        B = brute_lens([-0.5, 0], [0.5, 0], 1.0, SampleConfig(centers=n, seed=n))
        assert B.contains([0, 0]) and not B.contains([0, 0.2]) and B.contains([0, 0.1])


def test_brute_lens_infeasible():
    with pytest.raises(NoContainingBallError):
        brute_lens([-2, 0], [2, 0], 1.0)


def test_sample_config_validation_and_streams():
    with pytest.raises(DomainError):
        SampleConfig(centers=0)
    a = SampleConfig(seed=11).rng(3).random(5)
    b = SampleConfig(seed=11).rng(3).random(5)
    c = SampleConfig(seed=12).rng(3).random(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_brute_lens_deterministic():
    P = np.random.default_rng(0).uniform(-1, 1, (2000, 2))
    a = brute_lens([-0.5, 0.1], [0.4, 0.3], 0.8, SampleConfig(seed=5, centers=128)).contains_many(P)
    b = brute_lens([-0.5, 0.1], [0.4, 0.3], 0.8, SampleConfig(seed=5, centers=128)).contains_many(P)
    assert np.array_equal(a, b)


def test_grid_body_disk_area():
    g = grid_body(_disk, ([-1.1, -1.1], [1.1, 1.1]), 0.01)
    assert abs(g.area - math.pi) / math.pi < 0.01
    assert g.contains([0, 0]) and not g.contains([1.05, 0])
    assert g.boundary_distance([0, 0]) == pytest.approx(1.0, abs=0.01)


def test_grid_body_empty_and_budget():
    with pytest.raises(EmptyBodyError):
        grid_body(lambda P: np.zeros(len(P), dtype=bool), ([0, 0], [1, 1]), 0.1)
    with pytest.raises(BudgetError):
        grid_body(_disk, ([-1, -1], [1, 1]), 0.001, max_cells=10_000)
    with pytest.raises(DomainError):
        grid_body(_disk, ([-1, -1], [1, 1]), 0.0)


def test_grid_body_half_plane_distance():
    h = 0.01
    g = grid_body(lambda P: P[:, 0] <= 0.3, ([-1, -1], [1, 1]), h)
    P = np.array([[0.3, 0.0], [0.0, 0.2], [-0.5, -0.4], [-0.9, 0.3], [0.6, 0.1], [0.29, -0.7]])
    # the half-plane is clipped to the box, whose sides count as boundary
    x, y = P[:, 0], P[:, 1]
    want = np.where(x <= 0.3, np.minimum.reduce([0.3 - x, x + 1, 1 - y, y + 1]), 0.3 - x)
    assert np.all(np.abs(g.boundary_distance_many(P) - want) <= h)


def test_grid_body_occupancy_matches_predicate():
    g = grid_body(_disk, ([-1.2, -1.2], [1.2, 1.2]), 0.05)
    n = g.occ.shape[0]
    c = g.lo[0] + (np.arange(n) + 0.5) * 0.05
    X, Y = np.meshgrid(c, c, indexing="ij")
    assert np.array_equal(g.occ, X**2 + Y**2 <= 1)


def test_grid_body_json_round_trip():
    g = grid_body(_disk, ([-1.2, -1.2], [1.2, 1.2]), 0.05)
    g2 = GridBody.from_json(g.to_json())
    assert np.array_equal(g.occ, g2.occ) and np.allclose(g.lo, g2.lo)


def test_brute_delta_on_grid_body():
    g = grid_body(_disk, ([-1.1, -1.1], [1.1, 1.1]), 0.005)
    assert abs(brute_delta(g, 1.0).delta - ball_modulus(1, 1)) <= 0.02
