"""Acceptance checks, one test per numbered item.

``pytest tests/test_acceptance.py`` prints a PASS/FAIL line for each item
in the terminal summary (see ``conftest.py``).  Running this file as a
script does the same without pytest.
"""

import filecmp
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from scgeom import fixtures
from scgeom.geometry_core import _phi_stream, ball_limit_constant, ball_modulus
from scgeom.lens_arc import UNIVERSE, lens
from scgeom.modulus import delta_circ_threshold_test, delta_omega, limit_estimate, threshold_test
from scgeom.oracles import SampleConfig, brute_delta, brute_hull_classifier
from scgeom.rconvex import (
    arc_radius_bound,
    condition_A_check,
    condition_C_check,
    is_r_convex,
    r_hull,
    radius_refinement,
)

H = 0.01


def _ball(r):
    return fixtures.intersect_disks([[0.0, 0.0]], r)


@pytest.mark.acceptance(1)
def test_ball_modulus_exact_and_oracle():
    for r in (0.5, 1.0, 2.0):
        B = _ball(r)
        for f in (0.1, 0.5, 1.0):
            e = f * r
            assert abs(delta_omega(B, e).delta - (r - math.sqrt(r * r - e * e / 4))) < 1e-6
    D = fixtures.unit_disk()
    for e in (0.5, 1.0):
        assert abs(brute_delta(D, e, h=H).delta - ball_modulus(1.0, e)) <= 2 * H


@pytest.mark.acceptance(2)
def test_limit_constant():
    for r in (1.0, 2.0):
        B = _ball(r)
        ests = [limit_estimate(B, r / 2, k) for k in (4, 6, 8)]
        assert ests[-1].value == pytest.approx(ball_limit_constant(r), rel=0.01)
        assert ests[-1].cauchy_residual < 1e-3
        res = [e.cauchy_residual for e in ests]
        assert res[0] > res[1] > res[2]


@pytest.mark.acceptance(3)
def test_threshold_theorem():
    D, S = fixtures.unit_disk(), fixtures.unit_square()
    assert threshold_test(D, 1.0).certified
    assert threshold_test(D, 2.0).certified
    rep = threshold_test(D, 0.9)
    assert rep.refuted
    assert 0.125 < ball_limit_constant(0.9)
    for r in (0.5, 1.0, 10.0):
        rep = threshold_test(S, r)
        assert rep.refuted
        assert all(row[2] == 0.0 for row in rep.samples)


@pytest.mark.acceptance(4)
def test_strict_ball_inequality():
    margin = math.inf
    for r in np.linspace(0.1, 5.0, 20):
        for e in np.linspace(0.01, 1.99, 20) * r:
            margin = min(margin, ball_modulus(r, e) / (e * e) - ball_limit_constant(r))
    assert margin > 0


@pytest.mark.acceptance(5)
def test_ellipse(ellipse):
    est = limit_estimate(ellipse, 1.0, 8)
    assert est.value == pytest.approx(1 / 32, rel=0.05)
    # the lattice oracle bounds the coarse end of the schedule
    for e in (0.5, 1.0):
        assert abs(delta_omega(ellipse, e).delta - brute_delta(ellipse, e, h=H).delta) <= 2 * H
    assert threshold_test(ellipse, 4.5, eps0=1.0, k=8).certified
    assert threshold_test(ellipse, 3.5, eps0=1.0, k=8).refuted


@pytest.mark.acceptance(6)
def test_r_hull_pipeline():
    pts = fixtures.seeded_points(20, 0)
    Hb = r_hull(pts, 2.0)
    assert np.all(Hb.boundary_distance_many(pts) >= -1e-9)
    assert is_r_convex(Hb, 2.0).certified
    ring = Hb.boundary_points(np.linspace(0, 1, 400, endpoint=False))
    H2 = r_hull(np.vstack([Hb.vertices(), ring]), 2.0)
    Q = _phi_stream(0, 23).uniform(-0.2, 1.2, (100_000, 2))
    assert np.max(np.abs(Hb.boundary_distance_many(Q) - H2.boundary_distance_many(Q))) < 1e-9
    O = brute_hull_classifier(pts, 2.0, SampleConfig(seed=0, centers=2048))
    a, b = Hb.contains_many(Q), O.contains_many(Q)
    diff = a != b
    assert diff.mean() <= 1e-3
    assert not np.any(diff & (np.abs(Hb.boundary_distance_many(Q)) >= 2 * H))


@pytest.mark.acceptance(7)
def test_lens_identities():
    P = _phi_stream(0, 21).uniform(-1.5, 1.5, (10_000, 2))
    L = lens([-1.0, 0.0], [1.0, 0.0], 1.0)
    assert np.array_equal(L.contains_many(P), np.linalg.norm(P, axis=1) <= 1.0 + 1e-9)
    assert lens([-2.0, 0.0], [2.0, 0.0], 1.0) is UNIVERSE
    off = lens([-0.5, 0.0], [0.5, 0.0], 1.0).boundary_offset()
    assert abs(off - (1 - math.sqrt(3) / 2)) < 1e-9
    assert abs(off - ball_modulus(1.0, 1.0)) < 1e-9


@pytest.mark.acceptance(8)
def test_refinement_recurrence():
    tr = radius_refinement(2.0, 1.0, 10)
    for n, R in enumerate(tr.sequence):
        assert abs(R - 2.0 ** (n + 1) / (2.0 ** (n + 1) - 1)) < 1e-12
    assert abs(arc_radius_bound(1.0, 2.0, 1e-4) - 4 / 3) < 1e-6


@pytest.mark.acceptance(9)
def test_conditions_A_and_C():
    D, S, T = fixtures.unit_disk(), fixtures.unit_square(), fixtures.three_disk()
    assert condition_A_check(D, 1.0)
    assert condition_A_check(T, 1.0) and condition_A_check(T, 2.0)
    for r in (0.5, 1.0, 10.0):
        c = condition_A_check(S, r)
        assert not c and c.witness is not None
    assert condition_C_check(S) and condition_C_check(D)
    U = condition_C_check(fixtures.tangent_disks())
    assert not U
    x, y = np.asarray(U.witness[0]), np.asarray(U.witness[1])
    assert x[0] * y[0] < 0  # one point in each disk


@pytest.mark.acceptance(10)
def test_convexity_needed(union):
    probes = [[-1.0, 0.0], [1.0, 0.0], [-1.5, 0.3], [1.4, -0.5]]
    res = delta_circ_threshold_test(union, probes, 1.0, eps_list=[0.5, 0.25])
    assert all(p.passed for p in res.probes)
    assert res.verdict != "certified"
    for r in (1.0, 2.0):
        rep = is_r_convex(union, r)
        assert rep.refuted and rep.details["witness_kind"] == "midpoint"


@pytest.mark.acceptance(11)
def test_radius_monotonicity():
    bodies = [
        (fixtures.unit_disk(), 1.0),
        (fixtures.three_disk(), 1.0),
        (fixtures.five_disk(), 1.0),
        (r_hull(fixtures.seeded_points(20, 0), 2.0), 2.0),
    ]
    for B, r in bodies:
        assert is_r_convex(B, r).certified
        for f in (1.1, 2.0, 10.0):
            assert is_r_convex(B, f * r).certified


@pytest.mark.acceptance(12)
def test_determinism(tmp_path):
    outs = []
    for threads in ("1", "2"):
        out = tmp_path / f"verify-{threads}.json"
        env = dict(os.environ, SCG_THREADS=threads)
        p = subprocess.run([sys.executable, "-m", "scgeom", "verify", "--suite", "theorems", "--seed", "7",
                            "--json", str(out)], env=env, capture_output=True, text=True)
        assert p.returncode == 0, p.stdout + p.stderr
        outs.append(out)
    assert filecmp.cmp(outs[0], outs[1], shallow=False)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
