"""Desk-scale property suite: every check compares an algorithm with a
closed form, a structural identity or a brute-force oracle.

Results are plain data so that two runs with the same seed can be
compared byte for byte.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import fixtures
from .geometry_core import _phi_stream, ball_limit_constant, ball_modulus
from .lens_arc import UNIVERSE, lens
from .modulus import delta_circ_threshold_test, delta_omega, limit_estimate, threshold_test
from .oracles import SampleConfig, brute_delta, brute_hull_classifier, brute_lens
from .rconvex import (
    arc_radius_bound,
    condition_A_check,
    condition_C_check,
    is_r_convex,
    r_hull,
    radius_refinement,
)


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    values: dict = field(default_factory=dict)
    error: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "values": self.values}
        if self.error is not None:
            out["error"] = self.error
        return out


def _ball_modulus(seed):
    err = 0.0
    for r in (0.5, 1.0, 2.0):
        D = fixtures.intersect_disks([[0.0, 0.0]], r)
        for f in (0.1, 0.5, 1.0):
            err = max(err, abs(delta_omega(D, f * r).delta - ball_modulus(r, f * r)))
    return err < 1e-6, {"max_abs_error": err}


def _limit_constant(seed):
    out, ok = {}, True
    for r in (1.0, 2.0):
        est = limit_estimate(fixtures.intersect_disks([[0.0, 0.0]], r), r / 2, 8)
        rel = abs(est.value - ball_limit_constant(r)) * 8 * r
        ok &= rel < 0.01 and est.cauchy_residual < 1e-3
        out[f"r={r:g}"] = est.value
    return ok, out


def _threshold(seed):
    D, S = fixtures.unit_disk(), fixtures.unit_square()
    v = {
        "disk_r1": is_r_convex(D, 1.0).verdict,
        "disk_r2": is_r_convex(D, 2.0).verdict,
        "disk_r0.9": threshold_test(D, 0.9).verdict,
    }
    sq = [threshold_test(S, r) for r in (0.5, 1.0, 10.0)]
    zero = all(row[2] == 0.0 for rep in sq for row in rep.samples)
    ok = (v["disk_r1"] == v["disk_r2"] == "certified" and v["disk_r0.9"] == "refuted"
          and all(rep.refuted for rep in sq) and zero)
    v["square_refuted"] = all(rep.refuted for rep in sq)
    return ok, v


def _strict_ball(seed):
    R = np.linspace(0.1, 5.0, 20)
    margin = math.inf
    for r in R:
        for e in np.linspace(0.01, 1.9, 20) * r:
            margin = min(margin, ball_modulus(r, e) / (e * e) - ball_limit_constant(r))
    return margin > 0, {"min_margin": margin}


def _lens_identities(seed):
    rng = _phi_stream(seed, 21)
    P = rng.uniform(-1.5, 1.5, (4000, 2))
    L = lens([-1.0, 0.0], [1.0, 0.0], 1.0)
    same = bool(np.array_equal(L.contains_many(P), np.linalg.norm(P, axis=1) <= 1 + 1e-9))
    uni = lens([-2.0, 0.0], [2.0, 0.0], 1.0) is UNIVERSE
    off = abs(lens([-0.5, 0.0], [0.5, 0.0], 1.0).boundary_offset() - ball_modulus(1.0, 1.0))
    return same and uni and off < 1e-9, {"offset_error": off}


def _lens_oracle(seed):
    cfg = SampleConfig(seed=seed, centers=256)
    x, y, r = np.array([-0.5, 0.2]), np.array([0.6, -0.1]), 0.9
    L, B = lens(x, y, r), brute_lens(x, y, r, cfg)
    P = _phi_stream(seed, 22).uniform(-1.0, 1.0, (4000, 2))
    exact, sampled = L.contains_many(P), B.contains_many(P)
    # the oracle only over-approximates, and only near the boundary
    band = np.abs(np.linalg.norm(P[:, None, :] - np.asarray(L.centers)[None], axis=2) - r).min(axis=1) < 0.01
    bad = exact & ~sampled
    stray = ~exact & sampled & ~band
    return not bad.any() and not stray.any(), {"disagreements": int((exact != sampled).sum())}


def _hull_pipeline(seed):
    pts = fixtures.seeded_points(20, seed)
    H = r_hull(pts, 2.0)
    contains = bool(np.all(H.boundary_distance_many(pts) >= -1e-9))
    cert = is_r_convex(H, 2.0).certified
    H2 = r_hull(np.vstack([H.vertices(), H.boundary_points(np.linspace(0, 1, 400, endpoint=False))]), 2.0)
    Q = _phi_stream(seed, 23).uniform(-0.2, 1.2, (4000, 2))
    idem = float(np.max(np.abs(H.boundary_distance_many(Q) - H2.boundary_distance_many(Q))))
    O = brute_hull_classifier(pts, 2.0, SampleConfig(seed=seed, centers=2048))
    a, b = H.contains_many(Q), O.contains_many(Q)
    band = np.abs(H.boundary_distance_many(Q)) < 0.02
    frac = float(np.mean(a != b))
    ok = contains and cert and idem < 1e-9 and frac <= 1e-3 and not np.any((a != b) & ~band)
    return ok, {"idempotence": idem, "oracle_disagreement": frac, "arcs": len(H.arcs)}


def _refinement(seed):
    tr = radius_refinement(2.0, 1.0, 10)
    n = np.arange(len(tr.sequence))
    err = float(np.max(np.abs(np.array(tr.sequence) - 2.0 ** (n + 1) / (2.0 ** (n + 1) - 1))))
    arc = abs(arc_radius_bound(1.0, 2.0, 1e-4) - 4 / 3)
    return err < 1e-12 and arc < 1e-6, {"recurrence_error": err, "arc_bound_error": arc}


def _conditions(seed):
    D, S, T = fixtures.unit_disk(), fixtures.unit_square(), fixtures.three_disk()
    a_pass = bool(condition_A_check(D, 1.0)) and all(condition_A_check(T, r) for r in (1.0, 2.0))
    a_fail = all((not c) and c.witness is not None for c in (condition_A_check(S, r) for r in (0.5, 1.0, 10.0)))
    c_pass = bool(condition_C_check(S)) and bool(condition_C_check(D))
    U = condition_C_check(fixtures.tangent_disks())
    ok = a_pass and a_fail and c_pass and not U and U.witness is not None
    return ok, {"A_pass": a_pass, "A_fail_square": a_fail, "C_pass": c_pass, "C_fail_union": not U}


def _convexity_needed(seed):
    U = fixtures.tangent_disks()
    probes = [[-1.0, 0.0], [1.0, 0.0], [-1.5, 0.3], [1.4, -0.5]]
    res = delta_circ_threshold_test(U, probes, 1.0, eps_list=[0.5, 0.25])
    reps = [is_r_convex(U, r) for r in (1.0, 2.0)]
    ok = (res.verdict != "certified" and all(p.passed for p in res.probes)
          and all(rep.refuted and rep.details.get("witness_kind") == "midpoint" for rep in reps))
    return ok, {"probe_verdict": res.verdict, "refuted": [rep.refuted for rep in reps]}


def _monotone(seed):
    bodies = {
        "unit_disk": (fixtures.unit_disk(), 1.0),
        "three_disk": (fixtures.three_disk(), 1.0),
        "five_disk": (fixtures.five_disk(), 1.0),
        "hull": (r_hull(fixtures.seeded_points(20, seed), 2.0), 2.0),
    }
    out, ok = {}, True
    for name, (B, r) in bodies.items():
        seq = [is_r_convex(B, f * r).certified for f in (1.0, 1.1, 2.0, 10.0)]
        ok &= all(seq)
        out[name] = seq
    return ok, out


def _modulus_oracle(seed):
    D = fixtures.unit_disk()
    h = 0.02
    out, ok = {}, True
    for e in (0.5, 1.0):
        b = brute_delta(D, e, SampleConfig(seed=seed), h=h).delta
        d = delta_omega(D, e).delta
        ok &= abs(b - d) <= 2 * h
        out[f"eps={e:g}"] = [d, b]
    sq = brute_delta(fixtures.unit_square(), 0.5, SampleConfig(seed=seed), h=h).delta
    ok &= abs(sq) <= 2 * h
    return ok, out


SUITES = {
    "theorems": (
        ("ball_modulus_exact", _ball_modulus),
        ("limit_constant", _limit_constant),
        ("threshold_theorem", _threshold),
        ("strict_ball_inequality", _strict_ball),
        ("lens_identities", _lens_identities),
        ("lens_oracle", _lens_oracle),
        ("r_hull_pipeline", _hull_pipeline),
        ("refinement_recurrence", _refinement),
        ("conditions_A_C", _conditions),
        ("convexity_needed", _convexity_needed),
        ("radius_monotonicity", _monotone),
        ("modulus_oracle", _modulus_oracle),
    ),
}


def _clean(v):
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def run_suite(name: str, seed: int = 0) -> tuple[list[CheckOutcome], float]:
    """Run every check of suite ``name``; returns outcomes and wall time.

    A check that raises is recorded as failed with the exception text.
    """
    if name not in SUITES:
        raise KeyError(name)
    t0 = time.perf_counter()
    out = []
    for cname, fn in SUITES[name]:
        try:
            ok, values = fn(int(seed))
            out.append(CheckOutcome(cname, bool(ok), _clean(values)))
        except Exception as e:  # noqa: BLE001 - reported, not swallowed
            out.append(CheckOutcome(cname, False, {}, f"{type(e).__name__}: {e}"))
    return out, time.perf_counter() - t0


def suite_report(name: str, seed: int, outcomes) -> dict:
    return {
        "suite": name,
        "seed": int(seed),
        "passed": all(o.passed for o in outcomes),
        "checks": [o.to_json() for o in outcomes],
    }


def format_table(outcomes) -> str:
    w = max(len(o.name) for o in outcomes)
    lines = [f"{'check':<{w}}  result"]
    for o in outcomes:
        lines.append(f"{o.name:<{w}}  {'PASS' if o.passed else 'FAIL'}" + (f"  ({o.error})" if o.error else ""))
    return "\n".join(lines)
