"""Moduli of convexity of a set and the small-epsilon limit.

``delta_omega(body, eps)`` estimates the largest ``delta`` such that any
two points of the body at distance ``eps`` have a midpoint at depth at
least ``delta``; ``delta_circ(body, x, eps)`` is the pointwise variant
that only moves the midpoint perpendicular to the chord.  Pairs are
searched on the boundary, which is where the infimum sits for closed
convex bodies; the brute-force oracle in :mod:`scgeom.oracles` cross-checks
that on every fixture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bodies import Body, DiskPolygon, ImplicitBody
from .errors import DomainError, ScheduleError
from .geometry_core import as_point, ball_limit_constant, ball_modulus, perp2, perp_directions, sphere_directions, unit
from .reports import CERTIFIED, INCONCLUSIVE, REFUTED, RConvexityReport, json_number

INF = math.inf


@dataclass(frozen=True)
class Budget:
    """Sampling effort of the modulus estimators.

    Attributes
    ----------
    n_boundary : int
        Boundary parameter samples for the pair search.
    n_angles : int
        Angular samples of the circle ``|y - x| = eps`` in ``delta_circ``.
    keep : int
        Candidate pairs refined after the coarse pass.
    rounds : int
        Zoom rounds of the local refinement.
    n_perp : int
        Extra perpendicular directions sampled when ``d > 2``.
    """

    n_boundary: int = 512
    n_angles: int = 1024
    keep: int = 8
    rounds: int = 8
    n_perp: int = 8
    seed: int = 0


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class ModulusSample:
    eps: float
    delta: float
    witness_pair: tuple | None = None
    error: float = 0.0

    @property
    def vacuous(self) -> bool:
        return self.delta == INF

    @property
    def ratio(self) -> float:
        if math.isinf(self.delta):
            return self.delta
        return self.delta / (self.eps * self.eps)


@dataclass(frozen=True)
class LimitEstimate:
    """Dyadic samples of ``delta(eps) / eps**2``.

    ``value`` is the ratio at the smallest epsilon (no extrapolation
    model); ``cauchy_residual`` is the largest jump between consecutive
    ratios over the last three steps.
    """

    value: float
    samples: tuple
    cauchy_residual: float
    schedule: tuple
    moduli: tuple = field(default=(), repr=False)


def dyadic_schedule(eps0: float, k: int) -> np.ndarray:
    if not eps0 > 0 or k < 0:
        raise DomainError("need eps0 > 0 and k >= 0")
    return eps0 * 0.5 ** np.arange(k + 1)


# ---------------------------------------------------------------------------
# delta_omega
# ---------------------------------------------------------------------------


def _single_disk(body):
    return isinstance(body, DiskPolygon) and not body.degenerate and len(body.generators) == 1


def _disk_sample(body: DiskPolygon, eps: float) -> ModulusSample:
    R = body.radius
    c = body.generators[0]
    if eps > 2 * R:
        return ModulusSample(eps, INF)
    half = math.asin(min(eps / (2 * R), 1.0))
    x = c + R * np.array([math.cos(-half), math.sin(-half)])
    y = c + R * np.array([math.cos(half), math.sin(half)])
    return ModulusSample(eps, ball_modulus(R, eps), (x, y), body.error_estimate())


def _boundary_params(body, n):
    u = np.arange(n) / n
    cum = getattr(body, "_cum", None)
    if cum is not None and cum[-1] > 0:
        u = np.unique(np.concatenate([u, cum[:-1] / cum[-1]]))
    return u


def _bisect_param(curve, X, ulo, uhi, eps, iters=60):
    """Parameters ``u`` in ``[ulo, uhi]`` with ``|curve(u) - X| = eps``.

    Bracketed Illinois iteration; assumes ``|curve(u) - X| - eps`` changes
    sign on each bracket.
    """
    a, b = np.asarray(ulo, dtype=float).copy(), np.asarray(uhi, dtype=float).copy()
    fa = np.linalg.norm(curve(a) - X, axis=1) - eps
    fb = np.linalg.norm(curve(b) - X, axis=1) - eps
    stop = 1e-15 * max(eps, 1.0)
    live = np.ones(len(a), dtype=bool)
    for it in range(iters):
        live &= (np.abs(fb) > stop) & (np.abs(b - a) > 1e-16)
        if not live.any():
            break
        k = np.nonzero(live)[0]
        den = fb[k] - fa[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            c = np.where(den != 0, (a[k] * fb[k] - b[k] * fa[k]) / den, 0.5 * (a[k] + b[k]))
        lo_, hi_ = np.minimum(a[k], b[k]), np.maximum(a[k], b[k])
        # every fourth step bisects, guarding against slow one-sided runs
        bad = ~((c > lo_) & (c < hi_)) | (it % 4 == 3)
        c = np.where(bad, 0.5 * (a[k] + b[k]), c)
        fc = np.linalg.norm(curve(c) - X[k], axis=1) - eps
        flip = np.sign(fc) != np.sign(fb[k])
        na = np.where(flip, b[k], a[k])
        nfa = np.where(flip, fb[k], np.where(bad, fa[k], 0.5 * fa[k]))
        a[k], fa[k] = na, nfa
        b[k], fb[k] = c, fc
    return np.where(np.abs(fb) <= np.abs(fa), b, a)


def _pair_search(curve, depth, u, eps, budget):
    """Minimum midpoint depth over curve pairs at distance ``eps``.

    ``curve`` maps parameters in ``[0, 1)`` (periodic) to points, ``depth``
    maps points to signed depth.  Returns ``(best, x, y)``.
    """
    B = curve(u)
    n = len(u)
    I, J = _kernels.crossing_brackets(B, eps)
    if len(I) == 0:
        return INF, None, None
    J1 = (J + 1) % n
    ux = u[I]
    ulo = u[J]
    uhi = np.where(J1 > J, u[J1], u[J1] + 1.0)
    uy = _bisect_param(curve, B[I], ulo, uhi, eps)
    Y = curve(uy)
    D = depth(0.5 * (B[I] + Y))
    order = np.lexsort((uy, ux, D))
    best = float(D[order[0]])
    bx, by = B[I[order[0]]], Y[order[0]]
    # local zoom around the best coarse candidates, all refined together
    _, first = np.unique(I[order[: 4 * budget.keep]], return_index=True)
    pick = order[: 4 * budget.keep][np.sort(first)][: budget.keep]
    cx, cy = ux[pick].copy(), uy[pick].copy()
    K = len(pick)
    lin = np.linspace(-1.0, 1.0, 9)
    du = 1.0 / n
    for _ in range(budget.rounds):
        xs = (cx[:, None] + du * lin[None, :]).ravel()
        X = curve(xs)
        w = np.minimum(3 * du, 0.5 * np.abs(cy - cx))
        lo = np.repeat(cy - w, 9)
        hi = np.repeat(cy + w, 9)
        glo = np.linalg.norm(curve(lo) - X, axis=1) - eps
        ghi = np.linalg.norm(curve(hi) - X, axis=1) - eps
        ok = np.sign(glo) != np.sign(ghi)
        if not ok.any():
            break
        ys = np.full(len(xs), np.nan)
        ys[ok] = _bisect_param(curve, X[ok], lo[ok], hi[ok], eps)
        Dk = np.full(len(xs), INF)
        Yk = np.zeros_like(X)
        Yk[ok] = curve(ys[ok])
        Dk[ok] = depth(0.5 * (X[ok] + Yk[ok]))
        Dk = Dk.reshape(K, 9)
        j = np.argmin(Dk, axis=1)
        rows = np.arange(K)
        moved = np.isfinite(Dk[rows, j])
        flat = rows * 9 + j
        g = int(np.argmin(Dk[rows, j]))
        if Dk[g, j[g]] < best:
            best, bx, by = float(Dk[g, j[g]]), X[flat[g]], Yk[flat[g]]
        cx = np.where(moved, xs[flat], cx)
        cy = np.where(moved, ys[flat], cy)
        du /= 4
    return best, bx, by


def _sections(body):
    """Planar sections through the body's center used when ``d > 2``."""
    d = body.dim
    c = body.interior_point()
    for i in range(d):
        for j in range(i + 1, d):
            e1, e2 = np.zeros(d), np.zeros(d)
            e1[i] = e2[j] = 1.0
            yield c, e1, e2


def delta_omega(body: Body, eps: float, budget: Budget = DEFAULT_BUDGET) -> ModulusSample:
    """Estimate the modulus of convexity of ``body`` at ``eps``.

    Returns the ``+inf`` sentinel when no two points are ``eps`` apart
    (the defining condition is vacuous) and ``-inf`` when some midpoint
    falls outside the body.  Values within ``abs_geom`` of zero are
    reported as zero.  Guarantees assume a closed convex body.
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    eps = float(eps)
    # bodies are immutable, so results can be memoised on the instance
    cache = body.__dict__.setdefault("_modulus_cache", {})
    key = (eps, budget)
    if key not in cache:
        cache[key] = _delta_omega(body, eps, budget)
    return cache[key]


def _delta_omega(body, eps, budget):
    if _single_disk(body):
        return _disk_sample(body, eps)
    if getattr(body, "degenerate", None) == "point":
        return ModulusSample(eps, INF)
    tol = body.tol.abs_geom
    err = body.error_estimate()
    if body.dim == 2:
        curve = body.boundary_points
        best, x, y = _pair_search(curve, body.boundary_distance_many, _boundary_params(body, budget.n_boundary), eps, budget)
    else:
        best, x, y = INF, None, None
        for origin, e1, e2 in _sections(body):
            sec = body.section(origin, e1, e2)
            E = np.array([e1, e2])

            def curve(u, sec=sec, E=E, origin=origin):
                return origin + sec.boundary_points(u) @ E

            b, bx, by = _pair_search(curve, body.boundary_distance_many, _boundary_params(sec, budget.n_boundary), eps, budget)
            if b < best:
                best, x, y = b, bx, by
    if best == INF:
        return ModulusSample(eps, INF, None, err)
    if best < -tol:
        return ModulusSample(eps, -INF, (x, y), err)
    if abs(best) <= tol:
        best = 0.0
    return ModulusSample(eps, best, (x, y), err)


# ---------------------------------------------------------------------------
# delta_circ
# ---------------------------------------------------------------------------


def _circ_candidates_2d(body, x, eps, budget):
    th = 2 * math.pi * np.arange(budget.n_angles) / budget.n_angles
    Y = x + eps * np.column_stack([np.cos(th), np.sin(th)])
    ins = body.contains_many(Y)
    # exact feasibility boundaries between samples
    flip = np.nonzero(ins != np.roll(ins, -1))[0]
    extra = []
    if len(flip):
        a = th[flip]
        b = a + 2 * math.pi / budget.n_angles
        a_in = ins[flip]
        for _ in range(60):
            m = 0.5 * (a + b)
            mi = body.contains_many(x + eps * np.column_stack([np.cos(m), np.sin(m)]))
            move_a = mi == a_in
            a = np.where(move_a, m, a)
            b = np.where(move_a, b, m)
        extra = np.where(a_in, a, b)
    th = np.concatenate([th[ins], np.asarray(extra, dtype=float)])
    return th


def _circ_values(body, x, eps, th):
    Y = x + eps * np.column_stack([np.cos(th), np.sin(th)])
    M = 0.5 * (x + Y)
    V = np.column_stack([-np.sin(th), np.cos(th)])
    mid_in = body.contains_many(M)
    t1 = body.ray_exit(M, V)
    t2 = body.ray_exit(M, -V)
    vals = np.minimum(t1, t2)
    vals = np.where(mid_in, vals, -INF)
    sign = np.where(t1 <= t2, 1.0, -1.0)
    return vals, Y, sign[:, None] * V


def _delta_circ_2d(body, x, eps, budget):
    th = _circ_candidates_2d(body, x, eps, budget)
    if len(th) == 0:
        return INF, None
    vals, Y, V = _circ_values(body, x, eps, th)
    j = int(np.argmin(vals))
    best, wit = float(vals[j]), (Y[j], V[j])
    if best == -INF:
        return best, wit
    dth = 2 * math.pi / budget.n_angles
    c = th[j]
    for _ in range(budget.rounds):
        cand = c + np.linspace(-dth, dth, 17)
        Yc = x + eps * np.column_stack([np.cos(cand), np.sin(cand)])
        cand = cand[body.contains_many(Yc)]
        if len(cand) == 0:
            break
        v, Yk, Vk = _circ_values(body, x, eps, cand)
        k = int(np.argmin(v))
        if v[k] < best:
            best, wit = float(v[k]), (Yk[k], Vk[k])
        c = cand[k]
        dth /= 4
    return best, wit


def _delta_circ_nd(body, x, eps, budget):
    D = sphere_directions(body.dim, budget.n_angles, budget.seed)
    Y = x + eps * D
    Y = Y[body.contains_many(Y)]
    if len(Y) == 0:
        return INF, None
    best, wit = INF, None
    for y in Y:
        m = 0.5 * (x + y)
        V = perp_directions(y - x, k=budget.n_perp, seed=budget.seed)
        if not body.contains(m):
            return -INF, (y, V[0])
        t = body.ray_exit(np.repeat(m[None, :], len(V), axis=0), V)
        k = int(np.argmin(t))
        if t[k] < best:
            best, wit = float(t[k]), (y, V[k])
    return best, wit


def delta_circ_witness(body: Body, x, eps: float, budget: Budget = DEFAULT_BUDGET):
    """``delta_circ`` together with the minimising ``(y, v)`` (or ``None``)."""
    x = as_point(x, body.dim)
    if not body.contains(x):
        raise DomainError("probe point must belong to the body")
    if eps < 0:
        raise DomainError("eps must be >= 0")
    if eps == 0:
        return max(body.boundary_distance(x), 0.0), None
    if body.dim == 2:
        val, wit = _delta_circ_2d(body, x, float(eps), budget)
    else:
        val, wit = _delta_circ_nd(body, x, float(eps), budget)
    if math.isfinite(val) and abs(val) <= body.tol.abs_geom:
        val = 0.0
    return val, wit


def delta_circ(body: Body, x, eps: float, budget: Budget = DEFAULT_BUDGET) -> float:
    """Directional modulus at ``x``: the largest ``delta`` such that every
    ``y`` of the body with ``|x - y| = eps`` and every unit ``v``
    orthogonal to ``x - y`` give ``(x + y)/2 + delta v`` in the body.

    ``+inf`` when no ``y`` is at distance ``eps`` (nothing to check);
    ``-inf`` when some chord midpoint leaves the body.  In ``d > 2`` the
    ``v`` quantifier is sampled, so the result can only overestimate.
    """
    return delta_circ_witness(body, x, eps, budget)[0]


# ---------------------------------------------------------------------------
# limits and thresholds
# ---------------------------------------------------------------------------


def _residual(ratios):
    tail = ratios[-4:]
    if len(tail) < 2:
        return 0.0
    return float(np.max(np.abs(np.diff(tail))))


def limit_estimate(body: Body, eps0: float, k: int, budget: Budget = DEFAULT_BUDGET) -> LimitEstimate:
    """Ratios ``delta_omega(eps_j) / eps_j**2`` for ``eps_j = eps0 / 2**j``."""
    moduli = []
    for e in dyadic_schedule(eps0, k):
        s = delta_omega(body, float(e), budget)
        if s.vacuous:
            raise ScheduleError(f"no pair of points at distance {e}; eps0 exceeds the diameter")
        moduli.append(s)
    ratios = [s.ratio for s in moduli]
    return LimitEstimate(
        value=float(ratios[-1]),
        samples=tuple((s.eps, s.ratio) for s in moduli),
        cauchy_residual=_residual(ratios),
        schedule=(float(eps0), int(k)),
        moduli=tuple(moduli),
    )


def default_eps0(body: Body) -> float:
    return min(1.0, body.diameter() / 4)


def _margin(sample: ModulusSample) -> float:
    return 2 * sample.error / (sample.eps * sample.eps)


def threshold_test(body: Body, r: float, eps0: float | None = None, k: int = 8,
                   budget: Budget = DEFAULT_BUDGET, residual_tol: float = 1e-3) -> RConvexityReport:
    """Compare sampled ratios ``delta_omega / eps**2`` against ``1/(8r)``.

    Refuted when some ratio falls below the threshold by more than the
    sampling margin (``2 * error / eps**2``), certified when none does and
    the ratios have settled (``cauchy_residual < residual_tol``) on a body
    flagged convex, inconclusive otherwise.
    """
    thr = ball_limit_constant(r)
    if eps0 is None:
        eps0 = default_eps0(body)
    est = limit_estimate(body, eps0, k, budget)
    rows = tuple((s.eps, s.delta, s.ratio) for s in est.moduli)
    for s in est.moduli:
        if s.ratio < thr - _margin(s):
            return RConvexityReport(r, REFUTED, "threshold", s.witness_pair, rows,
                                    {"value": est.value, "cauchy_residual": est.cauchy_residual})
    ok = body.convex and est.cauchy_residual < residual_tol
    return RConvexityReport(r, CERTIFIED if ok else INCONCLUSIVE, "threshold", None, rows,
                            {"value": est.value, "cauchy_residual": est.cauchy_residual})


@dataclass(frozen=True)
class ProbeVerdict:
    point: np.ndarray
    passed: bool
    ratios: tuple
    witness: tuple | None = None


@dataclass(frozen=True)
class CircThresholdResult:
    verdict: str
    probes: tuple
    r: float

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "r": json_number(self.r),
            "probes": [
                {"point": p.point.tolist(), "passed": p.passed,
                 "ratios": [[json_number(e), json_number(q)] for e, q in p.ratios]}
                for p in self.probes
            ],
        }


def delta_circ_threshold_test(body: Body, probe_points, r: float, eps_list=None,
                              budget: Budget = DEFAULT_BUDGET) -> CircThresholdResult:
    """Per-probe comparison of ``delta_circ / eps**2`` with ``1/(8r)``.

    A probe fails when any sampled ratio falls below the threshold by more
    than the sampling margin ``2 * (error + abs_geom) / eps**2``.  The combined verdict is refuted if a probe
    fails; it is certified only when every probe passes and the body is
    flagged convex (without convexity the criterion proves nothing).
    """
    thr = ball_limit_constant(r)
    if eps_list is None:
        eps_list = dyadic_schedule(default_eps0(body), 6)
    eps_list = [float(e) for e in eps_list]
    # feasible y are classified with the membership slack, which moves
    # midpoints by up to half of it
    err = body.error_estimate() + body.tol.abs_geom
    probes = []
    for p in np.atleast_2d(np.asarray(probe_points, dtype=float)):
        if not body.contains(p):
            raise DomainError(f"probe point {p.tolist()} is outside the body")
        ratios, passed, wit = [], True, None
        for e in eps_list:
            val, w = delta_circ_witness(body, p, e, budget)
            q = val / (e * e) if math.isfinite(val) else val
            ratios.append((e, q))
            if passed and q < thr - 2 * err / (e * e):
                passed, wit = False, w
        probes.append(ProbeVerdict(p.copy(), passed, tuple(ratios), wit))
    if any(not pv.passed for pv in probes):
        verdict = REFUTED
    elif body.convex:
        verdict = CERTIFIED
    else:
        verdict = INCONCLUSIVE
    return CircThresholdResult(verdict, tuple(probes), float(r))
