"""r-convexity certification, r-hulls, local checks and radius refinement.

Exact verdicts exist for convex polygons and disk-polygons.  Implicit
bodies can be refuted with a witness or left inconclusive by the support
check; the modulus threshold test (``method="threshold"``) is the only
route to a positive verdict for them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import Body, ConvexPolygon, DiskPolygon, ImplicitBody, intersect_disks
from .errors import DomainError, InfeasibleError, NoContainingBallError
from .geometry_core import DEFAULT_TOL, as_point, as_points, ball_modulus, perp2, sphere_directions, unit
from .lens_arc import arc_planes, arc_sample, short_arc
from .modulus import Budget, DEFAULT_BUDGET, _bisect_param, dyadic_schedule, threshold_test
from .reports import CERTIFIED, INCONCLUSIVE, REFUTED, RConvexityReport

log = logging.getLogger(__name__)


def _lexmin(P):
    P = np.atleast_2d(P)
    return P[np.lexsort(P.T[::-1])[0]]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a sampled check; truthy when the check passed.

    ``witness`` holds the offending configuration when it failed and
    ``skipped`` lists parameters that could not be tested.
    """

    passed: bool
    witness: tuple | None = None
    skipped: tuple = ()
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.passed)


# ---------------------------------------------------------------------------
# spherical support
# ---------------------------------------------------------------------------


def _features_far_from(body, q):
    """Points whose containment in any ball centered at ``q`` decides the
    containment of ``body``."""
    if isinstance(body, ConvexPolygon):
        return body.vertices
    if isinstance(body, DiskPolygon):
        if body.degenerate:
            return body.point[None, :]
        pts = [a.start for a in body.arcs] + [a.end for a in body.arcs]
        for a in body.arcs:
            w = a.center - q
            if np.linalg.norm(w) > 0:
                th = math.atan2(w[1], w[0])
                if a.contains_angle(th):
                    pts.append(a.point(th))
            else:
                pts.append(a.midpoint)
        return np.array(pts)
    return body.boundary_samples(720 if body.dim == 2 else 2000)


def spherical_support_witness(body: Body, x, v, r: float, check_normal: bool = True):
    """Lexicographically smallest feature outside ``B(x - r v, r)``, or ``None``."""
    x = as_point(x, body.dim)
    v = unit(as_point(v, body.dim))
    if not r > 0:
        raise DomainError("radius must be positive")
    if check_normal and isinstance(body, (ConvexPolygon, DiskPolygon)):
        if not body.normal_cone(x).contains(v, 1e-7):
            raise DomainError(f"{v.tolist()} is not a unit normal at {x.tolist()}")
    q = x - r * v
    F = _features_far_from(body, q)
    bad = np.linalg.norm(F - q, axis=1) > r + body.tol.abs_geom
    if not bad.any():
        return None
    return _lexmin(F[bad])


def spherical_support_at(body: Body, x, v, r: float) -> bool:
    """Whether the body lies in the ball ``B(x - r v, r)`` (within
    ``abs_geom``).  ``v`` must be an outward unit normal at ``x``."""
    return spherical_support_witness(body, x, v, r) is None


# ---------------------------------------------------------------------------
# global test
# ---------------------------------------------------------------------------


def _polygon_report(body: ConvexPolygon, r):
    if body.degenerate == "point":
        return RConvexityReport(r, CERTIFIED, "support_condition")
    edges = body.edges()
    lens_ = [float(np.linalg.norm(b - a)) for a, b in edges]
    k = int(np.argmax(lens_))
    a, b = edges[k]
    x = 0.5 * (a + b)
    v = -perp2(unit(b - a))  # outward for counterclockwise edges
    if body.degenerate == "segment":
        v = perp2(unit(b - a))
    q = x - r * v
    p = _lexmin(np.array([a, b]))
    excess = float(np.linalg.norm(p - q)) - r
    if excess <= body.tol.abs_geom:
        return RConvexityReport(r, INCONCLUSIVE, "flat_edge", None, (), {"excess": excess})
    return RConvexityReport(r, REFUTED, "flat_edge", (x, v, p), (), {"excess": excess})


def _disk_polygon_report(body: DiskPolygon, r):
    if body.degenerate or body.radius <= r * (1 + body.tol.rel_geom):
        return RConvexityReport(r, CERTIFIED, "disk_polygon_radius")
    arc = max(body.arcs, key=lambda a: (a.sweep, -a.start_angle))
    x = arc.midpoint
    v = unit(x - arc.center)
    q = x - r * v
    p, dist = body.farthest_from(q)
    excess = dist - r
    if excess <= body.tol.abs_geom:
        return RConvexityReport(r, INCONCLUSIVE, "disk_polygon_radius", None, (), {"excess": excess})
    return RConvexityReport(r, REFUTED, "disk_polygon_radius", (x, v, p), (), {"excess": excess})


def _midpoint_violation(body, n=256):
    """A boundary pair ``(x, y, midpoint)`` with the midpoint outside the
    body, or ``None``."""
    S = body.boundary_samples(n)
    for s in range(0, len(S), 64):
        M = 0.5 * (S[s:s + 64, None, :] + S[None, :, :])
        out = ~body.contains_many(M.reshape(-1, body.dim)).reshape(M.shape[:2])
        if out.any():
            i, j = np.unravel_index(int(np.argmax(out)), out.shape)
            return S[s + i], S[j], M[i, j]
    return None


def _implicit_support(body: ImplicitBody, r, n=512):
    """Sampled support check with bracketed normals.

    The normal at a boundary sample is only known to lie between the
    normals of the two adjacent chords, so a violation counts only if it
    holds for both bracket ends and their bisector.
    """
    if body.dim != 2:
        return None
    S = body.boundary_points(np.arange(n) / n)
    F = body.boundary_points((np.arange(4 * n) + 0.5) / (4 * n))
    F = np.concatenate([S, F])
    prev, nxt = np.roll(S, 1, axis=0), np.roll(S, -1, axis=0)
    n1 = -np.column_stack([-(S - prev)[:, 1], (S - prev)[:, 0]])
    n2 = -np.column_stack([-(nxt - S)[:, 1], (nxt - S)[:, 0]])
    n1 /= np.linalg.norm(n1, axis=1, keepdims=True)
    n2 /= np.linalg.norm(n2, axis=1, keepdims=True)
    mid = n1 + n2
    mid /= np.linalg.norm(mid, axis=1, keepdims=True)
    tol = body.tol.abs_geom + 2 * body.tol.grid_h**2
    best = None
    for i in range(n):
        worst = np.inf
        for v in (n1[i], n2[i], mid[i]):
            q = S[i] - r * v
            worst = min(worst, float(np.max(np.linalg.norm(F - q, axis=1))) - r)
        if worst > tol and (best is None or worst > best[0]):
            q = S[i] - r * mid[i]
            dist = np.linalg.norm(F - q, axis=1)
            best = (worst, S[i], mid[i], _lexmin(F[dist - r >= worst]))
    if best is None:
        return None
    return best[1:]


def _implicit_report(body: ImplicitBody, r):
    pair = _midpoint_violation(body)
    if pair is not None:
        # a chord midpoint outside the body refutes every radius at once;
        # the witness is (x, y, midpoint)
        return RConvexityReport(r, REFUTED, "support_condition", pair, (), {"witness_kind": "midpoint"})
    sup = _implicit_support(body, r)
    if sup is not None:
        return RConvexityReport(r, REFUTED, "support_condition", sup, (), {"witness_kind": "support"})
    return RConvexityReport(r, INCONCLUSIVE, "support_condition")


def is_r_convex(body: Body, r: float, method: str = "auto", budget: Budget = DEFAULT_BUDGET,
                eps0: float | None = None, k: int = 8) -> RConvexityReport:
    """Decide (or try to) whether ``body`` is ``r``-convex.

    ``method`` is ``"support"`` (global spherical-support condition),
    ``"threshold"`` (modulus ratios against ``1/(8r)``) or ``"auto"``
    (the same as support).  Exact bodies get exact verdicts; an implicit
    body is refuted with a witness or left inconclusive, since sampled
    boundary points cannot prove a statement about all of them.  Only
    the threshold method certifies implicit convex bodies.
    """
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    if method not in ("auto", "support", "threshold"):
        raise DomainError(f"unknown method {method!r}")
    if method == "threshold":
        return threshold_test(body, r, eps0, k, budget)
    if isinstance(body, ConvexPolygon):
        return _polygon_report(body, r)
    if isinstance(body, DiskPolygon):
        return _disk_polygon_report(body, r)
    return _implicit_report(body, r)


# ---------------------------------------------------------------------------
# r-hull
# ---------------------------------------------------------------------------


def r_hull(points, r: float, tol=DEFAULT_TOL) -> DiskPolygon:
    """Intersection of all closed ``r``-disks containing the planar points.

    Uses the feasible-center set ``C = intersect_disks(points, r)``: the
    hull is the intersection of the ``r``-disks centered at the vertices of
    ``C`` (a single disk when ``C`` is a point; the point itself for one
    input point).  Raises :class:`NoContainingBallError` when no disk of
    radius ``r`` contains the points.
    """
    P = as_points(points, 2)
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    try:
        C = intersect_disks(P, r, tol)
    except InfeasibleError as exc:
        raise NoContainingBallError(
            f"no disk of radius {r} contains the points (enclosing radius {exc.enclosing_radius})",
            enclosing_radius=exc.enclosing_radius,
        ) from None
    if C.degenerate:
        return DiskPolygon([C.point], r, tol)
    if len(C.arcs) == 1:
        p = C.generators[0]
        e = np.array([r, 0.0])
        return DiskPolygon([p - e, p + e], r, tol)
    return DiskPolygon(C.vertices(), r, tol)


# ---------------------------------------------------------------------------
# pair sampling shared by the sampled checks
# ---------------------------------------------------------------------------


def _lattice(body, n):
    lo, hi = body.bbox()
    axes = [np.linspace(l, h, n) for l, h in zip(lo, hi)]
    G = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, body.dim)
    return G[body.contains_many(G)]


def _boundary_pairs(body, eps, n_boundary, max_pairs):
    if body.dim != 2:
        return np.empty((0, 2, body.dim))
    from . import _kernels

    u = np.arange(n_boundary) / n_boundary
    B = body.boundary_points(u)
    I, J = _kernels.crossing_brackets(B, eps)
    if len(I) == 0:
        return np.empty((0, 2, 2))
    if len(I) > max_pairs:
        sel = np.linspace(0, len(I) - 1, max_pairs).round().astype(int)
        I, J = I[sel], J[sel]
    J1 = (J + 1) % n_boundary
    uhi = np.where(J1 > J, u[J1], u[J1] + 1.0)
    uy = _bisect_param(body.boundary_points, B[I], u[J], uhi, eps)
    return np.stack([B[I], body.boundary_points(uy)], axis=1)


def _lattice_pairs(body, eps, n_lattice, n_dirs, max_pairs):
    G = _lattice(body, n_lattice)
    if len(G) == 0:
        return np.empty((0, 2, body.dim))
    if len(G) > max_pairs:
        G = G[np.linspace(0, len(G) - 1, max_pairs).round().astype(int)]
    D = sphere_directions(body.dim, n_dirs)
    X = np.repeat(G, len(D), axis=0)
    Y = X + eps * np.tile(D, (len(G), 1))
    ok = body.contains_many(Y)
    return np.stack([X[ok], Y[ok]], axis=1)


def _sample_pairs(body, eps, n_boundary=256, max_pairs=128, n_lattice=9, n_dirs=8):
    P = [_boundary_pairs(body, eps, n_boundary, max_pairs), _lattice_pairs(body, eps, n_lattice, n_dirs, max_pairs)]
    return np.concatenate([p for p in P if len(p)]) if any(len(p) for p in P) else np.empty((0, 2, body.dim))


def _default_eps_list(body):
    return dyadic_schedule(min(1.0, body.diameter() / 4), 8)[1:]


def _split_eps(body, eps_list):
    diam = body.diameter()
    keep, skipped = [], []
    for e in eps_list:
        e = float(e)
        if not e > 0:
            raise DomainError("epsilons must be positive")
        if e > diam + body.tol.abs_geom:
            log.info("eps=%g exceeds the diameter %g; skipped", e, diam)
            skipped.append(e)
        else:
            keep.append(e)
    return keep, tuple(skipped)


def _arc_points(x, y, r, levels, n_planes=8):
    pts = [arc_sample(short_arc(x, y, r, w), levels) for w in arc_planes(x, y, n_planes)]
    return np.concatenate(pts)


def _arc_points_2d(X, Y, r, levels):
    """Both minor ``r``-arcs of every planar pair, ``2**levels + 1`` equally
    spaced points each; shape ``(pairs, 2 * (2**levels + 1), 2)``."""
    M = 0.5 * (X + Y)
    U = Y - X
    d = np.linalg.norm(U, axis=1)
    N = np.column_stack([-U[:, 1], U[:, 0]]) / d[:, None]
    h = np.sqrt(np.maximum(r * r - d * d / 4, 0.0))
    t = np.linspace(0.0, 1.0, 2**levels + 1)
    out = []
    for sign in (1.0, -1.0):
        C = M + sign * h[:, None] * N
        a = np.arctan2(X[:, 1] - C[:, 1], X[:, 0] - C[:, 0])
        b = np.arctan2(Y[:, 1] - C[:, 1], Y[:, 0] - C[:, 0])
        sweep = (b - a + np.pi) % (2 * np.pi) - np.pi
        th = a[:, None] + t[None, :] * sweep[:, None]
        out.append(C[:, None, :] + r * np.stack([np.cos(th), np.sin(th)], axis=-1))
    return np.concatenate(out, axis=1)


# ---------------------------------------------------------------------------
# sequence conditions
# ---------------------------------------------------------------------------


def condition_A_check(body: Body, r: float, eps_list=None, levels: int = 6, max_pairs: int = 128) -> CheckResult:
    """For sampled pairs ``x, y`` of the body at each distance ``eps_i``,
    check that both boundary arcs of their ``r``-lens lie in the body.

    Epsilons larger than the diameter are skipped (and logged).  A failure
    is certain; a pass is limited by the sampling.
    """
    if eps_list is None:
        eps_list = _default_eps_list(body)
    eps_list, skipped = _split_eps(body, eps_list)
    for e in eps_list:
        if e > 2 * r:
            continue
        pairs = _sample_pairs(body, e, max_pairs=max_pairs)
        if body.dim == 2 and len(pairs):
            S = _arc_points_2d(pairs[:, 0], pairs[:, 1], r, levels)
            out = ~body.contains_many(S.reshape(-1, 2)).reshape(S.shape[:2])
            bad = np.flatnonzero(out.any(axis=1))
            if len(bad):
                k = bad[0]
                return CheckResult(False, (pairs[k, 0], pairs[k, 1], _lexmin(S[k][out[k]])), skipped, {"eps": e})
            continue
        for x, y in pairs:
            S = _arc_points(x, y, r, levels)
            out = ~body.contains_many(S)
            if out.any():
                return CheckResult(False, (x, y, _lexmin(S[out])), skipped, {"eps": e})
    return CheckResult(True, None, skipped)


def condition_C_check(body: Body, eps_list=None, n_segment: int = 33, max_pairs: int = 128) -> CheckResult:
    """For sampled pairs at each distance ``eps_i``, check that the
    segment between them lies in the body."""
    if eps_list is None:
        eps_list = _default_eps_list(body)
    eps_list, skipped = _split_eps(body, eps_list)
    t = np.linspace(0.0, 1.0, n_segment)[:, None]
    for e in eps_list:
        pairs = _sample_pairs(body, e, max_pairs=max_pairs)
        if len(pairs) == 0:
            continue
        S = pairs[:, None, 0] + t[None] * (pairs[:, None, 1] - pairs[:, None, 0])
        out = ~body.contains_many(S.reshape(-1, body.dim)).reshape(S.shape[:2])
        bad = np.flatnonzero(out.any(axis=1))
        if len(bad):
            k = bad[0]
            return CheckResult(False, (pairs[k, 0], pairs[k, 1], _lexmin(S[k][out[k]])), skipped, {"eps": e})
    return CheckResult(True, None, skipped)


# ---------------------------------------------------------------------------
# local checks
# ---------------------------------------------------------------------------


class _Restricted(Body):
    """``body`` intersected with the closed ball ``B(x, rho)``."""

    def __init__(self, body, x, rho):
        self.base, self.x, self.rho = body, x, rho
        self.dim, self.tol = body.dim, body.tol

    def contains_many(self, P):
        P = as_points(P, self.dim)
        return self.base.contains_many(P) & (np.linalg.norm(P - self.x, axis=1) <= self.rho + self.tol.abs_geom)


def _local_points(body, x, rho, n_boundary=2048, n_lattice=9, cap=24):
    pts = []
    if body.dim == 2:
        B = body.boundary_points(np.arange(n_boundary) / n_boundary)
        B = B[np.linalg.norm(B - x, axis=1) <= rho]
        if len(B) > cap:
            B = B[np.linspace(0, len(B) - 1, cap).round().astype(int)]
        pts.append(B)
    axes = [np.linspace(-rho, rho, n_lattice)] * body.dim
    G = x + np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, body.dim)
    G = G[(np.linalg.norm(G - x, axis=1) <= rho) & body.contains_many(G)]
    pts.append(G)
    pts.append(x[None, :])
    return np.concatenate(pts)


def local_r_convex_check(body: Body, x, nbhd_radius: float, r: float, levels: int = 6) -> CheckResult:
    """Sampled test that ``B(x, nbhd_radius)`` intersected with the body is
    ``r``-convex: every short ``r``-arc between sampled points of the
    intersection must stay in it."""
    x = as_point(x, body.dim)
    if not body.contains(x):
        raise DomainError("x must belong to the body")
    K = _Restricted(body, x, nbhd_radius)
    P = _local_points(body, x, nbhd_radius)
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            p, q = P[i], P[j]
            dist = np.linalg.norm(p - q)
            if dist == 0 or dist > 2 * r:
                continue
            S = _arc_points(p, q, r, levels)
            out = ~K.contains_many(S)
            if out.any():
                return CheckResult(False, (p, q, _lexmin(S[out])))
    return CheckResult(True)


def spherical_support_local(body: Body, x, nbhd_radius: float, r: float) -> CheckResult:
    """Whether some outward normal ``v`` at ``x`` puts every sampled point of
    ``B(x, nbhd_radius)`` intersected with the body inside ``B(x - r v, r)``."""
    x = as_point(x, body.dim)
    tol = body.tol.abs_geom
    if abs(body.boundary_distance(x)) > max(tol, 2 * body.tol.grid_h if not body.exact else tol):
        raise DomainError("x must lie on the boundary")
    P = _local_points(body, x, nbhd_radius, n_lattice=15, cap=256)
    if isinstance(body, (ConvexPolygon, DiskPolygon)):
        V = body.normal_cone(x).directions()
    else:
        V = sphere_directions(body.dim, 720 if body.dim == 2 else 2000)
        slack = 2 * body.tol.grid_h * nbhd_radius
        V = V[np.all((P - x) @ V.T <= slack, axis=0)]
        if len(V) == 0:
            return CheckResult(False, None, details={"reason": "no supporting direction"})
    best = None
    for v in V:
        q = x - r * v
        excess = np.linalg.norm(P - q, axis=1) - r
        worst = float(excess.max())
        if worst <= tol:
            return CheckResult(True, (x, v))
        if best is None or worst < best[0]:
            best = (worst, v, _lexmin(P[excess > tol]))
    return CheckResult(False, (x, best[1], best[2]), details={"excess": best[0]})


# ---------------------------------------------------------------------------
# radius refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RefinementTrace:
    r_target: float
    sequence: tuple
    converged: bool


def radius_refinement(R0: float, r: float, n: int, tol=DEFAULT_TOL) -> RefinementTrace:
    """Iterate ``R <- 2R / (1 + R/r)`` ``n`` times from ``R0``.

    Starting from ``R0 = 2r`` the iterates are ``2**(k+1) / (2**(k+1) - 1) * r``.
    """
    if not r > 0 or not R0 > 0:
        raise DomainError("radii must be positive")
    if R0 < r:
        raise DomainError(f"R0={R0} is below the target radius {r}")
    if n < 0:
        raise DomainError("n must be >= 0")
    seq = [float(R0)]
    for _ in range(n):
        R = seq[-1]
        seq.append(2 * R / (1 + R / r))
    return RefinementTrace(float(r), tuple(seq), abs(seq[-1] - r) < tol.abs_geom)


def arc_radius_bound(r: float, R: float, eps: float) -> float:
    """Radius ``rho = R / (1/2 + 2 D(eps))`` of the comparison arc, with
    ``D = (delta/eps**2) sqrt(R**2 / ((delta/eps)**2 + 1/4) - eps**2/4)``
    and ``delta = ball_modulus(r, eps)``.  Tends to ``2R / (1 + R/r)`` as
    ``eps -> 0``."""
    if not (r > 0 and R > r):
        raise DomainError("need R > r > 0")
    if not (0 < eps < 2 * r):
        raise DomainError("need 0 < eps < 2r")
    delta = ball_modulus(r, eps)
    a = delta / eps
    inner = R * R / (a * a + 0.25) - eps * eps / 4
    if not inner > 0:
        raise DomainError("radicand is not positive")
    D = delta / (eps * eps) * math.sqrt(inner)
    return R / (0.5 + 2 * D)
