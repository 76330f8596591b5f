"""Candidate sets: convex polygons, disk-polygons and implicit bodies.

Every body answers membership, signed boundary distance (positive inside),
first-exit distances along rays and, in the plane, a periodic boundary
parametrisation ``boundary_points(u)``, ``u`` in ``[0, 1)``.  Convex
polygons and disk-polygons are exact; implicit bodies wrap a membership
predicate and are only as good as their sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionError, DomainError, EmptyBodyError, InfeasibleError
from .geometry_core import (
    DEFAULT_TOL,
    Tolerance,
    as_point,
    as_points,
    min_enclosing_ball,
    perp2,
    sphere_directions,
    unit,
)

TWO_PI = 2 * math.pi


def _wrap(theta):
    return np.mod(theta, TWO_PI)


# ---------------------------------------------------------------------------
# boundary features
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CircularArc:
    """Arc of the circle ``(center, radius)`` swept counterclockwise from
    ``start_angle`` to ``end_angle`` (``0 < end - start <= 2 pi``)."""

    center: np.ndarray
    radius: float
    start_angle: float
    end_angle: float

    @property
    def sweep(self) -> float:
        return self.end_angle - self.start_angle

    def point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return self.center + self.radius * np.stack([np.cos(theta), np.sin(theta)], axis=-1)

    @property
    def start(self) -> np.ndarray:
        return self.point(self.start_angle)

    @property
    def end(self) -> np.ndarray:
        return self.point(self.end_angle)

    @property
    def midpoint(self) -> np.ndarray:
        return self.point(0.5 * (self.start_angle + self.end_angle))

    def contains_angle(self, theta, slack: float = 0.0):
        """Whether the direction ``theta`` (radians) lies on the arc."""
        rel = _wrap(np.asarray(theta, dtype=float) - self.start_angle)
        if self.sweep >= TWO_PI - 1e-15:
            return np.ones_like(rel, dtype=bool)
        return (rel <= self.sweep + slack) | (rel >= TWO_PI - slack)

    def distance(self, P) -> np.ndarray:
        """Euclidean distance from each row of ``P`` to the arc."""
        P = as_points(P, 2)
        rel = P - self.center
        rho = np.hypot(rel[:, 0], rel[:, 1])
        ang = np.arctan2(rel[:, 1], rel[:, 0])
        on = self.contains_angle(ang) & (rho > 0)
        d_circle = np.abs(rho - self.radius)
        d_end = np.minimum(np.linalg.norm(P - self.start, axis=1), np.linalg.norm(P - self.end, axis=1))
        full = self.sweep >= TWO_PI - 1e-15
        return np.where(on | full, np.where(rho > 0, d_circle, self.radius), d_end)


@dataclass(frozen=True)
class NormalCone:
    """Cone of outward normals at a boundary point.

    ``extreme_rays`` holds one ray (smooth point) or the two bounding rays
    of a wedge, listed counterclockwise.  Antiparallel rays describe a
    line (segment interior) or, with ``axis`` set, the half-plane on the
    ``axis`` side.  ``full`` marks the whole plane (a singleton body).
    """

    at: np.ndarray
    extreme_rays: tuple
    axis: np.ndarray | None = None
    full: bool = False

    def directions(self) -> np.ndarray:
        """Probe directions: the extreme rays plus the interior bisector."""
        if self.full:
            return sphere_directions(len(self.at), 8)
        rays = [np.asarray(r, dtype=float) for r in self.extreme_rays]
        if len(rays) == 2:
            s = rays[0] + rays[1]
            if np.linalg.norm(s) > 1e-12:
                rays.append(unit(s))
            elif self.axis is not None:
                rays.append(np.asarray(self.axis, dtype=float))
        return np.array(rays)

    def contains(self, v, tol: float = 1e-9) -> bool:
        v = unit(v)
        if self.full:
            return True
        rays = self.extreme_rays
        if len(rays) == 1:
            return bool(np.linalg.norm(v - rays[0]) <= tol)
        r1, r2 = rays
        if np.linalg.norm(r1 + r2) <= 1e-12:
            if self.axis is None:
                return bool(min(np.linalg.norm(v - r1), np.linalg.norm(v - r2)) <= tol)
            return bool(v @ self.axis >= -tol)
        c1 = r1[0] * v[1] - r1[1] * v[0]
        c2 = v[0] * r2[1] - v[1] * r2[0]
        return bool(c1 >= -tol and c2 >= -tol and v @ (r1 + r2) > 0)


# ---------------------------------------------------------------------------
# base class
# ---------------------------------------------------------------------------


class Body:
    """Common interface.  Subclasses implement the ``*_many`` methods."""

    dim: int = 2
    kind: str = "body"
    exact: bool = False
    tol: Tolerance = DEFAULT_TOL

    @property
    def convex(self) -> bool:
        return True

    @property
    def connected(self) -> bool:
        return True

    def contains(self, p) -> bool:
        return bool(self.contains_many(as_point(p, self.dim)[None, :])[0])

    def contains_many(self, P) -> np.ndarray:
        return self.boundary_distance_many(P) >= -self.tol.abs_geom

    def inside_strict(self, P) -> np.ndarray:
        """Membership without the boundary slack."""
        return self.boundary_distance_many(P) >= 0

    def boundary_distance(self, p) -> float:
        return float(self.boundary_distance_many(as_point(p, self.dim)[None, :])[0])

    def _check_dim(self, P):
        P = as_points(P)
        if P.shape[1] != self.dim:
            raise DimensionError(f"body has dimension {self.dim}, points have {P.shape[1]}")
        return P

    def boundary_samples(self, n: int) -> np.ndarray:
        return self.boundary_points((np.arange(n) + 0.5) / n)

    def error_estimate(self) -> float:
        """Rough absolute accuracy of distances computed on this body."""
        return 1e3 * np.finfo(float).eps * max(self.diameter(), 1.0)


# ---------------------------------------------------------------------------
# convex polygons
# ---------------------------------------------------------------------------


class ConvexPolygon(Body):
    """Closed convex polygon with counterclockwise vertices.

    Clockwise input is reversed, repeated and collinear middle vertices are
    dropped.  Collinear input yields a degenerate polygon (``degenerate``
    is ``"segment"`` or ``"point"``).  Non-convex input raises
    :class:`DomainError`.
    """

    kind = "polygon"
    exact = True

    def __init__(self, vertices, tol: Tolerance = DEFAULT_TOL):
        self.tol = tol
        V = as_points(vertices, 2)
        if len(V) == 0:
            raise EmptyBodyError("polygon needs at least one vertex")
        keep = [V[0]]
        for v in V[1:]:
            if np.linalg.norm(v - keep[-1]) > tol.abs_geom:
                keep.append(v)
        if len(keep) > 1 and np.linalg.norm(keep[0] - keep[-1]) <= tol.abs_geom:
            keep.pop()
        V = np.array(keep)
        scale = max(float(np.ptp(V, axis=0).max()), 1.0)
        area2 = float(np.sum(V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1]))
        self.degenerate = None
        if len(V) <= 2 or abs(area2) <= tol.abs_geom * scale:
            self._init_degenerate(V)
            return
        if area2 < 0:
            V = V[::-1].copy()
        for _ in range(len(V)):
            prev, nxt = np.roll(V, 1, axis=0), np.roll(V, -1, axis=0)
            e1, e2 = V - prev, nxt - V
            cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
            lens = np.linalg.norm(e1, axis=1) * np.linalg.norm(e2, axis=1)
            if np.any(cross < -tol.abs_geom * lens):
                raise DomainError("polygon vertices are not in convex position")
            flat = np.abs(cross) <= tol.rel_geom * lens + 1e-300
            if not flat.any():
                break
            V = V[~flat] if (~flat).sum() >= 3 else V
            if (~flat).sum() < 3:
                break
        self.vertices = V
        E = np.roll(V, -1, axis=0) - V
        self._edge_len = np.hypot(E[:, 0], E[:, 1])
        self._normals = np.column_stack([E[:, 1], -E[:, 0]]) / self._edge_len[:, None]
        self._offsets = np.einsum("ij,ij->i", self._normals, V)
        self._cum = np.concatenate([[0.0], np.cumsum(self._edge_len)])

    def _init_degenerate(self, V):
        if len(V) == 1 or np.ptp(V, axis=0).max() <= self.tol.abs_geom:
            self.degenerate = "point"
            self.vertices = V[:1].copy()
            self._cum = np.array([0.0, 0.0])
            return
        # extreme points along the principal direction
        d = unit(V[-1] - V[0]) if np.linalg.norm(V[-1] - V[0]) > 0 else np.array([1.0, 0.0])
        for i in range(len(V)):
            w = V - V[i]
            if np.linalg.norm(w, axis=1).max() > 0:
                d = unit(w[np.argmax(np.linalg.norm(w, axis=1))])
                break
        s = V @ d
        a, b = V[np.argmin(s)], V[np.argmax(s)]
        self.degenerate = "segment"
        self.vertices = np.array([a, b])
        L = float(np.linalg.norm(b - a))
        self._cum = np.array([0.0, L, 2 * L])

    # -- queries ---------------------------------------------------------

    def boundary_distance_many(self, P) -> np.ndarray:
        P = self._check_dim(P)
        if self.degenerate == "point":
            d = -np.linalg.norm(P - self.vertices[0], axis=1)
        elif self.degenerate == "segment":
            a, b = self.vertices
            e = b - a
            t = np.clip((P - a) @ e / (e @ e), 0.0, 1.0)
            d = -np.linalg.norm(P - (a + t[:, None] * e), axis=1)
        else:
            d = _kernels.polygon_depth(P, self.vertices)
        return np.where(np.abs(d) <= 0.0, 0.0, d)

    def diameter(self) -> float:
        V = self.vertices
        return float(np.linalg.norm(V[:, None, :] - V[None, :, :], axis=2).max())

    def bbox(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def interior_point(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    @property
    def perimeter(self) -> float:
        return float(self._cum[-1])

    def edges(self):
        """List of ``(a, b)`` vertex pairs, counterclockwise."""
        V = self.vertices
        if self.degenerate == "point":
            return []
        if self.degenerate == "segment":
            return [(V[0], V[1])]
        return [(V[i], V[(i + 1) % len(V)]) for i in range(len(V))]

    def boundary_points(self, u) -> np.ndarray:
        u = np.mod(np.asarray(u, dtype=float), 1.0)
        V = self.vertices
        if self.degenerate == "point":
            return np.repeat(V[:1], len(u), axis=0)
        if self.degenerate == "segment":
            loop = np.array([V[0], V[1]])
        else:
            loop = V
        s = u * self._cum[-1]
        k = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(self._cum) - 2)
        seg_len = self._cum[k + 1] - self._cum[k]
        t = np.where(seg_len > 0, (s - self._cum[k]) / np.where(seg_len > 0, seg_len, 1), 0.0)
        a = loop[k % len(loop)]
        b = loop[(k + 1) % len(loop)]
        return a + t[:, None] * (b - a)

    def ray_exit(self, P, V) -> np.ndarray:
        """Distance from each point along its direction to the boundary."""
        P = self._check_dim(P)
        V = as_points(V, 2)
        if self.degenerate:
            return np.zeros(len(P))
        nv = V @ self._normals.T
        slack = self._offsets[None, :] - P @ self._normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(nv > 1e-300, np.maximum(slack, 0.0) / nv, np.inf)
        return t.min(axis=1)

    def normal_cone(self, x) -> NormalCone:
        x = as_point(x, 2)
        tol = self.tol.abs_geom
        if abs(self.boundary_distance(x)) > tol:
            raise DomainError("point is not on the polygon boundary")
        V = self.vertices
        if self.degenerate == "point":
            return NormalCone(x, (), full=True)
        if self.degenerate == "segment":
            a, b = V
            t = unit(b - a)
            n = perp2(t)
            if np.linalg.norm(x - a) <= tol:
                return NormalCone(x, (n, -n), axis=-t)
            if np.linalg.norm(x - b) <= tol:
                return NormalCone(x, (-n, n), axis=t)
            return NormalCone(x, (n, -n))
        dv = np.linalg.norm(V - x, axis=1)
        k = int(np.argmin(dv))
        if dv[k] <= tol:
            return NormalCone(V[k].copy(), (self._normals[k - 1].copy(), self._normals[k].copy()))
        # nearest edge
        rel = x - V
        E = np.roll(V, -1, axis=0) - V
        t = np.clip(np.einsum("ij,ij->i", rel, E) / self._edge_len**2, 0, 1)
        d = np.linalg.norm(rel - t[:, None] * E, axis=1)
        k = int(np.argmin(d))
        return NormalCone(x, (self._normals[k].copy(),))

    def feature_points(self) -> np.ndarray:
        """Points whose containment in a ball implies the body's."""
        return self.vertices.copy()

    def to_json(self) -> dict:
        return {"kind": "polygon", "vertices": self.vertices.tolist()}


# ---------------------------------------------------------------------------
# disk-polygons
# ---------------------------------------------------------------------------


class DiskPolygon(Body):
    """Intersection of closed disks of one common radius.

    ``centers`` keeps the generating set as given (duplicates removed);
    ``generators`` lists the centers that contribute a boundary arc, in
    the counterclockwise order of ``arcs``.  An intersection that shrinks
    to one point is kept as ``degenerate == "point"`` at ``point``.
    """

    kind = "disk_polygon"
    exact = True

    def __init__(self, centers, radius: float, tol: Tolerance = DEFAULT_TOL):
        self.tol = tol
        C = as_points(centers, 2)
        if len(C) == 0:
            raise EmptyBodyError("disk-polygon needs at least one center")
        if not radius > 0:
            raise DomainError(f"radius must be positive, got {radius!r}")
        self.radius = R = float(radius)
        uniq = [C[0]]
        for c in C[1:]:
            if min(np.linalg.norm(c - u) for u in uniq) > tol.abs_geom:
                uniq.append(c)
        self.centers = np.array(uniq)
        meb = min_enclosing_ball(self.centers)
        self.enclosing_radius = meb.radius
        if meb.radius > R + tol.abs_geom:
            raise InfeasibleError(
                f"disks of radius {R} around these centers do not intersect "
                f"(enclosing radius {meb.radius})",
                enclosing_radius=meb.radius,
            )
        self._inner = meb.center
        self.degenerate = None
        self.point = None
        if len(self.centers) >= 2 and meb.radius >= R - tol.abs_geom:
            self.degenerate = "point"
            self.point = meb.center
            self.arcs = []
            self.generators = self.centers.copy()
            self._cum = np.array([0.0, 0.0])
            return
        self.arcs = self._build_arcs()
        self.generators = np.array([a.center for a in self.arcs])
        lens = np.array([a.radius * a.sweep for a in self.arcs])
        self._cum = np.concatenate([[0.0], np.cumsum(lens)])

    def _build_arcs(self):
        C, R = self.centers, self.radius
        if len(C) == 1:
            return [CircularArc(C[0].copy(), R, 0.0, TWO_PI)]
        ang_tol = self.tol.abs_geom / R
        arcs = []
        for i, c in enumerate(C):
            lo, hi = -math.pi, math.pi
            full = True
            empty = False
            for j, other in enumerate(C):
                if j == i:
                    continue
                w = other - c
                dist = math.hypot(w[0], w[1])
                half = math.acos(min(dist / (2 * R), 1.0))
                mid = math.atan2(w[1], w[0])
                if full:
                    lo, hi, full = mid - half, mid + half, False
                    continue
                centre = 0.5 * (lo + hi)
                mid += TWO_PI * round((centre - mid) / TWO_PI)
                lo, hi = max(lo, mid - half), min(hi, mid + half)
                if hi - lo <= ang_tol:
                    empty = True
                    break
            if empty:
                continue
            start = lo % TWO_PI
            arcs.append(CircularArc(c.copy(), R, start, start + (hi - lo)))
        if not arcs:
            raise InfeasibleError("intersection has no boundary arcs", enclosing_radius=self.enclosing_radius)
        inner = self._inner
        key = [math.atan2(*(a.midpoint - inner)[::-1]) for a in arcs]
        return [arcs[k] for k in np.argsort(key, kind="stable")]

    # -- queries ---------------------------------------------------------

    def contains_many(self, P) -> np.ndarray:
        P = self._check_dim(P)
        return _kernels.max_center_distance(P, self.centers) <= self.radius + self.tol.abs_geom

    def inside_strict(self, P) -> np.ndarray:
        P = self._check_dim(P)
        if self.degenerate:
            return np.linalg.norm(P - self.point, axis=1) == 0
        return _kernels.max_center_distance(P, self.centers) <= self.radius

    def boundary_distance_many(self, P) -> np.ndarray:
        P = self._check_dim(P)
        if self.degenerate:
            return -np.linalg.norm(P - self.point, axis=1)
        depth = _kernels.disks_depth(P, self.centers, self.radius)
        out = depth.copy()
        outside = depth < 0
        if outside.any():
            Q = P[outside]
            out[outside] = -np.min([a.distance(Q) for a in self.arcs], axis=0)
        return out

    def ray_exit(self, P, V) -> np.ndarray:
        P = self._check_dim(P)
        V = as_points(V, 2)
        if self.degenerate:
            return np.zeros(len(P))
        R = self.radius
        best = np.full(len(P), np.inf)
        for c in self.generators:
            rel = P - c
            rho = np.linalg.norm(rel, axis=1)
            q = np.maximum((R - rho) * (R + rho), 0.0)
            b = np.einsum("ij,ij->i", rel, V)
            root = np.sqrt(b * b + q)
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(b > 0, q / (b + root), root - b)
            t = np.where((b > 0) & (b + root == 0), 0.0, t)
            best = np.minimum(best, t)
        return best

    def normal_cone(self, x) -> NormalCone:
        x = as_point(x, 2)
        tol = self.tol.abs_geom
        if abs(self.boundary_distance(x)) > tol:
            raise DomainError("point is not on the disk-polygon boundary")
        if self.degenerate:
            return NormalCone(x, (), full=True)
        arcs = self.arcs
        if len(arcs) == 1:
            return NormalCone(x, (unit(x - arcs[0].center),))
        for k, a in enumerate(arcs):
            nxt = arcs[(k + 1) % len(arcs)]
            if np.linalg.norm(x - a.end) <= 10 * tol:
                v = a.end
                return NormalCone(v.copy(), (unit(v - a.center), unit(v - nxt.center)))
        d = [float(a.distance(x[None, :])[0]) for a in arcs]
        a = arcs[int(np.argmin(d))]
        return NormalCone(x, (unit(x - a.center),))

    def vertices(self) -> np.ndarray:
        """Arc junctions (empty for a full disk)."""
        if self.degenerate:
            return self.point[None, :].copy()
        if len(self.arcs) == 1:
            return np.empty((0, 2))
        return np.array([a.start for a in self.arcs])

    def diameter(self) -> float:
        if self.degenerate:
            return 0.0
        arcs = self.arcs
        R = self.radius
        if any(a.sweep >= math.pi for a in arcs):
            return 2 * R
        cand = [a.start for a in arcs] + [a.end for a in arcs]
        best = 0.0
        # endpoint to farthest point of another arc
        for a in arcs:
            for e in cand:
                w = a.center - e
                nw = np.linalg.norm(w)
                if nw == 0:
                    continue
                th = math.atan2(w[1], w[0])
                if a.contains_angle(th):
                    best = max(best, float(np.linalg.norm(a.point(th) - e)))
            for b in arcs:
                w = a.center - b.center
                nw = np.linalg.norm(w)
                if nw == 0:
                    continue
                th = math.atan2(w[1], w[0])
                # a.center + R w/|w| and b.center - R w/|w|
                if a.contains_angle(th) and b.contains_angle(th + math.pi):
                    best = max(best, float(nw + 2 * R))
        E = np.array(cand)
        best = max(best, float(np.linalg.norm(E[:, None] - E[None], axis=2).max()))
        return best

    def bbox(self):
        if self.degenerate:
            return self.point.copy(), self.point.copy()
        pts = []
        for a in self.arcs:
            pts.extend([a.start, a.end])
            for th in (0.0, math.pi / 2, math.pi, 1.5 * math.pi):
                if a.contains_angle(th):
                    pts.append(a.point(th))
        pts = np.array(pts)
        return pts.min(axis=0), pts.max(axis=0)

    def interior_point(self) -> np.ndarray:
        return self._inner.copy()

    @property
    def perimeter(self) -> float:
        return float(self._cum[-1])

    def boundary_points(self, u) -> np.ndarray:
        u = np.mod(np.asarray(u, dtype=float), 1.0)
        if self.degenerate:
            return np.repeat(self.point[None, :], len(u), axis=0)
        s = u * self._cum[-1]
        k = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(self.arcs) - 1)
        starts = np.array([a.start_angle for a in self.arcs])
        centers = self.generators
        theta = starts[k] + (s - self._cum[k]) / self.radius
        return centers[k] + self.radius * np.column_stack([np.cos(theta), np.sin(theta)])

    def farthest_from(self, q):
        """Point of the body farthest from ``q`` and its distance."""
        q = as_point(q, 2)
        if self.degenerate:
            return self.point.copy(), float(np.linalg.norm(self.point - q))
        best_p, best_d = None, -1.0
        for a in self.arcs:
            cands = [a.start, a.end]
            w = a.center - q
            if np.linalg.norm(w) > 0:
                th = math.atan2(w[1], w[0])
                if a.contains_angle(th):
                    cands.append(a.point(th))
            else:
                cands.append(a.point(a.start_angle))
            for p in cands:
                dd = float(np.linalg.norm(p - q))
                if dd > best_d + 1e-15 or (abs(dd - best_d) <= 1e-15 and tuple(p) < tuple(best_p)):
                    best_p, best_d = p, dd
        return best_p, best_d

    def to_json(self) -> dict:
        return {"kind": "disk_polygon", "centers": self.centers.tolist(), "radius": self.radius}


def intersect_disks(centers, R: float, tol: Tolerance = DEFAULT_TOL) -> DiskPolygon:
    """Boundary structure of the intersection of the disks ``B(c, R)``."""
    return DiskPolygon(centers, R, tol)


# ---------------------------------------------------------------------------
# implicit bodies
# ---------------------------------------------------------------------------


def _vectorised(membership, d):
    probe = np.zeros((2, d))
    try:
        out = np.asarray(membership(probe))
        if out.shape == (2,):
            return lambda P: np.asarray(membership(P), dtype=bool)
    except Exception:  # scalar predicates choke on a batch
        pass
    return lambda P: np.fromiter((bool(membership(p)) for p in P), dtype=bool, count=len(P))


class ImplicitBody(Body):
    """Set given by a membership predicate and a bounding box.

    Parameters
    ----------
    membership : callable
        Maps an ``(n, d)`` array to ``n`` booleans (a per-point predicate
        is wrapped automatically).  Must be deterministic.
    bbox : pair of sequences
        ``(lo, hi)`` corners of a box that contains the set.  Not verified.
    convex, connected : bool
        Trusted claims.  Routines that need convexity say so; their
        guarantees are void when the claim is false.
    center : point, optional
        A point of the set from which every boundary point is visible
        (the set is star-shaped around it).  Defaults to the centroid of a
        lattice sample.

    Boundary points come from bisection along rays from ``center``;
    distances to the boundary are minima of ray-exit distances over a fan
    of directions, so they are upper bounds that tighten with
    ``n_directions``.
    """

    kind = "implicit"
    exact = False

    def __init__(self, membership, bbox, *, convex: bool = False, connected: bool = True,
                 center=None, tol: Tolerance = DEFAULT_TOL, n_directions: int = 32, spec=None):
        lo, hi = (np.asarray(b, dtype=float) for b in bbox)
        if lo.shape != hi.shape or lo.ndim != 1 or lo.shape[0] < 2 or np.any(hi < lo):
            raise DomainError("bbox must be (lo, hi) with lo <= hi and dimension >= 2")
        self.dim = lo.shape[0]
        self.lo, self.hi = lo, hi
        self.tol = tol
        self._member = _vectorised(membership, self.dim)
        self._convex = bool(convex)
        self._connected = bool(connected)
        self.n_directions = n_directions
        self.spec = spec
        if center is None:
            center = self._lattice_centroid()
        self.center = as_point(center, self.dim)
        if not self._member(self.center[None, :])[0]:
            raise DomainError("center must belong to the body")
        self._diam = None

    def _lattice_centroid(self):
        n = 65 if self.dim == 2 else max(5, int(round(20000 ** (1 / self.dim))))
        axes = [np.linspace(l, h, n) for l, h in zip(self.lo, self.hi)]
        G = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
        inside = self._member(G)
        if not inside.any():
            raise EmptyBodyError("membership predicate is empty on the bounding box lattice")
        c = G[inside].mean(axis=0)
        if self._member(c[None, :])[0]:
            return c
        # centroid outside (non-convex set): nearest lattice member
        pts = G[inside]
        return pts[np.argmin(np.linalg.norm(pts - c, axis=1))]

    @property
    def convex(self) -> bool:
        return self._convex

    @property
    def connected(self) -> bool:
        return self._connected

    # -- membership ------------------------------------------------------

    def membership(self, P) -> np.ndarray:
        P = np.asarray(P, dtype=float)
        inbox = np.all((P >= self.lo) & (P <= self.hi), axis=1)
        out = np.zeros(len(P), dtype=bool)
        if inbox.any():
            out[inbox] = self._member(P[inbox])
        return out

    def contains_many(self, P) -> np.ndarray:
        P = self._check_dim(P)
        inside = self.membership(P)
        if inside.all():
            return inside
        # slack: an outside point within abs_geom of the set counts as inside
        out = ~inside
        near = self._near_set(P[out], self.tol.abs_geom)
        inside[out] = near
        return inside

    def inside_strict(self, P) -> np.ndarray:
        return self.membership(self._check_dim(P))

    def _near_set(self, Q, r):
        if len(Q) == 0:
            return np.zeros(0, dtype=bool)
        D = sphere_directions(self.dim, 16 if self.dim == 2 else 26)
        hit = np.zeros(len(Q), dtype=bool)
        for v in D:
            hit |= self.membership(Q + r * v)
        return hit

    # -- rays ------------------------------------------------------------

    def _box_exit(self, P, V):
        with np.errstate(divide="ignore", invalid="ignore"):
            t_hi = np.where(V > 0, (self.hi - P) / V, np.inf)
            t_lo = np.where(V < 0, (self.lo - P) / V, np.inf)
        return np.maximum(np.minimum(t_hi, t_lo).min(axis=1), 0.0)

    def _bisect(self, P, V, lo, hi, iters=64):
        for _ in range(iters):
            if np.all(hi - lo <= 1e-13 * (1 + np.abs(hi))):
                break
            mid = 0.5 * (lo + hi)
            ins = self.membership(P + mid[:, None] * V)
            lo = np.where(ins, mid, lo)
            hi = np.where(ins, hi, mid)
        return lo

    def ray_exit(self, P, V) -> np.ndarray:
        """First-exit distance along each ray for points of the body.

        Convex bodies are bisected directly on ``[0, box exit]``; other
        bodies are first marched with step ``tol.grid_h``.
        """
        P = self._check_dim(P)
        V = np.asarray(V, dtype=float).reshape(-1, self.dim)
        if len(V) == 1 and len(P) > 1:
            V = np.repeat(V, len(P), axis=0)
        t_box = self._box_exit(P, V)
        out = np.zeros(len(P))
        start = self.membership(P)
        if not start.any():
            return out
        P, V, t_box = P[start], V[start], t_box[start]
        end_in = self.membership(P + t_box[:, None] * V)
        lo = np.zeros(len(P))
        hi = t_box.copy()
        if not self._convex:
            h = self.tol.grid_h
            steps = int(np.ceil(t_box.max() / h)) if len(t_box) else 0
            found = np.zeros(len(P), dtype=bool)
            for k in range(1, steps + 1):
                t = np.minimum(k * h, t_box)
                ins = self.membership(P + t[:, None] * V)
                newly = ~ins & ~found
                hi = np.where(newly, t, hi)
                found |= newly
                lo = np.where(~found, t, lo)
                if found.all():
                    break
            end_in = end_in & ~found
        res = self._bisect(P, V, lo, hi)
        res = np.where(end_in, t_box, res)
        out[start] = res
        return out

    def _ray_entry(self, P, V, tmax):
        """First entry distance along each ray (``inf`` when none)."""
        h = self.tol.grid_h
        n = len(P)
        hi = np.full(n, np.inf)
        lo = np.zeros(n)
        found = np.zeros(n, dtype=bool)
        steps = int(np.ceil(tmax / h))
        for k in range(1, steps + 1):
            t = k * h
            ins = self.membership(P + t * V)
            newly = ins & ~found
            hi = np.where(newly, t, hi)
            lo = np.where(newly, t - h, lo)
            found |= newly
            if found.all():
                break
        if found.any():
            Pf, Vf, l, u = P[found], V[found], lo[found], hi[found]
            for _ in range(64):
                mid = 0.5 * (l + u)
                ins = self.membership(Pf + mid[:, None] * Vf)
                u = np.where(ins, mid, u)
                l = np.where(ins, l, mid)
            hi[found] = u
        return hi

    def boundary_distance_many(self, P) -> np.ndarray:
        P = self._check_dim(P)
        out = np.empty(len(P))
        inside = self.membership(P)
        D = sphere_directions(self.dim, self.n_directions)
        if inside.any():
            out[inside] = self._depth(P[inside], D)
        if (~inside).any():
            Q = P[~inside]
            tmax = float(np.linalg.norm(self.hi - self.lo)) + float(
                np.max(np.linalg.norm(Q - 0.5 * (self.lo + self.hi), axis=1)))
            best = np.full(len(Q), np.inf)
            for v in D:
                best = np.minimum(best, self._ray_entry(Q, np.broadcast_to(v, Q.shape), tmax))
            out[~inside] = -best
        return out

    def _depth(self, P, D):
        n, k = len(P), len(D)
        PP = np.repeat(P, k, axis=0)
        VV = np.tile(D, (n, 1))
        T = self.ray_exit(PP, VV).reshape(n, k)
        best = T.min(axis=1)
        if self.dim != 2:
            return best
        # zoom on the best direction
        ang = np.arctan2(D[:, 1], D[:, 0])[T.argmin(axis=1)]
        width = TWO_PI / k
        for _ in range(4):
            offs = np.linspace(-width, width, 9)
            th = ang[:, None] + offs[None, :]
            VV = np.stack([np.cos(th), np.sin(th)], axis=-1).reshape(-1, 2)
            T = self.ray_exit(np.repeat(P, 9, axis=0), VV).reshape(n, 9)
            j = T.argmin(axis=1)
            best = np.minimum(best, T[np.arange(n), j])
            ang = th[np.arange(n), j]
            width /= 4
        return best

    # -- boundary --------------------------------------------------------

    def radial(self, directions) -> np.ndarray:
        """Boundary points hit by rays from ``center`` (star-shaped sets)."""
        V = np.asarray(directions, dtype=float)
        P = np.repeat(self.center[None, :], len(V), axis=0)
        t = self.ray_exit(P, V)
        return P + t[:, None] * V

    def boundary_points(self, u) -> np.ndarray:
        if self.dim != 2:
            raise DimensionError("boundary parametrisation is planar only")
        th = TWO_PI * np.mod(np.asarray(u, dtype=float), 1.0)
        return self.radial(np.column_stack([np.cos(th), np.sin(th)]))

    def boundary_samples(self, n: int) -> np.ndarray:
        if self.dim == 2:
            return super().boundary_samples(n)
        return self.radial(sphere_directions(self.dim, n))

    def diameter_bounds(self):
        """``(sampled lower bound, bounding-box diagonal)``."""
        if self._diam is None:
            S = self.boundary_samples(720 if self.dim == 2 else 2000)
            lower = 0.0
            for s in range(0, len(S), 256):
                lower = max(lower, float(np.linalg.norm(S[s:s + 256, None] - S[None], axis=2).max()))
            self._diam = (lower, float(np.linalg.norm(self.hi - self.lo)))
        return self._diam

    def diameter(self) -> float:
        return self.diameter_bounds()[0]

    def bbox(self):
        return self.lo.copy(), self.hi.copy()

    def interior_point(self) -> np.ndarray:
        return self.center.copy()

    def error_estimate(self) -> float:
        return self.tol.abs_geom

    def section(self, origin, e1, e2) -> "ImplicitBody":
        """Planar section through ``origin`` spanned by orthonormal ``e1, e2``."""
        origin = as_point(origin, self.dim)
        E = np.array([unit(e1), unit(e2)])
        half = 0.5 * float(np.linalg.norm(self.hi - self.lo)) + float(
            np.linalg.norm(origin - 0.5 * (self.lo + self.hi)))
        member = self.membership
        return ImplicitBody(lambda Q: member(origin + np.asarray(Q) @ E), ([-half, -half], [half, half]),
                            convex=self._convex, connected=self._connected, center=[0.0, 0.0],
                            tol=self.tol, n_directions=self.n_directions)

    def to_json(self) -> dict:
        if self.spec is None:
            raise DomainError("this implicit body has no JSON encoding")
        return dict(self.spec)

    # -- analytic constructors --------------------------------------------

    @classmethod
    def ellipse(cls, semi_axes, center=(0.0, 0.0), tol: Tolerance = DEFAULT_TOL, **kw):
        """Axis-aligned ellipse (any dimension: an ellipsoid)."""
        a = np.asarray(semi_axes, dtype=float)
        c = np.asarray(center, dtype=float)
        if np.any(a <= 0) or a.shape != c.shape:
            raise DomainError("semi-axes must be positive and match the center's dimension")

        def member(P):
            return np.sum(((np.asarray(P) - c) / a) ** 2, axis=1) <= 1.0

        pad = 1e-6 * a.max()
        spec = {"kind": "ellipse", "center": c.tolist(), "semi_axes": a.tolist()}
        return cls(member, (c - a - pad, c + a + pad), convex=True, center=c, tol=tol, spec=spec, **kw)

    @classmethod
    def ball(cls, radius, center=(0.0, 0.0), tol: Tolerance = DEFAULT_TOL, **kw):
        c = np.asarray(center, dtype=float)
        return cls.ellipse(np.full(c.shape, float(radius)), c, tol=tol, **kw)

    @classmethod
    def union_of_balls(cls, centers, radius, tol: Tolerance = DEFAULT_TOL, **kw):
        """Union of closed balls (not convex in general)."""
        C = as_points(centers)
        r = float(radius)

        def member(P):
            P = np.asarray(P)
            return (np.linalg.norm(P[:, None, :] - C[None], axis=2) <= r).any(axis=1)

        spec = {"kind": "ball_union", "centers": C.tolist(), "radius": r}
        kw.setdefault("center", C.mean(axis=0))
        return cls(member, (C.min(axis=0) - r, C.max(axis=0) + r), convex=False, tol=tol, spec=spec, **kw)
