"""Lenses, short arcs and the arc property.

The lens of ``x, y`` for radius ``r`` is the intersection of every closed
ball of radius ``r`` containing both points.  Writing ``m`` for the chord
midpoint and ``h = sqrt(r^2 - |x-y|^2/4)``, the centers of those balls
form the sphere of radius ``h`` around ``m`` inside the bisecting
hyperplane, so membership reduces to the worst (opposite) center:
``p`` is in the lens iff ``t^2 + (s + h)^2 <= r^2`` where ``t`` is the
coordinate of ``p - m`` along the chord and ``s`` the distance to the chord
line.  In the plane this is the intersection of the two extreme disks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import CircularArc
from .errors import DomainError, NoContainingBallError
from .geometry_core import (
    DEFAULT_TOL,
    Ball,
    Tolerance,
    as_point,
    as_points,
    ball_modulus,
    chord_circle_centers,
    perp2,
    perp_directions,
)


class Universe:
    """The whole space: the lens of two points farther apart than ``2r``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def contains(self, p) -> bool:
        return True

    def contains_many(self, P) -> np.ndarray:
        return np.ones(len(as_points(P)), dtype=bool)

    def __repr__(self):
        return "UNIVERSE"


UNIVERSE = Universe()


@dataclass(frozen=True)
class Lens:
    """Lens of ``x`` and ``y`` for radius ``r``.

    ``kind`` is ``"proper"`` (two arcs), ``"ball"`` (``|x-y| = 2r``) or
    ``"point"`` (``x = y``).  ``arcs`` is filled for planar proper lenses
    only; ``centers`` holds the two extreme disk centers in the plane.
    """

    x: np.ndarray
    y: np.ndarray
    r: float
    kind: str
    h: float
    arcs: tuple = ()
    centers: tuple = ()
    tol: Tolerance = DEFAULT_TOL

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.x + self.y)

    @property
    def ball(self) -> Ball | None:
        return Ball(self.midpoint, self.r) if self.kind == "ball" else None

    def contains_many(self, P) -> np.ndarray:
        P = as_points(P, len(self.x))
        m = self.midpoint
        rel = P - m
        if self.kind == "point":
            return np.linalg.norm(rel, axis=1) <= self.tol.abs_geom
        d = self.y - self.x
        u = d / np.linalg.norm(d)
        t = rel @ u
        s = np.linalg.norm(rel - t[:, None] * u, axis=1)
        return np.hypot(t, s + self.h) <= self.r + self.tol.abs_geom

    def contains(self, p) -> bool:
        return bool(self.contains_many(as_point(p)[None, :])[0])

    def boundary_offset(self) -> float:
        """Distance from the chord midpoint to the lens boundary along the
        chord normal."""
        if self.kind == "point":
            return 0.0
        return ball_modulus(self.r, float(np.linalg.norm(self.y - self.x)))


def lens(x, y, r: float, tol: Tolerance = DEFAULT_TOL):
    """Intersection of all closed ``r``-balls containing ``x`` and ``y``.

    Returns :data:`UNIVERSE` when no such ball exists.
    """
    x = as_point(x)
    y = as_point(y, len(x))
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    r = float(r)
    dist = float(np.linalg.norm(y - x))
    if dist == 0:
        return Lens(x, y, r, "point", r, tol=tol)
    if dist > 2 * r + tol.abs_geom:
        return UNIVERSE
    if dist >= 2 * r - tol.abs_geom:
        m = 0.5 * (x + y)
        return Lens(x, y, r, "ball", 0.0, centers=(m, m), tol=tol)
    h = math.sqrt(r * r - dist * dist / 4)
    if len(x) != 2:
        return Lens(x, y, r, "proper", h, tol=tol)
    c_plus, c_minus = chord_circle_centers(x, y, r, tol)
    n = perp2(y - x) / dist
    arcs = (_minor_arc(c_plus, r, x, y, -n), _minor_arc(c_minus, r, x, y, n))
    return Lens(x, y, r, "proper", h, arcs=arcs, centers=(c_plus, c_minus), tol=tol)


def lens_contains(L, p) -> bool:
    return L.contains(p)


def _minor_arc(c, r, x, y, bulge) -> CircularArc:
    """Arc of the circle ``(c, r)`` through ``x`` and ``y`` on the ``bulge`` side."""
    a = math.atan2(x[1] - c[1], x[0] - c[0])
    b = math.atan2(y[1] - c[1], y[0] - c[0])
    mid = math.atan2(bulge[1], bulge[0])
    # sweep counterclockwise from whichever endpoint puts the bulge inside
    sweep = (b - a) % (2 * math.pi)
    if (mid - a) % (2 * math.pi) <= sweep:
        start = a
    else:
        start, sweep = b, (a - b) % (2 * math.pi)
    start %= 2 * math.pi
    return CircularArc(np.asarray(c, dtype=float), r, start, start + sweep)


# ---------------------------------------------------------------------------
# short arcs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShortArc:
    """Minor arc of radius ``r`` from ``x`` to ``y`` bulging towards ``w``.

    The arc lies in the plane through ``x`` spanned by the chord direction
    and the unit vector ``w`` (orthogonal to the chord); its center is
    ``m - h w`` and its midpoint ``m + delta w``.  A singleton arc has
    ``x == y`` and ``w`` set to ``None``.
    """

    x: np.ndarray
    y: np.ndarray
    r: float
    w: np.ndarray | None
    center: np.ndarray
    midpoint: np.ndarray

    @property
    def singleton(self) -> bool:
        return self.w is None

    def contains_point(self, p, tol: float = DEFAULT_TOL.abs_geom) -> bool:
        p = as_point(p, len(self.x))
        if self.singleton:
            return bool(np.linalg.norm(p - self.x) <= tol)
        return bool(abs(np.linalg.norm(p - self.center) - self.r) <= tol
                    and (p - 0.5 * (self.x + self.y)) @ self.w >= -tol)

    def as_circular_arc(self) -> CircularArc:
        if len(self.x) != 2 or self.singleton:
            raise DomainError("only planar proper arcs have an angular form")
        return _minor_arc(self.center, self.r, self.x, self.y, self.w)


def short_arc(x, y, r: float, w, tol: Tolerance = DEFAULT_TOL) -> ShortArc:
    """The short arc joining ``x`` and ``y`` that bulges towards ``w``."""
    x = as_point(x)
    y = as_point(y, len(x))
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    d = y - x
    dist = float(np.linalg.norm(d))
    if dist == 0:
        return ShortArc(x, y, float(r), None, x.copy(), x.copy())
    if dist > 2 * r + tol.abs_geom:
        raise NoContainingBallError(f"|x-y|={dist!r} exceeds 2r={2 * r!r}; no short arc",
                                    enclosing_radius=dist / 2)
    w = np.asarray(w, dtype=float)
    w = w - (w @ d) / (dist * dist) * d
    nw = float(np.linalg.norm(w))
    if nw == 0:
        raise DomainError("bulge direction must not be parallel to the chord")
    w = w / nw
    m = 0.5 * (x + y)
    eps = min(dist, 2 * r)
    h = math.sqrt(max(r * r - eps * eps / 4, 0.0))
    return ShortArc(x, y, float(r), w, m - h * w, m + ball_modulus(r, eps) * w)


def short_arcs(x, y, r: float, tol: Tolerance = DEFAULT_TOL) -> tuple:
    """Both planar short arcs joining ``x`` and ``y``.

    The first bulges to the left of the directed chord ``x -> y``.  For
    ``x == y`` the result is the 1-tuple holding the singleton arc.
    """
    x = as_point(x, 2)
    y = as_point(y, 2)
    if np.array_equal(x, y):
        return (short_arc(x, y, r, None, tol),)
    n = perp2(y - x)
    return short_arc(x, y, r, n, tol), short_arc(x, y, r, -n, tol)


def _sub_midpoints(A: ShortArc, P, Q):
    """Midpoints of the sub-arcs of ``A`` between consecutive samples."""
    m = 0.5 * (P + Q)
    off = m - A.center
    norm = np.linalg.norm(off, axis=1)
    direction = np.where(norm[:, None] > 1e-14 * A.r, off / np.where(norm > 0, norm, 1)[:, None], A.w)
    return A.center + A.r * direction


def arc_sample(A: ShortArc, levels: int) -> np.ndarray:
    """``2**levels + 1`` points of ``A`` produced by repeated midpoint
    bisection, ordered from ``x`` to ``y``."""
    if levels < 0:
        raise DomainError("levels must be >= 0")
    if A.singleton:
        return np.repeat(A.x[None, :], 2**levels + 1, axis=0)
    pts = np.array([A.x, A.y])
    for _ in range(levels):
        mids = _sub_midpoints(A, pts[:-1], pts[1:])
        out = np.empty((2 * len(pts) - 1, pts.shape[1]))
        out[0::2] = pts
        out[1::2] = mids
        pts = out
    return pts


def arc_planes(x, y, n_planes: int = 8, seed: int = 0) -> np.ndarray:
    """Bulge directions used for arcs joining ``x`` and ``y``.

    In the plane these are the two chord normals.  Above, the canonical
    completion of the chord direction (with negations) is topped up with
    seeded samples until ``n_planes`` directions are available.
    """
    x = as_point(x)
    d = as_point(y, len(x)) - x
    if len(x) == 2:
        return perp_directions(d)
    base = 2 * (len(x) - 1)
    W = perp_directions(d, k=max(0, n_planes - base), seed=seed)
    return W[:n_planes]


def arc_property_witness(body, x, y, r: float, levels: int = 12, n_planes: int = 8, seed: int = 0):
    """First arc point outside ``body`` (lexicographic order), else ``None``."""
    x = as_point(x, body.dim)
    y = as_point(y, body.dim)
    if not (body.contains(x) and body.contains(y)):
        raise DomainError("arc endpoints must belong to the body")
    dist = float(np.linalg.norm(y - x))
    if dist > 2 * r or dist == 0:
        return None
    bad = []
    for w in arc_planes(x, y, n_planes, seed):
        S = arc_sample(short_arc(x, y, r, w, body.tol), levels)
        out = ~body.contains_many(S)
        if out.any():
            bad.append(S[out])
    if not bad:
        return None
    B = np.concatenate(bad)
    return B[np.lexsort(B.T[::-1])[0]]


def arc_property(body, x, y, r: float, levels: int = 12, n_planes: int = 8, seed: int = 0) -> bool:
    """Whether every sampled point of every short ``r``-arc joining ``x``
    and ``y`` lies in ``body``.

    ``False`` is certain (a sampled arc point is outside); ``True`` is
    limited by the sampling resolution, ``|x-y| / 2**(levels/2)``.  Pairs
    farther apart than ``2r`` pass vacuously.
    """
    return arc_property_witness(body, x, y, r, levels, n_planes, seed) is None
