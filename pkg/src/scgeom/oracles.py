"""Brute-force reference implementations.

Nothing here calls the estimators it is meant to check: the oracles use
raw membership predicates, the scalar helpers of
:mod:`scgeom.geometry_core`, the min/max kernels and a Euclidean distance
transform.  They are slow and coarse on purpose; each documents its
resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import _kernels
from .bodies import ImplicitBody
from .errors import BudgetError, DomainError, EmptyBodyError, NoContainingBallError
from .geometry_core import (
    DEFAULT_TOL,
    Tolerance,
    _phi_stream,
    as_point,
    as_points,
    chord_circle_centers,
    min_enclosing_ball,
)
from .modulus import ModulusSample

INF = math.inf


@dataclass(frozen=True)
class SampleConfig:
    """Sample counts and the seed of every randomised oracle.

    Equal configurations give identical sample streams: draws come from a
    counter-based generator keyed by ``(seed, stream id)``.
    """

    seed: int = 0
    centers: int = 512
    points: int = 10_000
    directions: int = 64
    planes: int = 8
    max_cells: int = 4_000_000

    def __post_init__(self):
        for name in ("centers", "points", "directions", "planes", "max_cells"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1")

    def rng(self, stream: int) -> np.random.Generator:
        return _phi_stream(self.seed, stream)


DEFAULT_CONFIG = SampleConfig()


def _raw_membership(body):
    """Membership without the boundary slack of ``contains_many`` for
    implicit bodies (their slack search is itself an estimator)."""
    return body.membership if isinstance(body, ImplicitBody) else body.contains_many


# ---------------------------------------------------------------------------
# grid bodies
# ---------------------------------------------------------------------------


class GridBody(ImplicitBody):
    """Occupancy grid of a membership predicate, sampled at cell centers.

    Cell ``i`` (a multi-index) covers ``lo + h*i`` to ``lo + h*(i+1)``; the
    box is stretched so that its extent is a whole number of cells.  The
    signed boundary distance comes from the feature transform of a
    Euclidean distance transform and is accurate to about ``h``.
    """

    kind = "implicit_grid"

    def __init__(self, occupancy, lo, h, *, convex=False, connected=True, tol: Tolerance = DEFAULT_TOL):
        occ = np.asarray(occupancy, dtype=bool)
        if not occ.any():
            raise EmptyBodyError("grid has no occupied cell")
        self.h = float(h)
        self.occ = occ
        lo = np.asarray(lo, dtype=float)
        hi = lo + self.h * np.array(occ.shape)
        # for every cell, the nearest cell of the other kind (a ring of
        # empty cells around the box stands for the outside)
        pad = np.pad(occ, 1, constant_values=False)
        core = (slice(None),) + (slice(1, -1),) * occ.ndim
        _, near_out = ndimage.distance_transform_edt(pad, return_indices=True)
        _, near_in = ndimage.distance_transform_edt(~pad, return_indices=True)
        self._partner = np.where(occ[None], near_out[core], near_in[core]) - 1
        idx = np.argwhere(occ)
        mean = idx.mean(axis=0)
        c = idx[np.argmin(np.linalg.norm(idx - mean, axis=1))]
        center = lo + (c + 0.5) * self.h
        self.lo_grid = lo
        super().__init__(self._cell_member, (lo, hi), convex=convex, connected=connected,
                         center=center, tol=Tolerance(tol.abs_geom, tol.rel_geom, self.h))

    def _cells(self, P):
        P = np.asarray(P, dtype=float)
        k = np.floor((P - self.lo_grid) / self.h).astype(np.int64)
        ok = np.all((k >= 0) & (k < np.array(self.occ.shape)), axis=1)
        return k, ok

    def _cell_member(self, P):
        k, ok = self._cells(P)
        out = np.zeros(len(k), dtype=bool)
        out[ok] = self.occ[tuple(k[ok].T)]
        return out

    def contains_many(self, P):
        return self.membership(self._check_dim(P))

    def boundary_distance_many(self, P):
        """Distance from ``P`` to the center of the nearest cell of the
        other kind, less half a cell; accurate to about ``h``."""
        P = self._check_dim(P)
        k, ok = self._cells(P)
        out = np.empty(len(P))
        kk = tuple(k[ok].T)
        partner = self.lo_grid + (self._partner[(slice(None),) + kk].T + 0.5) * self.h
        d = np.linalg.norm(P[ok] - partner, axis=1) - 0.5 * self.h
        out[ok] = np.where(self.occ[kk], d, -d)
        if (~ok).any():
            Q = P[~ok]
            gap = np.maximum(np.maximum(self.lo - Q, Q - self.hi), 0.0)
            out[~ok] = -np.linalg.norm(gap, axis=1)
        return out

    def error_estimate(self) -> float:
        return 2 * self.h

    @property
    def area(self) -> float:
        return float(self.occ.sum()) * self.h**self.dim

    def to_json(self) -> dict:
        return {
            "kind": "implicit_grid",
            "bbox": [self.lo.tolist(), self.hi.tolist()],
            "h": self.h,
            "cells": np.packbits(self.occ.ravel()).tolist(),
        }

    @classmethod
    def from_json(cls, data, tol: Tolerance = DEFAULT_TOL) -> "GridBody":
        lo, hi = (np.asarray(b, dtype=float) for b in data["bbox"])
        h = float(data["h"])
        shape = tuple(int(round(s)) for s in (hi - lo) / h)
        n = int(np.prod(shape))
        bits = np.unpackbits(np.asarray(data["cells"], dtype=np.uint8))
        if len(bits) < n:
            raise DomainError("cell bitmask is shorter than the grid")
        return cls(bits[:n].astype(bool).reshape(shape), lo, h, tol=tol)


def grid_body(membership, bbox, h: float, max_cells: int = DEFAULT_CONFIG.max_cells, **kw) -> GridBody:
    """Rasterise ``membership`` (vectorised over rows) at cell centers."""
    if not h > 0:
        raise DomainError("grid step must be positive")
    lo, hi = (np.asarray(b, dtype=float) for b in bbox)
    shape = np.maximum(np.ceil((hi - lo) / h - 1e-9).astype(np.int64), 1)
    if int(np.prod(shape)) > max_cells:
        raise BudgetError(f"grid of {int(np.prod(shape))} cells exceeds the budget of {max_cells}")
    axes = [lo[i] + (np.arange(shape[i]) + 0.5) * h for i in range(len(lo))]
    C = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))
    occ = np.asarray(membership(C), dtype=bool).reshape(tuple(shape))
    return GridBody(occ, lo, h, **kw)


# ---------------------------------------------------------------------------
# modulus
# ---------------------------------------------------------------------------


def _offsets(eps, h, d):
    """Integer vectors ``a`` with ``| |a| h - eps | <= h``."""
    R = int(math.floor(eps / h + 1))
    axes = [np.arange(-R, R + 1)] * d
    A = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    n = np.linalg.norm(A, axis=1) * h
    return A[np.abs(n - eps) <= h]


def brute_delta(body, eps: float, cfg: SampleConfig = DEFAULT_CONFIG, h: float = 0.01) -> ModulusSample:
    """Minimum midpoint depth over lattice pairs about ``eps`` apart.

    Points of a lattice of step ``h`` (restricted to the body) are paired
    when their distance is within ``h`` of ``eps``; midpoint depths come
    from a distance transform of the membership on the half-step lattice.
    Agreement with the true modulus is expected within ``2h`` for convex
    bodies.  ``+inf`` when no pair qualifies.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    lo, hi = body.bbox()
    s = h / 2
    lo = np.asarray(lo, dtype=float) - 2 * h
    hi = np.asarray(hi, dtype=float) + 2 * h
    shape = np.ceil((hi - lo) / s).astype(np.int64) + 1
    if int(np.prod(shape)) > cfg.max_cells:
        raise BudgetError(f"lattice of {int(np.prod(shape))} points exceeds the budget of {cfg.max_cells}")
    axes = [lo[i] + s * np.arange(shape[i]) for i in range(len(lo))]
    G = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))
    occ = np.asarray(_raw_membership(body)(G), dtype=bool).reshape(tuple(shape))
    pad = np.pad(occ, 1, constant_values=False)
    core = (slice(1, -1),) * occ.ndim
    din = ndimage.distance_transform_edt(pad)[core]
    dout = ndimage.distance_transform_edt(~pad)[core]
    depth = np.where(occ, din - 0.5, -(dout - 0.5)) * s
    A = _offsets(eps, h, len(lo))
    best, p, k = _kernels.grid_pair_min(occ, depth, A)
    if not math.isfinite(best):
        return ModulusSample(float(eps), INF, None, 2 * h)
    x = lo + s * np.asarray(p, dtype=float)
    y = x + h * A[k]
    return ModulusSample(float(eps), float(best), (x, y), 2 * h)


# ---------------------------------------------------------------------------
# lenses and hulls
# ---------------------------------------------------------------------------


class SampledBallIntersection:
    """Intersection of finitely many closed balls of one radius."""

    def __init__(self, centers, r: float, tol: float = DEFAULT_TOL.abs_geom):
        self.centers = as_points(centers)
        self.r = float(r)
        self.tol = tol

    def contains_many(self, P) -> np.ndarray:
        P = as_points(P, self.centers.shape[1])
        return _kernels.max_center_distance(P, self.centers) <= self.r + self.tol

    def contains(self, p) -> bool:
        return bool(self.contains_many(as_point(p)[None, :])[0])


def _lens_centers(x, y, r, n, rng):
    d = len(x)
    dist = float(np.linalg.norm(y - x))
    m = 0.5 * (x + y)
    h = math.sqrt(max(r * r - dist * dist / 4, 0.0))
    if d == 2:
        # boundary of the feasible-center region: two arcs of radius r
        cp, cm = chord_circle_centers(x, y, r)
        out = []
        for base in (x, y):
            a1 = math.atan2(*(cp - base)[::-1])
            a2 = math.atan2(*(cm - base)[::-1])
            span = (a2 - a1) % (2 * math.pi)
            if span > math.pi:
                a1, span = a2, 2 * math.pi - span
            t = a1 + span * (np.arange(n // 2) + rng.random(n // 2)) / (n // 2)
            out.append(base + r * np.column_stack([np.cos(t), np.sin(t)]))
        return np.concatenate(out)
    u = (y - x) / dist
    g = rng.standard_normal((n, d))
    g -= np.outer(g @ u, u)
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return m + h * g


def brute_lens(x, y, r: float, cfg: SampleConfig = DEFAULT_CONFIG) -> SampledBallIntersection:
    """Classifier for the lens of ``x, y``: inside every one of
    ``cfg.centers`` sampled radius-``r`` balls that contain both points.

    Centers are stratified along the boundary of the feasible-center set,
    so the classifier over-approximates the lens and tightens as the
    count grows.
    """
    x = as_point(x)
    y = as_point(y, len(x))
    dist = float(np.linalg.norm(y - x))
    if dist > 2 * r:
        raise NoContainingBallError("no ball of radius r contains both points", enclosing_radius=dist / 2)
    if dist == 0:
        raise DomainError("coincident points")
    C = _lens_centers(x, y, float(r), max(cfg.centers, 2), cfg.rng(1))
    return SampledBallIntersection(C, r)


def feasible_center_boundary(points, r: float, n: int, tol: float = DEFAULT_TOL.abs_geom) -> np.ndarray:
    """``n`` points on the boundary of the set of centers of radius-``r``
    disks containing every input point, by bisection along rays from the
    minimal enclosing disk's center."""
    P = as_points(points, 2)
    meb = min_enclosing_ball(P)
    if meb.radius > r + tol:
        raise NoContainingBallError(f"enclosing radius {meb.radius} exceeds {r}", enclosing_radius=meb.radius)
    th = 2 * math.pi * (np.arange(n) + 0.5) / n
    V = np.column_stack([np.cos(th), np.sin(th)])
    lo = np.zeros(n)
    hi = np.full(n, 2.0 * r + 1.0)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        ok = _kernels.max_center_distance(meb.center + mid[:, None] * V, P) <= r
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return meb.center + lo[:, None] * V


def brute_hull_classifier(points, r: float, cfg: SampleConfig = DEFAULT_CONFIG) -> SampledBallIntersection:
    """Sampled r-hull: intersection of the radius-``r`` disks centered at
    ``cfg.centers`` boundary points of the feasible-center set."""
    return SampledBallIntersection(feasible_center_boundary(points, r, cfg.centers), r)


def brute_hull_membership(points, r: float, p, cfg: SampleConfig = DEFAULT_CONFIG) -> bool:
    return brute_hull_classifier(points, r, cfg).contains(as_point(p, 2))
