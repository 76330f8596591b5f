"""Scalar and vector primitives shared by every other module.

Points and directions are plain ``numpy`` float arrays of shape ``(d,)``;
batches of points have shape ``(n, d)``.  Helpers here validate them
instead of wrapping them in classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateChordError,
    DimensionError,
    DomainError,
    NoContainingBallError,
)

#: Tolerance on the norm of a unit vector.
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Tolerance:
    """Numerical tolerance policy.

    Attributes
    ----------
    abs_geom : float
        Absolute slack for geometric predicates (membership, on-boundary).
    rel_geom : float
        Relative slack for comparisons of radii and lengths.
    grid_h : float
        Step of sampling grids and ray marches.
    """

    abs_geom: float = 1e-9
    rel_geom: float = 1e-12
    grid_h: float = 0.01

    def __post_init__(self):
        for name in ("abs_geom", "rel_geom", "grid_h"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"tolerance {name} must be positive, got {value!r}")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class Ball:
    """Closed ball; ``radius == 0`` is the singleton ``{center}``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_point(self.center)
        object.__setattr__(self, "center", c)
        if not (self.radius >= 0 and math.isfinite(self.radius)):
            raise DomainError(f"ball radius must be finite and >= 0, got {self.radius!r}")
        object.__setattr__(self, "radius", float(self.radius))

    def contains(self, p, tol: float = DEFAULT_TOL.abs_geom) -> bool:
        return bool(np.linalg.norm(as_point(p) - self.center) <= self.radius + tol)


def as_point(p, dim: int | None = None) -> np.ndarray:
    """Validate and convert ``p`` to a finite float vector of dimension >= 2."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise DimensionError(f"expected a point of dimension >= 2, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point coordinates must be finite")
    return arr


def as_points(P, dim: int | None = None) -> np.ndarray:
    """Convert to an ``(n, d)`` float array (a single point becomes ``n = 1``)."""
    arr = np.asarray(P, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise DimensionError(f"expected an (n, d) point array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionError(f"expected dimension {dim}, got {arr.shape[1]}")
    return arr


def unit(v) -> np.ndarray:
    """Normalise ``v``; raises on the zero vector."""
    arr = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(arr))
    if not n > 0 or not math.isfinite(n):
        raise DomainError("cannot normalise a zero or non-finite vector")
    return arr / n


def is_unit(v, tol: float = UNIT_TOL) -> bool:
    return abs(float(np.linalg.norm(v)) - 1.0) <= tol


def perp2(v) -> np.ndarray:
    """Rotate a 2D vector by +90 degrees."""
    return np.array([-v[1], v[0]], dtype=float)


def ball_modulus(r: float, eps: float) -> float:
    """Modulus of convexity of a closed ball of radius ``r``.

    Returns ``r - sqrt(r**2 - eps**2 / 4)``, evaluated in the
    cancellation-free form ``(eps**2 / 4) / (r + sqrt(r**2 - eps**2 / 4))``
    so that ``ball_modulus(r, eps) / eps**2`` stays accurate as
    ``eps -> 0``.
    """
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    if eps < 0 or eps > 2 * r * (1 + 4 * np.finfo(float).eps):
        raise DomainError(f"eps={eps!r} outside [0, 2r] for r={r!r}")
    q = eps * eps / 4.0
    root = math.sqrt(max(r * r - q, 0.0))
    if r + root == 0:
        return 0.0
    return q / (r + root)


def ball_limit_constant(r: float) -> float:
    """Limit of ``ball_modulus(r, eps) / eps**2`` as ``eps -> 0``: ``1/(8r)``."""
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    return 1.0 / (8.0 * r)


def chord_circle_centers(x, y, r: float, tol: Tolerance = DEFAULT_TOL):
    """Centers of the two radius-``r`` circles through ``x`` and ``y`` (2D).

    Returns ``(c_plus, c_minus)`` with ``c_plus`` on the left of the
    directed chord ``x -> y``.  Both coincide with the chord midpoint when
    ``|x - y| = 2r`` (within ``tol.abs_geom``).
    """
    x = as_point(x, 2)
    y = as_point(y, 2)
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    d = y - x
    dist = float(np.hypot(d[0], d[1]))
    if dist == 0:
        raise DegenerateChordError("chord endpoints coincide")
    if dist > 2 * r + tol.abs_geom:
        raise NoContainingBallError(
            f"|x-y|={dist!r} exceeds 2r={2 * r!r}", enclosing_radius=dist / 2
        )
    h = math.sqrt(max(r * r - dist * dist / 4.0, 0.0))
    m = (x + y) / 2.0
    n = perp2(d) / dist
    return m + h * n, m - h * n


def _phi_stream(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), stream]))


def perp_directions(u, k: int = 0, seed: int = 0) -> np.ndarray:
    """Unit vectors orthogonal to ``u``.

    In the plane the result is exactly the two normals
    ``[(-u1, u0), (u1, -u0)]``.  For ``d > 2`` it is the canonical
    completion of ``u`` to an orthonormal basis (Gram-Schmidt over the
    coordinate axes, taken in order of increasing ``|u_i|``), each basis
    vector followed by its negation, then ``k`` pseudo-random unit
    vectors of the orthogonal complement drawn from a counter-based
    generator keyed by ``seed``.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.shape[0] < 2:
        raise DimensionError("perp_directions needs a vector of dimension >= 2")
    norm = float(np.linalg.norm(u))
    if norm == 0:
        raise DomainError("zero vector has no orthogonal complement direction")
    u = u / norm
    d = u.shape[0]
    if d == 2:
        return np.array([[-u[1], u[0]], [u[1], -u[0]]])
    basis = []
    for i in np.argsort(np.abs(u), kind="stable"):
        e = np.zeros(d)
        e[i] = 1.0
        w = e - (e @ u) * u
        for b in basis:
            w -= (w @ b) * b
        n = np.linalg.norm(w)
        if n > 1e-8:
            basis.append(w / n)
        if len(basis) == d - 1:
            break
    out = []
    for b in basis:
        out.extend((b, -b))
    if k > 0:
        B = np.array(basis)
        g = _phi_stream(seed, 0x70657270).standard_normal((k, d - 1))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        out.extend(g @ B)
    return np.array(out)


def sphere_directions(d: int, n: int, seed: int = 0) -> np.ndarray:
    """``n`` deterministic, roughly uniform unit vectors in ``R^d``.

    In 2D they are equally spaced angles.  In 3D a Fibonacci lattice is
    used; above that, normalised Gaussians from a seeded Philox stream.
    """
    if d == 2:
        t = 2 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(t), np.sin(t)])
    if d == 3:
        i = np.arange(n) + 0.5
        z = 1 - 2 * i / n
        phi = np.pi * (3 - np.sqrt(5)) * i
        s = np.sqrt(1 - z * z)
        return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
    g = _phi_stream(seed, 0x73706872).standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


# -- minimal enclosing ball (Welzl, move-to-front, planar) -------------------


def _circle_two(a, b):
    c = (a + b) / 2
    return c, max(np.linalg.norm(a - c), np.linalg.norm(b - c))


def _circle_three(a, b, c):
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    den = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2
    if den == 0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
              + (cx * cx + cy * cy) * (ay - by)) / den
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
              + (cx * cx + cy * cy) * (bx - ax)) / den
    center = np.array([x, y])
    return center, max(np.linalg.norm(p - center) for p in (a, b, c))


_MEB_SLACK = 1 + 1e-14


def _inside(circle, p):
    return circle is not None and np.linalg.norm(p - circle[0]) <= circle[1] * _MEB_SLACK


def _with_two(pts, p, q):
    circ = _circle_two(p, q)
    left = right = None
    pq = q - p
    for r in pts:
        if _inside(circ, r):
            continue
        cross = pq[0] * (r[1] - p[1]) - pq[1] * (r[0] - p[0])
        c = _circle_three(p, q, r)
        if c is None:
            continue
        side = pq[0] * (c[0][1] - p[1]) - pq[1] * (c[0][0] - p[0])
        if cross > 0 and (left is None or side > pq[0] * (left[0][1] - p[1]) - pq[1] * (left[0][0] - p[0])):
            left = c
        elif cross < 0 and (right is None or side < pq[0] * (right[0][1] - p[1]) - pq[1] * (right[0][0] - p[0])):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[1] <= right[1] else right


def _with_one(pts, p):
    circ = (p.copy(), 0.0)
    for i, q in enumerate(pts):
        if not _inside(circ, q):
            if circ[1] == 0.0:
                circ = _circle_two(p, q)
            else:
                circ = _with_two(pts[: i + 1], p, q)
    return circ


def min_enclosing_ball(points, seed: int = 0) -> Ball:
    """Smallest closed disk containing the planar ``points``.

    Expected linear time; the processing order is a fixed-seed shuffle, so
    the result is reproducible.
    """
    P = as_points(points, 2)
    if len(P) == 0:
        raise DomainError("no points")
    order = np.random.default_rng(seed).permutation(len(P))
    pts = [P[i] for i in order]
    circ = None
    for i, p in enumerate(pts):
        if circ is None or not _inside(circ, p):
            circ = _with_one(pts[: i + 1], p)
    return Ball(circ[0], circ[1])
