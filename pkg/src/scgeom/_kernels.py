"""Hot numeric loops, each in a numba and a pure-numpy flavour.

The numba path is used when numba imports and ``SCG_DISABLE_NUMBA`` is not
set to a true value.  ``SCG_THREADS`` caps the numba worker count.  Both
paths return identical results up to floating point rounding of the
distance computations; reductions are min/max only, so results do not
depend on the number of threads.
"""

from __future__ import annotations

import os

import numpy as np

_FALSE = {"", "0", "false", "no", "off"}


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in _FALSE


try:
    if _flag("SCG_DISABLE_NUMBA"):
        raise ImportError("disabled by SCG_DISABLE_NUMBA")
    import numba

    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER = "workqueue"
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag in CI
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

if HAVE_NUMBA:
    _threads = os.environ.get("SCG_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

_CHUNK = 1 << 16


def crossing_brackets_np(B, eps):
    """Index pairs ``(i, j)`` where ``|B[j] - B[i]| - eps`` changes sign
    between ``j`` and ``j + 1`` (cyclically)."""
    n = len(B)
    rows_i, rows_j = [], []
    step = max(1, _CHUNK // max(n, 1))
    for s in range(0, n, step):
        blk = B[s : s + step]
        g = np.linalg.norm(B[None, :, :] - blk[:, None, :], axis=2) - eps
        neg = g < 0
        change = neg != np.roll(neg, -1, axis=1)
        i, j = np.nonzero(change)
        rows_i.append(i + s)
        rows_j.append(j)
    if not rows_i:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(rows_i).astype(np.int64), np.concatenate(rows_j).astype(np.int64)


def polygon_depth_np(P, V):
    """Signed distance to a CCW convex polygon: >0 inside, <0 outside."""
    A = V
    Bv = np.roll(V, -1, axis=0)
    E = Bv - A
    L = np.hypot(E[:, 0], E[:, 1])
    out = np.empty(len(P))
    for s in range(0, len(P), _CHUNK // max(len(V), 1) + 1):
        p = P[s : s + _CHUNK // max(len(V), 1) + 1]
        rel = p[:, None, :] - A[None, :, :]
        cross = (E[None, :, 0] * rel[:, :, 1] - E[None, :, 1] * rel[:, :, 0]) / L[None, :]
        inside = cross.min(axis=1)
        t = np.clip((rel * E[None]).sum(axis=2) / (L * L)[None, :], 0.0, 1.0)
        proj = A[None] + t[:, :, None] * E[None]
        dseg = np.linalg.norm(p[:, None, :] - proj, axis=2).min(axis=1)
        out[s : s + len(p)] = np.where(inside >= 0, inside, -dseg)
    return out


def disks_depth_np(P, C, R):
    """``min_c (R - |p - c|)`` for each row of ``P``."""
    out = np.empty(len(P))
    step = _CHUNK // max(len(C), 1) + 1
    for s in range(0, len(P), step):
        p = P[s : s + step]
        out[s : s + len(p)] = R - np.linalg.norm(p[:, None, :] - C[None, :, :], axis=2).max(axis=1)
    return out


def max_center_distance_np(P, C):
    """``max_c |p - c|`` for each row of ``P``."""
    out = np.empty(len(P))
    step = _CHUNK // max(len(C), 1) + 1
    for s in range(0, len(P), step):
        p = P[s : s + step]
        out[s : s + len(p)] = np.linalg.norm(p[:, None, :] - C[None, :, :], axis=2).max(axis=1)
    return out


def grid_pair_min_np(occ, depth, offsets):
    """Minimum midpoint depth over lattice pairs.

    ``occ`` and ``depth`` live on a fine lattice; pairs join two fine
    lattice points with all-even indices that differ by ``2 * a`` for an
    offset ``a`` in ``offsets``; the pair's midpoint is the fine point at
    ``2p + a``.  Returns ``(best, p_index, offset_row)`` with ``p_index``
    the fine multi-index of the first point, or ``(inf, None, -1)``.
    """
    shape = occ.shape
    d = len(shape)
    best = np.inf
    arg = (None, -1)
    for k, a in enumerate(offsets):
        src, dst, mid = [], [], []
        ok = True
        for ax in range(d):
            n = shape[ax]
            ai = int(a[ax])
            # fine coordinate f = 2p of the first point; partner at f + 2a; midpoint f + a
            lo = max(0, -2 * ai)
            hi = min(n, n - 2 * ai)
            if hi <= lo:
                ok = False
                break
            lo += lo % 2
            src.append(slice(lo, hi, 2))
            dst.append(slice(lo + 2 * ai, hi + 2 * ai, 2))
            mid.append(slice(lo + ai, hi + ai, 2))
        if not ok:
            continue
        both = occ[tuple(src)] & occ[tuple(dst)]
        if not both.any():
            continue
        vals = np.where(both, depth[tuple(mid)], np.inf)
        j = int(np.argmin(vals))
        v = vals.flat[j]
        if v < best:
            best = v
            local = np.unravel_index(j, vals.shape)
            arg = (tuple(src[ax].start + 2 * local[ax] for ax in range(d)), k)
    return best, arg[0], arg[1]


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def _crossing_counts(B, eps):
        n = B.shape[0]
        counts = np.zeros(n, np.int64)
        for i in prange(n):
            c = 0
            prev = np.sqrt((B[0, 0] - B[i, 0]) ** 2 + (B[0, 1] - B[i, 1]) ** 2) - eps < 0
            first = prev
            for j in range(n):
                if j + 1 < n:
                    cur = np.sqrt((B[j + 1, 0] - B[i, 0]) ** 2 + (B[j + 1, 1] - B[i, 1]) ** 2) - eps < 0
                else:
                    cur = first
                if cur != prev:
                    c += 1
                prev = cur
            counts[i] = c
        return counts

    @njit(parallel=True, cache=True)
    def _crossing_fill(B, eps, offs, I, J):
        n = B.shape[0]
        for i in prange(n):
            k = offs[i]
            prev = np.sqrt((B[0, 0] - B[i, 0]) ** 2 + (B[0, 1] - B[i, 1]) ** 2) - eps < 0
            first = prev
            for j in range(n):
                if j + 1 < n:
                    cur = np.sqrt((B[j + 1, 0] - B[i, 0]) ** 2 + (B[j + 1, 1] - B[i, 1]) ** 2) - eps < 0
                else:
                    cur = first
                if cur != prev:
                    I[k] = i
                    J[k] = j
                    k += 1
                prev = cur

    def crossing_brackets_nb(B, eps):
        B = np.ascontiguousarray(B, dtype=np.float64)
        if B.shape[1] != 2:
            return crossing_brackets_np(B, eps)
        counts = _crossing_counts(B, float(eps))
        offs = np.zeros(len(counts), np.int64)
        if len(counts) > 1:
            offs[1:] = np.cumsum(counts)[:-1]
        total = int(counts.sum())
        I = np.empty(total, np.int64)
        J = np.empty(total, np.int64)
        _crossing_fill(B, float(eps), offs, I, J)
        return I, J

    @njit(parallel=True, cache=True)
    def _polygon_depth(P, V):
        m = V.shape[0]
        out = np.empty(P.shape[0])
        for k in prange(P.shape[0]):
            px = P[k, 0]
            py = P[k, 1]
            inside = np.inf
            dseg = np.inf
            for i in range(m):
                ax = V[i, 0]
                ay = V[i, 1]
                j = i + 1 if i + 1 < m else 0
                ex = V[j, 0] - ax
                ey = V[j, 1] - ay
                L2 = ex * ex + ey * ey
                L = np.sqrt(L2)
                rx = px - ax
                ry = py - ay
                c = (ex * ry - ey * rx) / L
                if c < inside:
                    inside = c
                t = (rx * ex + ry * ey) / L2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                dx = rx - t * ex
                dy = ry - t * ey
                dd = np.sqrt(dx * dx + dy * dy)
                if dd < dseg:
                    dseg = dd
            out[k] = inside if inside >= 0 else -dseg
        return out

    def polygon_depth_nb(P, V):
        return _polygon_depth(np.ascontiguousarray(P, dtype=np.float64),
                              np.ascontiguousarray(V, dtype=np.float64))

    @njit(parallel=True, cache=True)
    def _max_center_distance(P, C):
        out = np.empty(P.shape[0])
        d = P.shape[1]
        for k in prange(P.shape[0]):
            best = 0.0
            for j in range(C.shape[0]):
                s = 0.0
                for a in range(d):
                    t = P[k, a] - C[j, a]
                    s += t * t
                if s > best:
                    best = s
            out[k] = np.sqrt(best)
        return out

    def max_center_distance_nb(P, C):
        return _max_center_distance(np.ascontiguousarray(P, dtype=np.float64),
                                    np.ascontiguousarray(C, dtype=np.float64))

    def disks_depth_nb(P, C, R):
        return R - max_center_distance_nb(P, C)

    @njit(parallel=True, cache=True)
    def _grid_pair_rows(occ, depth, offsets):
        n0, n1 = occ.shape
        rows = (n0 + 1) // 2
        row_best = np.full(rows, np.inf)
        row_col = np.full(rows, -1, np.int64)
        row_off = np.full(rows, -1, np.int64)
        for r in prange(rows):
            f0 = 2 * r
            for c in range(0, n1, 2):
                if not occ[f0, c]:
                    continue
                for k in range(offsets.shape[0]):
                    a0 = offsets[k, 0]
                    a1 = offsets[k, 1]
                    g0 = f0 + 2 * a0
                    g1 = c + 2 * a1
                    if g0 < 0 or g0 >= n0 or g1 < 0 or g1 >= n1:
                        continue
                    if not occ[g0, g1]:
                        continue
                    v = depth[f0 + a0, c + a1]
                    if v < row_best[r]:
                        row_best[r] = v
                        row_col[r] = c
                        row_off[r] = k
        return row_best, row_col, row_off

    def grid_pair_min_nb(occ, depth, offsets):
        if occ.ndim != 2:
            return grid_pair_min_np(occ, depth, offsets)
        rb, rc, ro = _grid_pair_rows(np.ascontiguousarray(occ), np.ascontiguousarray(depth, dtype=np.float64),
                                     np.ascontiguousarray(offsets, dtype=np.int64))
        if len(rb) == 0 or not np.isfinite(rb.min()):
            return np.inf, None, -1
        # first row attaining the minimum: same tie-break as a serial scan over rows
        r = int(np.argmin(rb))
        return float(rb[r]), (2 * r, int(rc[r])), int(ro[r])


if HAVE_NUMBA:
    crossing_brackets = crossing_brackets_nb
    polygon_depth = polygon_depth_nb
    disks_depth = disks_depth_nb
    max_center_distance = max_center_distance_nb
    grid_pair_min = grid_pair_min_nb
else:
    crossing_brackets = crossing_brackets_np
    polygon_depth = polygon_depth_np
    disks_depth = disks_depth_np
    max_center_distance = max_center_distance_np
    grid_pair_min = grid_pair_min_np
