"""Serialization: body JSON, modulus CSV, SVG drawings, atomic writes."""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .bodies import ConvexPolygon, DiskPolygon, ImplicitBody
from .errors import GeometryError
from .geometry_core import DEFAULT_TOL, Tolerance
from .reports import json_number


# -- canonical JSON -----------------------------------------------------------


def _fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return json.dumps(json_number(x))
    s = format(x, ".17g")
    if s == "-0":
        s = "0"
    return s


def canonical_dumps(obj) -> str:
    """Compact JSON with every float printed to 17 significant digits.

    Loading and dumping again reproduces the same bytes, which plain
    ``json.dumps`` (shortest repr) would too, but the fixed precision
    keeps files written by other tools comparable after one pass.
    """
    if isinstance(obj, dict):
        return "{" + ",".join(json.dumps(str(k)) + ":" + canonical_dumps(v) for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_dumps(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return canonical_dumps(obj.tolist())
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_atomic(path, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- bodies -------------------------------------------------------------------


def _points(data, name, d=None):
    try:
        P = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise GeometryError(f"{name}: expected a list of points") from e
    if P.ndim != 2 or P.shape[0] == 0 or (d is not None and P.shape[1] != d):
        raise GeometryError(f"{name}: expected a non-empty list of {d or 'd'}-dimensional points")
    if not np.all(np.isfinite(P)):
        raise GeometryError(f"{name}: coordinates must be finite")
    return P


def body_from_json(data, tol: Tolerance = DEFAULT_TOL):
    """Build a body from its JSON dictionary."""
    if not isinstance(data, dict) or "kind" not in data:
        raise GeometryError("body JSON must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "polygon":
            return ConvexPolygon(_points(data["vertices"], "vertices", 2), tol)
        if kind == "disk_polygon":
            return DiskPolygon(_points(data["centers"], "centers", 2), float(data["radius"]), tol)
        if kind == "implicit_grid":
            from .oracles import GridBody

            return GridBody.from_json(data, tol)
        if kind == "ellipse":
            return ImplicitBody.ellipse(data["semi_axes"], data.get("center", [0.0] * len(data["semi_axes"])), tol)
        if kind == "ball_union":
            return ImplicitBody.union_of_balls(_points(data["centers"], "centers"), float(data["radius"]), tol=tol)
    except KeyError as e:
        raise GeometryError(f"{kind} body is missing field {e.args[0]!r}") from e
    raise GeometryError(f"unknown body kind {kind!r}")


def body_to_json(body) -> str:
    return canonical_dumps(body.to_json())


def load_json(path):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise GeometryError(f"{path}: invalid JSON ({e.msg})") from e


def load_body(path, tol: Tolerance = DEFAULT_TOL):
    return body_from_json(load_json(path), tol)


def save_body(body, path) -> None:
    write_atomic(path, body_to_json(body) + "\n")


def load_points(path) -> np.ndarray:
    """A JSON list of 2D points."""
    return _points(load_json(path), os.fspath(path), 2)


# -- modulus tables -----------------------------------------------------------


def modulus_csv(samples) -> str:
    """``epsilon,delta,ratio`` rows; the ratio is blank for infinite deltas."""
    rows = ["epsilon,delta,ratio"]
    for s in samples:
        d = s.delta
        if math.isfinite(d):
            rows.append(f"{_fmt_float(s.eps)},{_fmt_float(d)},{_fmt_float(d / s.eps**2)}")
        else:
            rows.append(f"{_fmt_float(s.eps)},{'inf' if d > 0 else '-inf'},")
    return "\n".join(rows) + "\n"


# -- SVG ------------------------------------------------------------------------


def _n(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _pt(p) -> str:
    # y axis flipped so the drawing reads like the usual plot
    return f"{_n(p[0])},{_n(-p[1])}"


def _path(body) -> str:
    if isinstance(body, DiskPolygon):
        if body.degenerate == "point":
            return ""
        A = body.arcs
        parts = [f"M {_pt(A[0].start)}"]
        R = _n(body.radius)
        for a in A:
            # halves keep full circles drawable; counterclockwise in the plane
            # is the negative-angle sweep once y is flipped
            for q in (a.midpoint, a.end):
                parts.append(f"A {R} {R} 0 0 0 {_pt(q)}")
        return " ".join(parts) + " Z"
    if isinstance(body, ConvexPolygon):
        V = body.vertices
        return "M " + " L ".join(_pt(v) for v in V) + (" Z" if len(V) > 2 else "")
    if body.dim != 2:
        raise GeometryError("only planar bodies can be drawn")
    P = body.boundary_points(np.linspace(0.0, 1.0, 257)[:-1])
    return "M " + " L ".join(_pt(p) for p in P) + " Z"


def svg(body, points=None, witness=None) -> str:
    """SVG drawing of a planar body with optional input points and witness
    points.  The view box is the bounding box padded by 5% per side."""
    lo, hi = (np.asarray(b, dtype=float) for b in body.bbox())
    extra = [np.asarray(p, dtype=float).reshape(-1, 2) for p in (points, witness) if p is not None]
    for E in extra:
        lo = np.minimum(lo, E.min(axis=0))
        hi = np.maximum(hi, E.max(axis=0))
    pad = 0.05 * np.maximum(hi - lo, 1e-9)
    lo, hi = lo - pad, hi + pad
    w, h = hi - lo
    stroke = _n(0.004 * max(w, h))
    dot = _n(0.008 * max(w, h))
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_n(lo[0])} {_n(-hi[1])} {_n(w)} {_n(h)}">',
    ]
    d = _path(body)
    if d:
        out.append(f'<path d="{d}" fill="#cde" stroke="#246" stroke-width="{stroke}"/>')
    elif isinstance(body, DiskPolygon):
        out.append(f'<circle cx="{_n(body.point[0])}" cy="{_n(-body.point[1])}" r="{dot}" fill="#246"/>')
    for E, color in zip(extra, ("#000", "#c22") if points is not None else ("#c22",)):
        for p in E:
            out.append(f'<circle cx="{_n(p[0])}" cy="{_n(-p[1])}" r="{dot}" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
