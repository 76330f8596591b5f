"""``scgeom`` command line.

Exit codes: 0 success (or certified), 1 bad input or usage, 2 infeasible
hull, 3 refuted, 4 inconclusive.  Every run writes a manifest next to its
primary output (or to ``--manifest``) recording the command, inputs,
parameters, seed, version and wall time.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from importlib import metadata

import numpy as np

from . import io
from .errors import GeometryError, NoContainingBallError, ScheduleError
from .modulus import delta_omega, limit_estimate
from .rconvex import is_r_convex, r_hull
from .reports import json_number
from .verify import SUITES, format_table, run_suite, suite_report

log = logging.getLogger("scgeom")

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
VERDICT_EXIT = {"certified": EXIT_OK, "refuted": EXIT_REFUTED, "inconclusive": EXIT_INCONCLUSIVE}


def _version() -> str:
    try:
        return metadata.version("scgeom")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        return "0+unknown"


def _eps_list(text: str):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not vals or any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("epsilons must be positive")
    return vals


def _coords(text: str):
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated point: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scgeom", description="Strongly convex set toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    p.add_argument("--manifest", help="manifest path (default: <primary output>.manifest.json)")
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hull", help="r-hull of planar points as a disk-polygon")
    h.add_argument("--points", required=True, help="JSON list of 2D points")
    h.add_argument("--radius", type=float, required=True)
    h.add_argument("--json", help="write the disk-polygon JSON here (default: stdout)")
    h.add_argument("--svg", help="write an SVG drawing here")

    le = sub.add_parser("lens", help="lens of two points")
    le.add_argument("--x", type=_coords, required=True, help="first point, comma separated (use --x=-1,0 for negatives)")
    le.add_argument("--y", type=_coords, required=True, help="second point, comma separated")
    le.add_argument("--radius", type=float, required=True)
    le.add_argument("--json", help="output path (default: stdout)")

    m = sub.add_parser("modulus", help="modulus of convexity at given epsilons")
    m.add_argument("--body", required=True)
    m.add_argument("--eps-list", type=_eps_list, required=True)
    m.add_argument("--csv", help="output path (default: stdout)")

    li = sub.add_parser("limit", help="extrapolated limit of delta/eps^2")
    li.add_argument("--body", required=True)
    li.add_argument("--eps0", type=float, required=True)
    li.add_argument("--k", type=int, default=8)
    li.add_argument("--csv", help="write the sample table here")
    li.add_argument("--json", help="output path (default: stdout)")

    c = sub.add_parser("check", help="decide r-convexity")
    c.add_argument("--body", required=True)
    c.add_argument("--radius", type=float, required=True)
    c.add_argument("--method", choices=("auto", "support", "threshold"), default="auto")
    c.add_argument("--json", help="output path (default: stdout)")
    c.add_argument("--svg", help="draw the body and witness here")

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", help="write the JSON report here")
    return p


def _emit(path, text):
    if path:
        io.write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _positive(name, value):
    if not value > 0:
        raise GeometryError(f"{name} must be positive")


def _hull(a, params):
    _positive("radius", a.radius)
    pts = io.load_points(a.points)
    H = r_hull(pts, a.radius)
    params["arcs"] = len(H.arcs)
    _emit(a.json, io.body_to_json(H) + "\n")
    if a.svg:
        io.write_atomic(a.svg, io.svg(H, points=pts))
    return EXIT_OK


def _lens(a, params):
    from .lens_arc import UNIVERSE, lens

    _positive("radius", a.radius)
    L = lens(a.x, a.y, a.radius)
    if L is UNIVERSE:
        out = {"kind": "universe"}
    else:
        out = {"kind": L.kind, "x": L.x.tolist(), "y": L.y.tolist(), "r": L.r,
               "midpoint": L.midpoint.tolist(), "offset": L.boundary_offset(),
               "centers": [np.asarray(c).tolist() for c in L.centers]}
    _emit(a.json, io.canonical_dumps(out) + "\n")
    return EXIT_OK


def _modulus(a, params):
    body = io.load_body(a.body)
    samples = [delta_omega(body, e) for e in a.eps_list]
    _emit(a.csv, io.modulus_csv(samples))
    return EXIT_OK


def _limit(a, params):
    _positive("eps0", a.eps0)
    if a.k < 1:
        raise GeometryError("k must be at least 1")
    body = io.load_body(a.body)
    est = limit_estimate(body, a.eps0, a.k)
    if a.csv:
        io.write_atomic(a.csv, io.modulus_csv(est.moduli))
    out = {"value": json_number(est.value), "cauchy_residual": json_number(est.cauchy_residual),
           "eps0": a.eps0, "k": a.k, "samples": [[json_number(e), json_number(q)] for e, q in est.samples]}
    _emit(a.json, io.canonical_dumps(out) + "\n")
    return EXIT_OK


def _check(a, params):
    _positive("radius", a.radius)
    body = io.load_body(a.body)
    rep = is_r_convex(body, a.radius, method=a.method)
    params["verdict"] = rep.verdict
    _emit(a.json, io.canonical_dumps(rep.to_json()) + "\n")
    if a.svg and body.dim == 2:
        io.write_atomic(a.svg, io.svg(body, witness=None if rep.witness is None else
                                      [w for w in rep.witness if len(w) == 2][-1:]))
    return VERDICT_EXIT[rep.verdict]


def _verify(a, params):
    if a.suite not in SUITES:
        raise GeometryError(f"unknown suite {a.suite!r}; known: {', '.join(sorted(SUITES))}")
    outcomes, wall = run_suite(a.suite, a.seed)
    print(format_table(outcomes))
    params["wall_time_suite"] = round(wall, 6)
    if not all(o.passed for o in outcomes):
        return EXIT_INPUT
    if a.json:
        io.write_atomic(a.json, io.canonical_dumps(suite_report(a.suite, a.seed, outcomes)) + "\n")
    return EXIT_OK


COMMANDS = {"hull": _hull, "lens": _lens, "modulus": _modulus, "limit": _limit, "check": _check, "verify": _verify}
INPUT_KEYS = ("points", "body")
OUTPUT_KEYS = ("json", "csv", "svg")


def _manifest_path(a):
    if a.manifest:
        return a.manifest
    for k in OUTPUT_KEYS:
        if getattr(a, k, None):
            return getattr(a, k) + ".manifest.json"
    return None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    params = {k: v for k, v in vars(a).items()
              if k not in ("command", "verbose", "manifest") + INPUT_KEYS + OUTPUT_KEYS}
    t0 = time.perf_counter()
    try:
        code = COMMANDS[a.command](a, params)
    except NoContainingBallError as e:
        print(f"infeasible: minimal enclosing radius {e.enclosing_radius!r} exceeds the radius", file=sys.stderr)
        params["enclosing_radius"] = e.enclosing_radius
        code = EXIT_INFEASIBLE
    except ScheduleError as e:
        print(f"schedule error: {e}", file=sys.stderr)
        code = EXIT_INPUT
    except (GeometryError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_INPUT
    path = _manifest_path(a)
    if path:
        manifest = {
            "command": a.command,
            "inputs": {k: getattr(a, k) for k in INPUT_KEYS if getattr(a, k, None)},
            "parameters": params,
            "seed": getattr(a, "seed", 0),
            "version": _version(),
            "exit_code": code,
            "wall_time": round(time.perf_counter() - t0, 6),
        }
        try:
            io.write_atomic(path, json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
        except OSError as e:
            print(f"error: cannot write manifest: {e}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
