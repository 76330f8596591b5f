import json

import numpy as np
import pytest

from scgeom import cli, io
from scgeom.bodies import ConvexPolygon, ImplicitBody, intersect_disks
from scgeom.errors import GeometryError
from scgeom.fixtures import seeded_points, unit_disk, unit_square


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.mark.parametrize("body", [
    ConvexPolygon([[0.1, 0.2], [1.0, 0.0], [0.7, 0.9]]),
    intersect_disks([[0.0, 0.0], [0.3, 0.1], [0.1, 0.5]], 1.0),
    ImplicitBody.ellipse([2.0, 1.0]),
    ImplicitBody.union_of_balls([[-1.0, 0.0], [1.0, 0.0]], 1.0),
])
def test_json_round_trip_is_byte_stable(body, tmp_path):
    p = tmp_path / "b.json"
    io.save_body(body, p)
    first = p.read_bytes()
    io.save_body(io.load_body(p), p)
    assert p.read_bytes() == first


def test_canonical_floats():
    assert io.canonical_dumps({"a": [0.1, 1.0, -0.0, float("inf")]}) == '{"a":[0.10000000000000001,1,0,"inf"]}'


def test_bad_bodies():
    with pytest.raises(GeometryError):
        io.body_from_json({"kind": "blob"})
    with pytest.raises(GeometryError):
        io.body_from_json({"kind": "polygon"})
    with pytest.raises(GeometryError):
        io.body_from_json({"kind": "polygon", "vertices": [[0, 0, 0]]})


def test_svg_format():
    s = io.svg(unit_disk())
    assert s.startswith("<svg") and 'viewBox="-1.100000 -1.100000 2.200000 2.200000"' in s
    assert " A 1.000000 1.000000 0 0 0 " in s
    assert "<path" in io.svg(unit_square())


def test_cli_hull_diameter_case(tmp_path, capsys):
    pts = _write(tmp_path / "p.json", [[0, 0], [2, 0]])
    assert cli.main(["hull", "--points", pts, "--radius", "1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"kind": "disk_polygon", "centers": [[1, 0]], "radius": 1}


def test_cli_hull_infeasible(tmp_path, capsys):
    pts = _write(tmp_path / "p.json", [[0, 0], [4, 0]])
    out = tmp_path / "h.json"
    assert cli.main(["hull", "--points", pts, "--radius", "1", "--json", str(out)]) == 2
    assert "2.0" in capsys.readouterr().err
    assert not out.exists()
    man = json.loads((tmp_path / "h.json.manifest.json").read_text())
    assert man["exit_code"] == 2 and man["parameters"]["enclosing_radius"] == 2.0


def test_cli_hull_then_check(tmp_path, capsys):
    pts = _write(tmp_path / "p.json", seeded_points(20, 0).tolist())
    h, svg = tmp_path / "h.json", tmp_path / "h.svg"
    assert cli.main(["hull", "--points", pts, "--radius", "2", "--json", str(h), "--svg", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")
    man = json.loads((tmp_path / "h.json.manifest.json").read_text())
    assert man["command"] == "hull" and man["seed"] == 0 and "wall_time" in man and man["version"]
    assert cli.main(["check", "--body", str(h), "--radius", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "certified"


def test_cli_malformed_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert cli.main(["hull", "--points", str(bad), "--radius", "1"]) == 1
    assert cli.main(["hull", "--points", str(tmp_path / "missing.json"), "--radius", "1"]) == 1
    assert cli.main(["hull", "--radius", "1"]) == 1


def test_cli_check_exit_codes(tmp_path, capsys):
    d, s, e = tmp_path / "d.json", tmp_path / "s.json", tmp_path / "e.json"
    io.save_body(unit_disk(), d)
    io.save_body(unit_square(), s)
    io.save_body(ImplicitBody.ellipse([2.0, 1.0]), e)
    assert cli.main(["check", "--body", str(d), "--radius", "1"]) == 0
    capsys.readouterr()
    assert cli.main(["check", "--body", str(s), "--radius", "1"]) == 3
    rep = json.loads(capsys.readouterr().out)
    assert rep["method"] == "flat_edge" and rep["witness"] is not None
    assert set(rep) == {"verdict", "r", "method", "samples", "witness"}
    assert cli.main(["check", "--body", str(e), "--radius", "4.5", "--method", "support"]) == 4


def test_cli_modulus_and_limit(tmp_path, capsys):
    d, s = tmp_path / "d.json", tmp_path / "s.json"
    io.save_body(unit_disk(), d)
    io.save_body(unit_square(), s)
    csv = tmp_path / "m.csv"
    assert cli.main(["modulus", "--body", str(s), "--eps-list", "0.5,0.25", "--csv", str(csv)]) == 0
    rows = csv.read_text().splitlines()
    assert rows[0] == "epsilon,delta,ratio" and all(r.split(",")[2] == "0" for r in rows[1:])
    assert cli.main(["limit", "--body", str(d), "--eps0", "0.5", "--k", "8"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["value"] - 0.125) < 1e-3 and out["cauchy_residual"] < 1e-3
    assert cli.main(["limit", "--body", str(d), "--eps0", "3", "--k", "2"]) == 1


def test_cli_lens(capsys):
    assert cli.main(["lens", "--x=-2,0", "--y=2,0", "--radius", "1"]) == 0
    assert json.loads(capsys.readouterr().out) == {"kind": "universe"}
    assert cli.main(["lens", "--x=-0.5,0", "--y=0.5,0", "--radius", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["offset"] == pytest.approx(1 - np.sqrt(0.75))


def test_cli_unknown_suite(capsys):
    assert cli.main(["verify", "--suite", "nope"]) == 1
