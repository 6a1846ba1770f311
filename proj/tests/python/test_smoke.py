import json
import os
from pathlib import Path

import pytest

import zcap

DATA = Path(__file__).resolve().parent.parent / "data"


def test_collinearity_examples():
    assert zcap.is_collinear([(1, 2), (76, 57), (251, 102)], 625)
    assert not zcap.is_collinear([(0, 0), (2, 4), (4, 4)], 8)


def test_lines():
    assert zcap.psi(144) == 288
    assert len(zcap.enumerate_lines(12)) == 288
    assert len(zcap.lines_through((3, 7), 12)) == 24
    with pytest.raises(ValueError):
        zcap.lines_through((12, 0), 12)


def test_solve_records():
    r = zcap.solve("m2", 9)
    assert r["value"] == 9 and r["status"] == "optimal"
    assert zcap.is_cap([tuple(p) for p in r["cap"]], 9)
    assert zcap.solve("sigma", 12)["value"] == 12
    n2 = zcap.solve("n2", 7)
    assert n2["value"] == 6
    assert zcap.is_complete([tuple(p) for p in n2["cap"]], 7)
    json.dumps(r)
    with pytest.raises(ValueError):
        zcap.solve("m3", 5)


def test_forced_points_and_cuts():
    r = zcap.solve("m2", 7, forced_in=[(0, 0)], cuts=[{"kind": "cardinality-lower-bound", "bound": 8}])
    assert "cap" not in r


def test_symmetry():
    pts = [(1, 2), (3, 5), (6, 0)]
    img = zcap.apply_affine((2, 1, 1, 1), (3, 4), pts, 7)
    assert zcap.orbit_canonical(pts, 7) == zcap.orbit_canonical(img, 7)
    cuts = zcap.wlog_cuts([], [(0, 0)], 5)
    assert cuts == [{"kind": "fix-one", "points": [(0, 0)], "bound": 0}]
    with pytest.raises(ValueError):
        zcap.apply_affine((2, 0, 0, 1), (0, 0), pts, 6)


def test_ilp(tmp_path):
    assert zcap.model_size("m2", 5) == (25, 30)
    assert zcap.model_size("sigma", 5) == (25, 40)
    assert zcap.model_size("n2", 5) == (55, 85)
    text = zcap.lp_text("n2", 3)
    assert text.splitlines()[1] == "Minimize"
    out = tmp_path / "m2_5.lp"
    zcap.write_lp("m2", 5, out, [{"kind": "fix-one", "points": [(0, 0)]}])
    assert "fix1_0_0" in out.read_text()


def test_cap20_file():
    n, pts = zcap.read_cap_file(DATA / "cap20_n25.txt")
    assert n == 25 and len(pts) == 20
    assert zcap.is_cap(pts, 25)
    assert zcap.evaluate_points("m2", 25, pts) == (True, 20)


def test_parse_error(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("n 5\n1 1\n1 1\n")
    with pytest.raises(zcap.ParseError, match="line 3"):
        zcap.read_cap_file(bad)


def test_greedy():
    cap = zcap.greedy_complete([], 5, seed=3)
    assert zcap.is_complete(cap, 5)
    assert zcap.extendable_points(cap, 5) == []
