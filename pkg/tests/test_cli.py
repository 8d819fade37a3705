import json

import pytest

from etcs.cli import main

from conftest import DATA

I = DATA / "instances"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nu_bar(capsys):
    code, out, _ = run(capsys, "nu-bar", I / "twisted_k3_1.json")
    assert code == 0 and "nu_bar: -19" in out and "nu_mod48: 5" in out
    code, out, _ = run(capsys, "nu-bar", I / "sixth_angle.json", "--json")
    assert code == 0 and json.loads(out)["nu_bar"] == -48


def test_nu_bar_invalid(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "etcs/1", "block_plus": {}}))
    code, _, err = run(capsys, "nu-bar", bad)
    assert code == 1 and "error" in err


def test_cross_check(capsys):
    code, out, _ = run(capsys, "cross-check", I / "twisted_k3_1.json", DATA / "polygons" / "twisted_k3_1.json")
    assert code == 0 and "verdict: pass" in out and "cusp_sum: 11/3" in out


def test_cross_check_failure_exit_code(capsys, tmp_path):
    poly = json.loads((DATA / "polygons" / "twisted_k3_1.json").read_text())
    poly["cusps"][2] = {"base": "-1/3", "x": "inf", "y": "-2/9"}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(poly))
    code, out, _ = run(capsys, "cross-check", I / "twisted_k3_1.json", path)
    assert code == 2 and "verdict: fail" in out


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate-gluings", "--k-plus", 1, "--k-minus", 1, "--bound", 3)
    assert code == 0 and out.startswith("1 class(es)") and "G=[[0,1],[1,0]]" in out
    code, out, _ = run(capsys, "enumerate-gluings", "--k-plus", 3, "--eps-plus", -1, "--k-minus", 1, "--bound", 3, "--json")
    reps = [c["representative"]["G"] for c in json.loads(out)]
    assert [[1, 1], [2, -1]] in reps


def test_config_check(capsys):
    code, out, _ = run(capsys, "config-check", DATA / "configurations" / "cos2_zero_lambda.json", "--cos2", "0")
    assert code == 0 and "[[4, 5, 16], [5, 2, -16], [16, -16, -272]]" in out
    code, out, _ = run(capsys, "config-check", DATA / "configurations" / "cos2_one_third.json", "--cos2", "1/5")
    assert code == 1 and "condition_ii(1/5): fail" in out


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--b3", 101, "--d", 8, "--mu", 1)
    assert code == 0 and "smooth_structures: 2" in out and "g2_classes_total: 24" in out
    code, out, _ = run(capsys, "classify", "--b3", 1, "--d", 24)
    assert "g2_classes_per_nu: 3" in out and "g2_classes_total: 72" in out


def test_defect(capsys):
    code, out, _ = run(capsys, "defect", "--chi", 12, "--sigma", 4, "--n-plus", 0, "--p-sq", 4, "--d", 2)
    assert code == 0 and "xi: 0 mod 12" in out
    code, _, _ = run(capsys, "defect", "--chi", 0, "--sigma", 1, "--n-plus", 0, "--p-sq", 0)
    assert code == 1


def test_eta(capsys):
    code, out, _ = run(capsys, "eta", "--k", 3, "--eps", -1, "--s-sq", "2")
    assert code == 0 and "F_small: 0.26641385827" in out
    code, _, err = run(capsys, "eta", "--k", 7, "--eps", 2, "--s-sq", "2")
    assert code == 1 and "c_{7,2}" in err


def test_render_torus(capsys, tmp_path):
    out_file = tmp_path / "fig.svg"
    code, _, _ = run(capsys, "render-torus", DATA / "gluings" / "k3_1_twisted.json", "-o", out_file)
    svg = out_file.read_text()
    assert code == 0 and svg.startswith("<svg") and ">du-</text>" in svg
    code, _, _ = run(capsys, "render-torus", DATA / "gluings" / "right_angle.json", "-o", out_file)
    assert code == 1
    code, out, _ = run(capsys, "render-torus", DATA / "gluings" / "right_angle.json", "--s-plus-sq", "2")
    assert code == 0 and "<svg" in out


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "etcs", "classify", "--b3", "1", "--d", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and "smooth_structures: 1" in r.stdout
