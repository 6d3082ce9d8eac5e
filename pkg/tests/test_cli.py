"""Command-line surface: exit codes, json schema, determinism."""
import json
import subprocess
import sys

import pytest

from endscope.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "endscope/1"
    assert "certainty" in rep and "depth" in rep
    return rep


def test_ends_ladder(capsys):
    rep = run_json(capsys, "ends", "--graph", "ladder", "--notion", "vertex", "--depth", "8")
    assert rep["result"]["lower_bound"] == 2
    assert rep["result"]["status"] == "StabilizedCertified"
    assert rep["depth"] == 8


def test_separate_x2_edge(capsys):
    code, out, _ = run(capsys, "separate", "--graph", "x2", "--rays", "L1,L2", "--notion", "edge", "--depth", "10")
    assert code == 0
    assert "EquivalentCertified" in out


def test_separate_json_has_certificate(capsys):
    rep = run_json(capsys, "separate", "--graph", "ladder", "--rays", "top-right,top-left", "--depth", "6")
    assert rep["certainty"] == "Separated"
    assert rep["result"]["certificate"]["kinds"]["vertex"] == "YesCertified"


def test_walk_is_byte_identical(capsys):
    argv = ("walk", "--graph", "free:r=1", "--mu", "uniform4", "--steps", "500", "--traj", "40", "--seed", "7",
            "--prefix", "1", "--json")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    rep = json.loads(a)
    assert rep["result"]["stabilization_fraction"] >= 0.9


def test_walk_measure_file(capsys, tmp_path):
    f = tmp_path / "mu.txt"
    f.write_text("g1 0.25\ng1^-1 0.25\ng2 0.25\ng2^-1 0.25\n")
    rep = run_json(capsys, "walk", "--graph", "free:r=1", "--mu", str(f), "--steps", "50", "--traj", "4")
    assert rep["result"]["trajectories"] == 4


def test_unnormalized_measure_exit_2(capsys, tmp_path):
    f = tmp_path / "mu.txt"
    f.write_text("g1 0.5\ng2 0.4\n")
    code, _, err = run(capsys, "walk", "--graph", "free:r=1", "--mu", str(f))
    assert code == 2
    assert "normalized" in err


@pytest.mark.parametrize("argv", [
    ("ends", "--graph", "nope"),
    ("separate", "--graph", "ladder", "--rays", "top-right,sideways"),
    ("separate", "--graph", "ladder", "--rays", "top-right"),
    ("walk", "--graph", "ladder"),
    ("classify", "--graph", "ladder"),
    ("separate", "--graph", "x1", "--rays", "L1,L2", "--notion", "metric"),
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("endscope:")


def test_unexplored_exit_3(capsys):
    code, _, _ = run(capsys, "star", "--graph", "ladder", "--depth", "3", "--center", "(40,t)")
    assert code == 3


def test_star_and_explore_and_classify(capsys):
    rep = run_json(capsys, "star", "--graph", "star-paths", "--depth", "16")
    assert rep["result"]["score"] == 14
    rep = run_json(capsys, "explore", "--graph", "ladder", "--depth", "3")
    assert rep["result"]["layer_sizes"] == [1, 3, 4, 4]
    rep = run_json(capsys, "classify", "--graph", "star-paths", "--sequence", "endpoints", "--depth", "8")
    assert rep["result"]["case"] == "StarEnd"


def test_qi_preset(capsys):
    rep = run_json(capsys, "qi", "--qi", "ladder-line")
    res = rep["result"]
    assert res["axioms"]["verdict"] == "NoViolationFound"
    assert res["quasi_open"]["verdict"] == "OpenEvidence"
    assert res["diameter_transfer"] == []


def test_argparse_errors_exit_2():
    proc = subprocess.run([sys.executable, "-m", "endscope.cli", "ends", "--notion", "blue"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
