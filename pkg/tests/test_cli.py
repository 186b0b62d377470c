import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from anosov_kit.cli import run
from anosov_kit.config import ConfigError, load_config
from anosov_kit.schemas import SCHEMAS


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


COMMANDS = [
    ("orbits", ["orbits", "--period", "3", "--brute-force"]),
    ("nielsen", ["nielsen"]),
    ("symmetries", ["symmetries", "--bound", "2"]),
    ("homology", ["homology", "--k", "5"]),
    ("orbit-space", ["orbit-space", "--demo", "4", "--deck-window", "2"]),
    ("surgery-check", ["surgery-check", "--k", "5", "--samples", "500"]),
    ("certificate", ["certificate", "--k", "5", "--samples", "500"]),
]


@pytest.mark.parametrize("name, argv", COMMANDS)
def test_json_validates_and_is_stable(name, argv):
    code, first, _ = invoke(*argv)
    assert code == 0
    jsonschema.validate(json.loads(first), SCHEMAS[name])
    _, second, _ = invoke(*argv)
    assert first == second


@pytest.mark.parametrize("name, argv", COMMANDS)
def test_csv_output(name, argv):
    code, out, _ = invoke(*argv, "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows


def test_orbits_period_three():
    code, out, _ = invoke("orbits", "--period", "3", "--brute-force")
    data = json.loads(out)
    assert data["fixed_point_count"] == 16 == data["brute_force_count"] == len(data["fixed_points"])
    assert data["orbit_count"] == 5
    point_sets = [sorted(map(tuple, o["points"])) for o in data["orbits"]]
    assert sorted([("1/4", "0/1"), ("1/2", "1/4"), ("1/4", "3/4")]) in point_sets
    assert sorted([("3/4", "0/1"), ("1/2", "3/4"), ("3/4", "1/4")]) in point_sets


def test_nielsen_default_pair():
    data = json.loads(invoke("nielsen")[1])
    assert data["freely_homotopic"] is False
    assert data["g2_maps_first_to_second"] is True
    assert [c["holonomy"] for c in data["classes"]] == [["3", "2"], ["9", "6"]]


def test_certificate_and_replay_files(tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = invoke("certificate", "--k", "6", "--samples", "500", "--out", str(path))
    assert code == 0
    assert json.loads(path.read_text()) == json.loads(out)
    code, out, _ = invoke("replay", "--in", str(path))
    assert code == 0
    jsonschema.validate(json.loads(out), SCHEMAS["replay"])
    assert json.loads(out)["replayed"] is True

    data = json.loads(path.read_text())
    w = next(w for w in data["witnesses"] if w["label"] == "f2")["data"]
    w["beta1"], w["beta2"] = w["beta2"], w["beta1"]
    path.write_text(json.dumps(data))
    code, out, _ = invoke("replay", "--in", str(path))
    assert code == 1 and json.loads(out)["replayed"] is False

    data["k"] = 7
    path.write_text(json.dumps(data))
    code, _, err = invoke("replay", "--in", str(path))
    assert code == 1 and "StaleHash" in err


def test_premise_violation_exit_code():
    code, out, err = invoke("certificate", "--k", "2")
    assert code == 1
    assert "PremiseViolated" in err and "HYPERBOLIC_K" in err
    assert out == ""


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["orbits"], "--period"),
        (["orbits", "--period", "0"], "--period"),
        (["symmetries", "--bound", "x"], "--bound"),
        (["nielsen", "--seeds", "1/4", "0,0"], "--seeds"),
        (["homology", "--format", "xml"], "--format"),
        (["frobnicate"], "frobnicate"),
    ],
)
def test_usage_errors(argv, flag, capsys):
    assert run(argv) == 2
    assert flag in capsys.readouterr().err


def test_bad_replay_path(tmp_path):
    code, _, err = invoke("replay", "--in", str(tmp_path / "missing.json"))
    assert code == 2 and "--in" in err


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"k": 7, "samples": 400, "precision": 6}))
    data = json.loads(invoke("surgery-check", "--config", str(cfg))[1])
    assert data["k"] == 7 and data["samples"] % 400 == 0
    assert data["margin"] == float(format(data["margin"], ".6g"))
    assert data["lipschitz_slack"] == float(format(data["lipschitz_slack"], ".6g"))
    data = json.loads(invoke("surgery-check", "--config", str(cfg), "--k", "-3")[1])
    assert data["k"] == -3


def test_non_hyperbolic_monodromy_is_rejected(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"monodromy": [[1, 1], [0, 1]]}))
    code, _, err = invoke("orbits", "--period", "2", "--config", str(cfg))
    assert code == 2 and "trace" in err
    # Homology is not a dynamics command and still runs.
    assert invoke("homology", "--config", str(cfg), "--k", "3")[0] == 0


def test_bad_config_values(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert invoke("homology", "--config", str(cfg))[0] == 2
    with pytest.raises(ConfigError):
        load_config(samples=10)
    with pytest.raises(ConfigError):
        load_config(monodromy=[[2, 0], [0, 1]])


def test_seed_environment_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 1}))
    assert load_config(cfg, env={}).seed == 1
    assert load_config(cfg, env={"ANOSOV_KIT_SEED": "9"}).seed == 9
    assert load_config(None, env={"ANOSOV_KIT_SEED": "9"}, seed=4).seed == 4
    with pytest.raises(ConfigError):
        load_config(None, env={"ANOSOV_KIT_SEED": "x"})


def test_seed_changes_demo(monkeypatch):
    monkeypatch.setenv("ANOSOV_KIT_SEED", "3")
    a = invoke("orbit-space", "--demo", "3")[1]
    monkeypatch.setenv("ANOSOV_KIT_SEED", "4")
    b = invoke("orbit-space", "--demo", "3")[1]
    assert a != b and json.loads(a)["seed"] == 3


def test_surgery_csv_file(tmp_path):
    path = tmp_path / "curve.csv"
    code, _, _ = invoke("surgery-check", "--k", "-7", "--samples", "300", "--csv", str(path))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert rows and set(rows[0]) == {"theta", "t"}


def test_module_entry_point_is_byte_identical():
    argv = [sys.executable, "-m", "anosov_kit", "symmetries", "--bound", "1"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["group"]["identification"] == "D4"
