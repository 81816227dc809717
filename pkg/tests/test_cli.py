from __future__ import annotations

import json

import pytest

from bvworldline import checks as C
from bvworldline.cli import main, read_config

REPORT_KEYS = ["check_id", "status", "params", "residual", "duration_ms", "seed"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list_is_stable_and_complete(capsys):
    code, a, _ = run_cli(capsys, "list")
    _, b, _ = run_cli(capsys, "list")
    assert code == 0 and a == b
    lines = a.splitlines()
    assert len(lines) == len(C.REGISTRY)
    assert any(l.startswith("tw.g0_identity — ") for l in lines)
    assert any(l.startswith("clifford.commute_lemma — ") for l in lines)
    groups = {l.split(".")[0] for l in lines}
    assert {"clifford", "bracket", "particle", "super", "tw", "ce", "mc"} <= groups


def test_particle_master_json(capsys):
    code, out, _ = run_cli(capsys, "check", "particle.master", "--report", "json")
    assert code == 0
    rec = json.loads(out.strip())
    assert list(rec) == REPORT_KEYS
    assert rec["status"] == "pass" and rec["residual"] is None
    assert isinstance(rec["duration_ms"], int)


def test_unknown_check_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "check", "unknown.check")
    assert code == 2 and "unknown" in err


@pytest.mark.parametrize("argv", [
    ["check", "super.s_squared", "--ghost-cutoff", "0"],
    ["check", "super.s_squared", "-K", "4", "-N", "5"],
    ["check", "tw.faces", "--simplex-depth", "7"],
    ["check", "mc.solve_g1", "--bound", "nonsense=3"],
    ["check", "particle.master", "--jobs", "0"],
    ["frobnicate"],
])
def test_invalid_config_exit_2(capsys, argv):
    assert run_cli(capsys, *argv)[0] == 2


def test_failing_check_exit_1_with_witness(capsys):
    code, out, _ = run_cli(capsys, "check", "super.sQ_literal", "-K", "3", "-N", "5", "--report", "json")
    assert code == 1
    rec = json.loads(out)
    assert rec["status"] == "fail" and rec["residual"]


def test_config_file_overrides(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\nghost_cutoff = 3\ntower=5\nseed = 7\nsamples = 5\nbounds.rounds = 1\n")
    assert read_config(str(cfg)) == {"K": 3, "N": 5, "seed": 7, "samples": 5, "bounds": {"rounds": 1}}
    code, out, _ = run_cli(capsys, "check", "bracket.axioms", "--seed", "1", "--config", str(cfg), "--report", "json")
    rec = json.loads(out)
    assert code == 0 and rec["seed"] == 7 and rec["params"]["K"] == 3 and rec["params"]["samples"] == 5


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run_cli(capsys, "check", "particle.master", "--config", str(cfg))[0] == 2


def test_determinism_and_jobs(capsys):
    argv = ["check", "clifford", "particle", "bracket.axioms", "io.roundtrip", "--samples", "20",
            "--report", "json", "--no-timing"]
    _, a, _ = run_cli(capsys, *argv)
    _, b, _ = run_cli(capsys, *argv, "--jobs", "3")
    assert a == b
    assert all(json.loads(l)["duration_ms"] == 0 for l in a.splitlines())


def test_plot(tmp_path, capsys):
    png = tmp_path / "run.png"
    code, _, _ = run_cli(capsys, "check", "clifford", "--plot", str(png))
    assert code == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_report_invariants():
    with pytest.raises(C.ConfigError):
        C.CheckConfig(charts=11)
    r = C.run_check("clifford.pairing", C.CheckConfig())
    assert r.status == "pass" and r.residual is None and r.seed is None
    assert r.params["det_T"] == 1


def test_expand_ids():
    assert C.expand_ids(["ce"]) == [k for k in C.REGISTRY if k.startswith("ce.")]
    assert C.expand_ids(["tw.*", "tw.faces"]) == [k for k in C.REGISTRY if k.startswith("tw.")]
    assert C.expand_ids(["all"]) == list(C.REGISTRY)
