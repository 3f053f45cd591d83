from __future__ import annotations

import json
import math

import pytest

from jcryd.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_VERIFY, main

MODEL = """
seed = 5
[model]
n_atoms = 2
omega_r_mhz = 1.0
delta_r_mhz = 0.5
"""

SECTIONS = {
    "ladder": "",
    "peaks": "[sweep]\nstart = -3.0\nstop = 3.0\nnum = 7\n[drift]\nsamples = 40\n",
    "scan": (
        "[scan]\ndelta_uw_start_mhz = -1.0\ndelta_uw_stop_mhz = 1.0\nnum_points = 201\n"
        "pulse_time_us = 6.0\nomega_uw_mhz = 0.05\n"
    ),
    "ramp": (
        "[ramp]\ninitial = \"dressed\"\ninitial_n = 1\nsamples = 11\n[[ramp.segments]]\n"
        "duration_us = 2.0\ndelta_r_mhz = [0.5, 0.5]\nomega_r_mhz = [1.0, 0.0]\n"
    ),
    "fit": "[fit]\nomega_r_mhz = [0.5, 1.0, 1.5, 2.0]\nnoise_fraction = 0.05\ntrials = 50\n",
    "verify": "[verify]\ndraws = 5\n",
}


def _write(tmp_path, body, name="run.toml"):
    path = tmp_path / name
    path.write_text(MODEL + body)
    return path


@pytest.mark.parametrize("command", sorted(SECTIONS))
def test_commands_succeed_and_are_deterministic(tmp_path, command):
    cfg = _write(tmp_path, SECTIONS[command])
    outs = []
    for i in range(2):
        out = tmp_path / f"o{i}.csv"
        assert main([command, "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        outs.append(sorted(p.name.replace(f"o{i}", "o") for p in tmp_path.glob(f"o{i}*")))
        text = out.read_text()
        assert text.splitlines()[0].count(",") >= 1
    assert outs[0] == outs[1]
    for p in tmp_path.glob("o0*"):
        twin = tmp_path / p.name.replace("o0", "o1", 1)
        assert p.read_bytes() == twin.read_bytes()


@pytest.mark.parametrize("command", sorted(SECTIONS))
def test_json_round_trip(tmp_path, command):
    cfg = _write(tmp_path, SECTIONS[command])
    out = tmp_path / "o.json"
    assert main([command, "--config", str(cfg), "--out", str(out), "--format", "json"]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc and all(isinstance(v, list) for v in doc.values())
    again = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    assert json.loads(again) == doc


def test_ladder_values(tmp_path):
    cfg = _write(tmp_path, "")
    out = tmp_path / "l.json"
    main(["ladder", "--config", str(cfg), "--out", str(out), "--format", "json"])
    rows = json.loads(out.read_text())["ladder"]
    plus1 = next(r for r in rows if r["n"] == 1 and r["branch"] == "plus")
    assert plus1["epsilon"] == pytest.approx((-0.5 + math.sqrt(1.25)) / 2)


def test_misspelled_key(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text(MODEL.replace("delta_r_mhz", "delta_rr_mhz"))
    assert main(["ladder", "--config", str(cfg)]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "delta_rr_mhz" in err and "line 6" in err


def test_missing_section(tmp_path):
    cfg = _write(tmp_path, "")
    assert main(["scan", "--config", str(cfg)]) == EXIT_CONFIG


def test_bad_seed(tmp_path):
    cfg = _write(tmp_path, "")
    assert main(["ladder", "--config", str(cfg), "--seed", str(2**64)]) == EXIT_CONFIG


def test_numeric_failure_exit(tmp_path):
    # a step far above the dynamical time scale cannot converge in the allowed halvings
    cfg = _write(tmp_path, SECTIONS["ramp"].replace("samples = 11\n", "samples = 11\nstep_us = 5.0\n"))
    assert main(["ramp", "--config", str(cfg), "--out", str(tmp_path / "r.csv")]) == EXIT_NUMERIC


def test_fault_injection_fails_verification(tmp_path):
    cfg = _write(tmp_path, "[verify]\ndraws = 3\nfault = \"linear_collective\"\n")
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "v.csv")]) == EXIT_VERIFY
    assert "false" in (tmp_path / "v.csv").read_text()


def test_seed_override_changes_drift(tmp_path):
    cfg = _write(tmp_path, SECTIONS["peaks"])
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["peaks", "--config", str(cfg), "--out", str(a), "--seed", "1"])
    main(["peaks", "--config", str(cfg), "--out", str(b), "--seed", "2"])
    assert a.read_bytes() != b.read_bytes()
