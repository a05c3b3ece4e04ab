import json
import math

import pytest

from rotgreen.cli import run_command


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def base_verify_config(trials=20, seed=42):
    return {
        "dimension": 3,
        "domain": {"kind": "ball", "radius": 1.0},
        "circles": [
            {"rho0": 0.5, "xprime0": [0.0]},
            {"rho0": 0.7, "xprime0": [0.25]},
        ],
        "m": 3,
        "charge": {"pattern": "per_circle_equal", "magnitudes": [1.0, 2.0]},
        "verify": {"trials": trials, "seed": seed},
    }


def test_energy_command(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "energy.json",
        {
            "dimension": 3,
            "domain": {"kind": "ball", "radius": 1.0},
            "circles": [{"rho0": 0.5, "xprime0": [0.0]}],
            "angles": [0.0, math.pi],
            "charge": {"pattern": "per_circle_equal", "magnitudes": [1.0]},
        },
    )
    out = tmp_path / "out"
    assert run_command(["energy", cfg, "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "energy =" in printed
    report = json.loads((out / "report.json").read_text())
    assert report["energy"] == pytest.approx(1.0 / (10.0 * math.pi), rel=1e-13)
    assert len(report["pairs"]) == 1


def test_energy_degrees_flag(tmp_path):
    payload = {
        "dimension": 3,
        "domain": {"kind": "ball", "radius": 1.0},
        "circles": [{"rho0": 0.5, "xprime0": [0.0]}],
        "angles": [0.0, 180.0],
        "degrees": True,
        "charge": {"pattern": "per_circle_equal", "magnitudes": [1.0]},
    }
    cfg = write_config(tmp_path, "deg.json", payload)
    out = tmp_path / "out"
    assert run_command(["energy", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["energy"] == pytest.approx(1.0 / (10.0 * math.pi), rel=1e-13)


def test_verify_random_trials(tmp_path, capsys):
    cfg = write_config(tmp_path, "verify.json", base_verify_config())
    out = tmp_path / "out"
    assert run_command(["verify", cfg, "--out", str(out)]) == 0
    lines = (out / "trials.csv").read_text().splitlines()
    assert lines[0] == "trial_id,e_trial,e_star,gap,holds"
    assert len(lines) == 21
    assert all(line.endswith("true") for line in lines[1:])
    report = json.loads((out / "report.json").read_text())
    assert report["violations"] == 0
    assert report["trials"] == 20


def test_verify_worker_determinism(tmp_path):
    cfg = write_config(tmp_path, "verify.json", base_verify_config())
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert run_command(["verify", cfg, "--out", str(out1)]) == 0
    assert run_command(["verify", cfg, "--out", str(out2), "--workers", "4"]) == 0
    assert (out1 / "trials.csv").read_bytes() == (out2 / "trials.csv").read_bytes()


def test_verify_seed_override(tmp_path):
    cfg = write_config(tmp_path, "verify.json", base_verify_config(seed=1))
    out1, out2, out3 = tmp_path / "o1", tmp_path / "o2", tmp_path / "o3"
    assert run_command(["verify", cfg, "--out", str(out1)]) == 0
    assert run_command(["verify", cfg, "--out", str(out2), "--seed", "1"]) == 0
    assert run_command(["verify", cfg, "--out", str(out3), "--seed", "2"]) == 0
    assert (out1 / "trials.csv").read_bytes() == (out2 / "trials.csv").read_bytes()
    assert (out1 / "trials.csv").read_bytes() != (out3 / "trials.csv").read_bytes()


def test_energy_random_angles(tmp_path):
    payload = {
        "dimension": 3,
        "domain": {"kind": "ball", "radius": 1.0},
        "circles": [{"rho0": 0.5, "xprime0": [0.0]}],
        "m": 4,
        "angles": {"random": {"seed": 9}},
        "charge": {"pattern": "per_circle_equal", "magnitudes": [1.0]},
    }
    cfg = write_config(tmp_path, "rand.json", payload)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert run_command(["energy", cfg, "--out", str(out1)]) == 0
    assert run_command(["energy", cfg, "--out", str(out2)]) == 0
    r1 = json.loads((out1 / "report.json").read_text())
    r2 = json.loads((out2 / "report.json").read_text())
    assert r1["energy"] == r2["energy"]


def test_verify_explicit_trials(tmp_path):
    payload = base_verify_config()
    payload["m"] = 2
    payload["verify"] = {"trials": [[0.0, math.pi], [0.0, math.pi / 2]]}
    cfg = write_config(tmp_path, "verify.json", payload)
    out = tmp_path / "out"
    assert run_command(["verify", cfg, "--out", str(out)]) == 0
    lines = (out / "trials.csv").read_text().splitlines()
    assert len(lines) == 3
    first_gap = float(lines[1].split(",")[3])
    assert first_gap == 0.0


def test_verify_alternating_pattern(tmp_path):
    payload = base_verify_config()
    payload["m"] = 4
    payload["charge"] = {"pattern": "alternating", "magnitudes": [1.0, 0.5]}
    cfg = write_config(tmp_path, "verify.json", payload)
    out = tmp_path / "out"
    assert run_command(["verify", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["direction"] == "maximize"
    assert report["violations"] == 0


def test_optimize_command(tmp_path):
    payload = base_verify_config()
    payload["m"] = 2
    payload["circles"] = [{"rho0": 0.5, "xprime0": [0.0]}]
    payload["charge"] = {"pattern": "per_circle_equal", "magnitudes": [1.0]}
    payload["optimize"] = {"starts": 4, "seed": 7}
    cfg = write_config(tmp_path, "opt.json", payload)
    out = tmp_path / "out"
    assert run_command(["optimize", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["converged"] is True
    assert report["gauge_fixed_angles"][0] == 0.0
    assert report["gauge_fixed_angles"][1] == pytest.approx(math.pi, abs=1e-6)


def test_capacity_command_exact_case(tmp_path):
    payload = {
        "dimension": 3,
        "domain": {"kind": "ball", "radius": 1.0},
        "capacity": {
            "points": [[0.0, 0.0, 0.0]],
            "levels": [1.0],
            "radius_factors": [1.0],
            "t": 0.1,
            "t_sweep": [0.1, 0.05, 0.01],
        },
    }
    cfg = write_config(tmp_path, "cap.json", payload)
    out = tmp_path / "out"
    assert run_command(["capacity", cfg, "--out", str(out)]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "t,asymptotic,oracle,abs_error"
    for line in lines[1:]:
        assert float(line.split(",")[3]) < 1e-12
    report = json.loads((out / "report.json").read_text())
    assert report["asymptotic"] == pytest.approx(
        (1.0 / 0.1 - 1.0) / (4.0 * math.pi), rel=1e-13
    )
    assert report["sweep_monotone"] is True


def test_riesz_command(tmp_path):
    payload = {
        "dimension": 3,
        "riesz": {"n": 3, "trials": 50, "seed": 1, "alternating": False},
    }
    cfg = write_config(tmp_path, "riesz.json", payload)
    out = tmp_path / "out"
    assert run_command(["riesz", cfg, "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["violations"] == 0
    assert report["reference_energy"] == pytest.approx(2 * math.sqrt(3), rel=1e-13)


def test_format_json_skips_csv(tmp_path):
    cfg = write_config(tmp_path, "verify.json", base_verify_config())
    out = tmp_path / "out"
    assert run_command(["verify", cfg, "--out", str(out), "--format", "json"]) == 0
    assert (out / "report.json").exists()
    assert not (out / "trials.csv").exists()


def test_missing_field_names_path(tmp_path, capsys):
    payload = base_verify_config()
    del payload["circles"]
    cfg = write_config(tmp_path, "bad.json", payload)
    assert run_command(["verify", cfg, "--out", str(tmp_path / "out")]) == 1
    assert "circles" in capsys.readouterr().err


def test_bad_json_reports_location(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"dimension": 3,,}')
    assert run_command(["verify", str(path), "--out", str(tmp_path / "out")]) == 1
    assert "line" in capsys.readouterr().err


def test_unknown_domain_kind(tmp_path, capsys):
    payload = base_verify_config()
    payload["domain"] = {"kind": "torus"}
    cfg = write_config(tmp_path, "bad.json", payload)
    assert run_command(["verify", cfg, "--out", str(tmp_path / "out")]) == 1
    assert "domain.kind" in capsys.readouterr().err


def test_missing_config_file(tmp_path, capsys):
    assert run_command(["verify", str(tmp_path / "nope.json")]) == 1
    assert "cannot read config" in capsys.readouterr().err


def test_bad_charge_pattern(tmp_path, capsys):
    payload = base_verify_config()
    payload["charge"]["pattern"] = "windmill"
    cfg = write_config(tmp_path, "bad.json", payload)
    assert run_command(["verify", cfg, "--out", str(tmp_path / "out")]) == 1
    assert "charge.pattern" in capsys.readouterr().err
