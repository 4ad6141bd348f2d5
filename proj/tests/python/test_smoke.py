import json
import math
import os
import subprocess
from pathlib import Path

import pytest

import ebb

CONFIGS = Path(os.environ.get("EBB_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))


def base_config(**overrides):
    cfg = {
        "sample": {"length": 10, "potential": {"type": "zero"}},
        "lead_l": {"type": "laplacian"},
        "lead_r": {"type": "laplacian"},
        "thermo": {"beta_l": 1.0, "beta_r": 1.0, "mu_l": 0.5, "mu_r": -0.5},
    }
    cfg.update(overrides)
    return cfg


def test_resolve_config_applies_defaults():
    resolved = ebb.resolve_config(base_config())
    assert resolved["quadrature"]["tolerance"] == 1e-8
    assert resolved["sweep"]["energy_grid"]["points"] == 100
    assert ebb.resolve_config(resolved) == resolved


def test_config_errors_name_the_key():
    cfg = base_config()
    cfg["thermo"]["beta_l"] = -1
    with pytest.raises(ValueError, match="thermo.beta_l"):
        ebb.resolve_config(cfg)
    with pytest.raises(ValueError, match="bogus"):
        ebb.resolve_config(base_config(bogus=1))


def test_two_site_example():
    p = ebb.evaluate(base_config(sample={"length": 1, "potential": {"type": "zero"}}), 0.0)
    (gll, glr), (grl, grr) = p["green"]
    assert gll == pytest.approx([0.0, 0.5], abs=1e-12)
    assert glr == pytest.approx([-0.5, 0.0], abs=1e-12)
    assert p["transmission"] == pytest.approx(1.0, abs=1e-12)
    assert p["unitarity_residual"] < 1e-14


def test_weiss_and_fermi():
    assert ebb.weiss(1.0, 1.0, 0.0) == pytest.approx(1j)
    assert ebb.weiss(1.0, 2.0, 0.0) == pytest.approx(4j)
    assert ebb.weiss(1.0, 1.0, 2.0) == pytest.approx(-1.0)
    assert ebb.fermi_density(0.0, 1.0, 1.0) == pytest.approx(1.0 / (1.0 + math.exp(-1.0)), rel=1e-15)


def test_transfer_product_is_unimodular():
    cfg = base_config(sample={"length": 5000, "potential": {"type": "anderson", "amplitude": 2.0, "seed": 7}})
    v = ebb.generate_potential(cfg)
    assert len(v) == 5001
    assert all(-2.0 <= x <= 2.0 for x in v)
    assert v[:101] == ebb.generate_potential(dict(cfg, sample={**cfg["sample"], "length": 100}))
    t = ebb.transfer_product(v, 0.5, 5000)
    assert t["log_norm"] > 100
    assert abs(t["determinant"] - 1.0) < 1e-10


def test_fluxes():
    eq = ebb.fluxes(base_config(thermo={"beta_l": 2.0, "beta_r": 2.0, "mu_l": 0.0, "mu_r": 0.0}))
    assert abs(eq["entropy_flux"]) < 1e-12
    assert abs(eq["energy_flux_l"]) < 1e-12
    r = ebb.fluxes(base_config(), threads=2)
    assert r["entropy_flux"] > 0
    assert r["energy_flux_l"] == -r["energy_flux_r"]
    assert r["converged"]


def test_sweeps_and_classification():
    cfg = base_config(
        sample={"length": 10, "potential": {"type": "anderson", "amplitude": 2.0, "seed": 7}},
        sweep={"energy": 0.5, "energy_grid": {"min": -1.9, "max": 1.9, "points": 9},
               "checkpoints": {"spacing": "geometric", "min": 10, "max": 2000, "count": 16}},
    )
    rows = ebb.sweep_e(cfg)
    assert len(rows) == 9 and all(r["ok"] and r["unitarity_residual"] < 1e-10 for r in rows)
    sl = ebb.sweep_l(cfg)
    assert sl["classification"]["label"] == "vanishing"
    rep = ebb.equivalence(cfg, threads=2)
    assert rep["contradictions"] == 0
    with pytest.raises(ValueError):
        ebb.sweep_l(dict(cfg, sweep={"energy": 3.0}))


def test_validate_suite_passes():
    checks = ebb.validate()
    assert checks and all(c["passed"] for c in checks), [c for c in checks if not c["passed"]]


def test_run_writes_outputs(tmp_path):
    rc, log = ebb.run("sweep-e", str(CONFIGS / "table_lead.json"), str(tmp_path))
    assert rc == 0, log
    header = (tmp_path / "sweep_e.csv").read_text().splitlines()[0]
    assert header == "E,transmission,phi_l,j_l,sigma,unitarity_residual"
    manifest = json.loads((tmp_path / "sweep_e.json").read_text())["manifest"]
    assert manifest["config"]["lead_l"]["type"] == "table"


@pytest.mark.skipif(not os.environ.get("EBB_CLI"), reason="command-line tool not built")
def test_cli_fluxes_and_sweep_l(tmp_path):
    cli = os.environ["EBB_CLI"]
    eq = subprocess.run([cli, "fluxes", "--config", str(CONFIGS / "equilibrium.json"), "--out", str(tmp_path / "f")])
    assert eq.returncode == 0
    out = json.loads((tmp_path / "f" / "fluxes.json").read_text())
    assert all(
        k in out for k in ["energy_flux_l", "charge_flux_l", "entropy_flux", "quadrature_error_estimate",
                           "evaluations", "no_open_channel"])
    assert abs(out["entropy_flux"]) < 1e-12

    runs = []
    for name in ("a", "b"):
        r = subprocess.run([cli, "sweep-l", "--config", str(CONFIGS / "anderson.json"), "--out", str(tmp_path / name),
                            "--threads", "2"])
        assert r.returncode == 0
        runs.append((tmp_path / name / "sweep_l.csv").read_bytes())
    assert runs[0] == runs[1]
    assert runs[0].startswith(b"L,sigma_density,transmission,log_transfer_norm,resonance_flag\n")
    assert json.loads((tmp_path / "a" / "sweep_l.json").read_text())["classification"]["label"] == "vanishing"

    other = subprocess.run([cli, "sweep-l", "--config", str(CONFIGS / "anderson.json"), "--out", str(tmp_path / "c"),
                            "--seed-override", "8"])
    assert other.returncode == 0
    assert (tmp_path / "c" / "sweep_l.csv").read_bytes() != runs[0]
    assert json.loads((tmp_path / "c" / "sweep_l.json").read_text())["manifest"]["seeds"] == [8]

    bad = subprocess.run([cli, "sweep-l", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path / "d")])
    assert bad.returncode == 2
