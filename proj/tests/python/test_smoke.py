import os
import subprocess

import pytest

import d2dcov

Q_DEFAULT = 0.310939141102982847
T_DEFAULT = 120.966932163551763
CU_POWER_MW = 27.9438383804199325


def cli():
    path = os.environ.get("D2DCOV_CLI")
    if not path:
        pytest.skip("D2DCOV_CLI not set")
    return path


def test_version():
    assert d2dcov.__version__ == "1.0.0"


def test_default_geometry_matches_reference_values():
    cfg = d2dcov.NetworkConfig()
    assert d2dcov.cell_radius(cfg) == pytest.approx(T_DEFAULT, rel=1e-9)
    assert d2dcov.mode_probability(cfg)["q"] == pytest.approx(Q_DEFAULT, rel=1e-9)
    assert d2dcov.cu_mean_tx_power(cfg) == pytest.approx(CU_POWER_MW, rel=1e-6)


def test_make_config_overrides_and_rejects_bad_input():
    cfg = d2dcov.make_config(lambda_u=100.0, beta_dbm=-70)
    assert cfg.lambda_u == 100.0
    assert dict(cfg.entries())["beta_dbm"] == "-70"
    with pytest.raises(ValueError):
        d2dcov.make_config(no_such_key=1)
    with pytest.raises(ValueError):
        d2dcov.make_config(lambda_u=-1.0)


def test_analytic_coverage_is_a_decreasing_probability():
    model = d2dcov.AnalyticModel(d2dcov.NetworkConfig())
    p = model.coverage("cellular", [-10.0, 0.0, 10.0])
    assert all(0.0 <= v <= 1.0 for v in p)
    assert p[0] >= p[1] >= p[2]
    with pytest.raises(ValueError):
        model.coverage("uplink", [0.0])


def test_campaign_is_reproducible_for_a_seed():
    cfg = d2dcov.NetworkConfig()
    a = d2dcov.run_campaign(cfg, seed=7, n=3, thresholds_db=[0.0])
    b = d2dcov.run_campaign(cfg, seed=7, n=3, thresholds_db=[0.0], workers=2)
    assert a["cellular"]["probabilities"] == b["cellular"]["probabilities"]
    assert a["d2d"]["probabilities"] == b["d2d"]["probabilities"]
    assert a["realizations"] == 3


def test_cli_matches_binding_output(tmp_path):
    out = tmp_path / "mode.csv"
    r = subprocess.run([cli(), "mode-prob", "--method", "analytic", "--out", str(out)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    text = out.read_text()
    assert "beta_dbm,q_analytic,q_mc,ci,abs_diff" in text
    assert text == d2dcov.render_experiment("mode-prob", d2dcov.NetworkConfig(), method="analytic")
    assert not (tmp_path / "mode.csv.partial").exists()


def test_cli_empty_sweep_is_a_usage_error_without_output(tmp_path):
    out = tmp_path / "empty.csv"
    r = subprocess.run([cli(), "mode-prob", "--var", "beta_dbm", "--range", "-40:-50:5", "--out", str(out)],
                       capture_output=True, text=True)
    assert r.returncode == 2
    assert not out.exists()


def test_cli_unknown_criterion_is_a_usage_error(tmp_path):
    out = tmp_path / "v.csv"
    r = subprocess.run([cli(), "validate", "--criterion", "AC-42", "--out", str(out)],
                       capture_output=True, text=True)
    assert r.returncode == 2
    assert "AC-42" in r.stderr
    assert not out.exists()
