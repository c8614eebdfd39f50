import json

import numpy as np
import pytest

from main import main
from utils import fixtures, reports


def _write(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture(autouse=True)
def clean_env(settings):
    """Every CLI run starts from the default configuration."""


def test_fixtures_lists_the_catalog(capsys):
    assert main(["fixtures"]) == 0
    out = capsys.readouterr().out
    assert "zygmund-series" in out
    assert "radial-stretch" in out


def test_explain(capsys):
    assert main(["explain", "welding-log-identity"]) == 0
    assert "§3" in capsys.readouterr().out
    assert main(["explain", "nope"]) == 2


def test_unknown_suite_is_a_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["verify-all", "--suite", "nope"])
    assert err.value.code == 2


def test_bad_thread_count_exits_with_config_code(monkeypatch):
    monkeypatch.setenv("ZQ_THREADS", "0")
    assert main(["fixtures"]) == 2


def test_verify_all_writes_identical_reports(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["verify-all", "--suite", "spectral-identities", "--out", str(first)]) == 0
    assert main(["verify-all", "--suite", "spectral-identities", "--out", str(second)]) == 0
    a = (first / "spectral-identities.json").read_bytes()
    assert a == (second / "spectral-identities.json").read_bytes()
    payload = json.loads(a)
    assert payload["passed"] is True
    assert len(payload["reports"]) == 4


def test_verify_all_to_a_json_file(tmp_path):
    target = tmp_path / "recurrence-report.json"
    assert main(["verify-all", "--suite", "recurrence", "--out", str(target)]) == 0
    assert json.loads(target.read_text())["suite"] == "recurrence"


def test_norms(tmp_path):
    src = _write(tmp_path / "f.json", {"kind": "cosine", "n": 4096})
    out = tmp_path / "norm.json"
    assert main(["norms", "--kind", "zygmund", "--in", src, "--out", str(out)]) == 0
    value = json.loads(out.read_text())
    assert value["kind"] == "zygmund"
    assert value["value"] == pytest.approx(0.7246, rel=2e-2)


def test_norms_missing_input(tmp_path):
    assert main(["norms", "--kind", "zygmund", "--in", str(tmp_path / "missing.json")]) == 2


def test_spectral_hilbert(tmp_path):
    src = _write(tmp_path / "f.json", {"kind": "cosine", "n": 64})
    out = tmp_path / "h.json"
    assert main(["spectral", "hilbert", "--in", src, "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["n"] == 64
    assert max(abs(v) for v in payload["values_re"]) < 1e-14
    expected = np.sin(2.0 * np.pi * np.arange(64) / 64)
    assert np.max(np.abs(np.array(payload["values_im"]) - expected)) < 1e-14


def test_diffeo_pipeline(tmp_path):
    logderiv = _write(tmp_path / "phi.json", {"kind": "cosine", "n": 256, "amp": 0.2})
    h = tmp_path / "h.json"
    assert main(["diffeo", "make", "--logderiv", logderiv, "--out", str(h)]) == 0
    inv = tmp_path / "inv.json"
    assert main(["diffeo", "invert", str(h), "--out", str(inv)]) == 0
    composed = tmp_path / "id.json"
    assert main(["diffeo", "compose", str(h), str(inv), "--out", str(composed)]) == 0
    lift = json.loads(composed.read_text())["lift"]
    assert max(abs(v) for v in lift) < 1e-8
    est = tmp_path / "est.json"
    assert main(["diffeo", "opnorm", "--space", "zygmund", str(h), "--out", str(est)]) == 0
    assert json.loads(est.read_text())["estimate"] > 0


def test_extend_and_diagnose(tmp_path):
    h = _write(tmp_path / "h.json", reports.diffeo_payload(fixtures.sine_diffeo(256)))
    field = tmp_path / "mu.json"
    assert main(["extend", "--in", h, "--depths", "3", "--out", str(field)]) == 0
    assert json.loads(field.read_text())["kind"] == "dilatation"
    profile = tmp_path / "profile.csv"
    assert main(["extend", "diagnose", str(field), "--order", "1", "--out", str(profile)]) == 0
    lines = profile.read_text().splitlines()
    assert lines[0] == "depth,max"
    assert len(lines) == 4


def test_solve_summary(tmp_path):
    mu = _write(tmp_path / "mu.json", {"kind": "annulus-indicator"})
    out = tmp_path / "solution.json"
    assert main(["solve", "--mu", mu, "--spacing", "0.0625", "--out", str(out)]) == 0
    summary = json.loads(out.read_text())
    assert summary["normalization"] == "disk_conformal"
    assert summary["steps"] > 0
    assert summary["min_jacobian"] > 0


def test_bounds_recurrence_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["bounds", "recurrence", "--alpha", "1", "--lambda", "0.9", "--n", "5", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,s_n"
    assert len(lines) == 7
    assert lines[2].startswith("1,3.6")


def test_bounds_verify_needs_mu():
    assert main(["bounds", "verify"]) == 2
