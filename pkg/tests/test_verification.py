import json

import numpy as np
import pytest

from config import load_settings
from errors import ConfigError, DomainError, UsageError
from services import norms_service, spectral_service, verification_service
from utils import reports


def test_spectral_suite_passes(settings):
    out = verification_service.run_suite("spectral-identities", settings)
    assert [r.check for r in out] == sorted(r.check for r in out)
    assert len(out) == 4
    assert all(r.passed for r in out), [r.detail for r in out if not r.passed]


def test_recurrence_suite_passes(settings):
    out = verification_service.run_suite("recurrence", settings)
    assert len(out) == 7
    assert all(r.passed for r in out), [r.check for r in out if not r.passed]


def test_composition_suite_passes(settings):
    out = verification_service.run_suite("composition-endpoints", settings)
    assert all(r.passed for r in out), [r.check for r in out if not r.passed]


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["seminorm-calculus", "ba-diagnostics"])
def test_heavier_suites_pass(settings, suite):
    out = verification_service.run_suite(suite, settings)
    assert all(r.passed for r in out), [r.check for r in out if not r.passed]


@pytest.mark.parametrize("error", [DomainError("bad input"), ValueError("nan"), RuntimeError("QH6154 flat simplex")])
def test_failing_check_does_not_stop_the_suite(settings, monkeypatch, error):
    def boom(_settings):
        raise error

    monkeypatch.setitem(verification_service.CHECKS["szego-trace"], "run", boom)
    out = verification_service.run_suite("spectral-identities", settings)
    failed = [r for r in out if not r.passed]
    assert [r.check for r in failed] == ["szego-trace"]
    assert type(error).__name__ in failed[0].detail
    assert len(out) == 4


def test_reports_are_deterministic(settings):
    first = reports.dumps(reports.suite_payload("recurrence", verification_service.run_suite("recurrence", settings)))
    second = reports.dumps(reports.suite_payload("recurrence", verification_service.run_suite("recurrence", settings)))
    assert first == second
    payload = json.loads(first)
    assert payload["suite"] == "recurrence"
    assert payload["passed"] is True
    assert payload["reports"][0]["environment"]["threads"] == settings.threads


def test_unknown_suite(settings):
    with pytest.raises(UsageError):
        verification_service.run_suite("nope", settings)


def test_every_check_belongs_to_all():
    assert sorted(verification_service.SUITES["all"]) == sorted(verification_service.CHECKS)
    for entry in verification_service.CHECKS.values():
        assert entry["reference"].startswith("§")


def test_explain():
    text = verification_service.explain("welding-log-identity")
    assert "§3" in text
    assert "log" in text
    assert "suite welding" in text
    assert "§1" in verification_service.explain("ba-dbar-constant")
    assert "§1" in verification_service.explain("beltrami-radial-oracle")
    assert not any("§6" in e["reference"] for e in verification_service.CHECKS.values())
    with pytest.raises(UsageError):
        verification_service.explain("no-such-check")


def test_fixture_catalog():
    rows = verification_service.list_fixtures()
    names = [name for name, *_ in rows]
    assert names == sorted(names)
    assert "zygmund-series" in names
    domains = {name: domain for name, _, domain, _ in rows}
    assert domains["sine-diffeo"] == "diffeo"
    assert domains["angular-bump"] == "beltrami"


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("ZQ_THREADS", "2")
    monkeypatch.setenv("ZQ_SEED", "9")
    monkeypatch.delenv("ZQ_CONFIG", raising=False)
    path = tmp_path / "zq.json"
    path.write_text(json.dumps({"solver": {"tol": 1e-6}}))
    s = load_settings(str(path), seed=3)
    assert s.threads == 2
    assert s.seed == 3
    assert s.get("solver", "tol") == 1e-6
    assert s.get("solver", "max_iter") == 200
    env = s.environment()
    assert env["solver.tol"] == 1e-6
    assert env["seed"] == 3


@pytest.mark.parametrize("content", ['{"solver": {"nope": 1}}', '{"diffeo": {"degree_tol": 1e-6}}',
                                     '{"extension": {"gauss_nodes": 64}}', '{"nope": {}}', "[1, 2]", "{not json"])
def test_bad_config_files(monkeypatch, tmp_path, content):
    monkeypatch.delenv("ZQ_THREADS", raising=False)
    path = tmp_path / "zq.json"
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_settings(str(path))


def test_norms_section_reaches_the_radii_ladder(monkeypatch, tmp_path, cosine):
    monkeypatch.delenv("ZQ_CONFIG", raising=False)
    path = tmp_path / "zq.json"
    path.write_text(json.dumps({"norms": {"radii_per_level": 8, "max_levels": 40}}))
    s = load_settings(str(path))
    assert s.ladder() == {"per_level": 8, "max_levels": 40, "tail_tol": 1e-8}
    value = norms_service.bz_norm(spectral_service.szego_interior(cosine), **s.ladder())
    assert value.details["radii_per_level"] == 8


@pytest.mark.parametrize("value", ["0", "many"])
def test_bad_thread_counts(monkeypatch, value):
    monkeypatch.delenv("ZQ_CONFIG", raising=False)
    monkeypatch.setenv("ZQ_THREADS", value)
    with pytest.raises(ConfigError) as err:
        load_settings()
    assert err.value.exit_code == 2


def test_report_helpers(tmp_path, capsys):
    reports.write_csv(None, ("n", "s_n"), [(0, 1.0), (1, 3.6)])
    assert capsys.readouterr().out.splitlines() == ["n,s_n", "0,1.0", "1,3.6"]
    target = tmp_path / "nested" / "out.json"
    reports.write_json(str(target), {"b": np.float64(1.5), "a": np.arange(2)})
    assert target.read_text() == '{\n  "a": [\n    0,\n    1\n  ],\n  "b": 1.5\n}\n'
    with pytest.raises(UsageError):
        reports.load_json(str(tmp_path / "missing.json"))
    with pytest.raises(UsageError):
        reports.diffeo_from_payload({"lift": [0.0] * 16})


def test_growth_scans_gate_every_level(settings, monkeypatch):
    # total growth of 2 hides one flat level
    profile = [(-0.125, 1.0), (-0.0625, 1.6), (-0.03125, 1.6), (-0.015625, 1.8), (-0.0078125, 2.0)]
    monkeypatch.setattr(verification_service.extension_service, "decay_profile", lambda field, order: profile)
    for check in (verification_service.check_ba_zygmund_growth, verification_service.check_ba_holder_growth):
        report = check(settings)[0]
        assert report.rhs == 1.0
        assert not report.passed
        assert report.detail.endswith("1.600, 1.000, 1.125, 1.111")


@pytest.mark.slow
def test_lacunary_series_lipschitz_gate(settings):
    zyg, lip = verification_service.check_zygmund_not_lipschitz(settings)
    assert lip.lhs == verification_service.LIPSCHITZ_GROWTH == 1.35
    assert lip.passed
    assert zyg.passed
