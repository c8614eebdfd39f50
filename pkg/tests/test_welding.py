import numpy as np
import pytest

from errors import DomainError
from models import ConformalJet
from services import beltrami_service, welding_service
from utils import fixtures

SPACING = 1.0 / 32.0


def _bump(spacing=SPACING, **overrides):
    spec = fixtures.fixture_spec("angular-bump", spacing=spacing, **overrides)
    return fixtures.build_beltrami(spec).to_planar_grid(spacing)


def _interior_zero(mu):
    return fixtures.zero_coefficient(((0.45, 0.7),)).to_planar_grid(mu.spacing, mu.outer_radius)


def test_zero_coefficient_welds_trivially():
    mu = fixtures.zero_coefficient().to_planar_grid(1.0 / 16.0)
    triple = welding_service.welding_check(mu, 64)
    assert triple.residual == 0.0
    assert triple.passed
    assert triple.h.is_identity


def test_lambda_checks_supports():
    mu = _bump()
    with pytest.raises(DomainError):
        welding_service.lambda_map(mu, mu, 64)


def test_log_derivative_of_identity_jet_vanishes():
    jet = ConformalJet(np.array([0.0, 1.0, 0.0, 0.0]), 1.0)
    out = welding_service.lifted_log_derivative(jet, 64)
    assert np.max(np.abs(out.values)) < 1e-15


def test_log_derivative_of_a_dilation():
    jet = ConformalJet(np.array([0.0, 2.0, 0.0, 0.0]), 1.0)
    out = welding_service.lifted_log_derivative(jet, 64)
    # z·F'/F = 1 for any dilation
    assert np.max(np.abs(out.values)) < 1e-15


@pytest.mark.slow
def test_welding_identity_on_angular_bump():
    triple = welding_service.welding_check(_bump(), 1024)
    assert triple.residual < 1e-3
    assert triple.passed
    assert set(triple.seminorms) == {"log_h", "log_f", "log_g"}
    assert all(np.isfinite(v) for v in triple.seminorms.values())


@pytest.mark.slow
def test_lambda_agrees_with_jet():
    mu = _bump()
    lam = welding_service.lambda_map(_interior_zero(mu), mu, 1024)
    F = beltrami_service.solve(mu, "disk_conformal")
    jet = beltrami_service.conformal_jet(F, 1.0, 256)
    side = welding_service.lifted_log_derivative(jet, 1024)
    assert np.max(np.abs(lam.values - side.values)) <= 1e-3


@pytest.mark.slow
def test_translation_by_zero_is_exact():
    mu = _bump()
    inner = _interior_zero(mu)
    report = welding_service.translation_relation_check(inner, mu, inner, 256, tolerance=0.0)
    assert report.residual == 0.0
    assert report.passed


@pytest.mark.slow
def test_equivalence_quantities_are_finite():
    values = welding_service.equivalence_diagnostics(_bump())
    assert set(values) == {"mu_z", "bz_log_derivative", "az_schwarzian", "az_third_derivative",
                           "zygmund_derivative_trace"}
    assert all(np.isfinite(v) for v in values.values())


@pytest.mark.slow
def test_welding_residual_halves_under_refinement():
    coarse = welding_service.welding_check(_bump(1.0 / 32.0), 1024).residual
    fine = welding_service.welding_check(_bump(1.0 / 64.0), 1024).residual
    assert coarse / fine >= 2.0


def test_zero_coefficient_welding_homeo_is_identity():
    mu = fixtures.zero_coefficient().to_planar_grid(1.0 / 16.0)
    h = welding_service.welding_homeo(mu, 64)
    assert h.is_identity
    assert welding_service.boundary_cross_check(mu, 64) == 0.0


@pytest.mark.slow
def test_welding_factorization_reproduces_boundary_homeo():
    mu = _bump()
    assert welding_service.boundary_cross_check(mu, 1024) <= 1e-4
    welded = welding_service.welding_homeo(mu, 1024)
    assert welded.normalized
    # a mode-4 bump moves 𝕊 by more than a Möbius map, so the routes no longer agree
    other = beltrami_service.boundary_homeo(_bump(mode=4), 1024)
    assert np.max(np.abs(welded.lift - other.lift)) > 1e-3


@pytest.mark.slow
def test_translation_defect_halves_under_refinement():
    defects = []
    for spacing in (1.0 / 32.0, 1.0 / 64.0):
        mu = _bump(spacing)
        inner = _interior_zero(mu)
        nu = fixtures.build_beltrami(fixtures.fixture_spec("angular-bump-interior", spacing=spacing))
        nu_grid = nu.to_planar_grid(spacing, mu.outer_radius)
        defects.append(welding_service.translation_relation_check(inner, mu, nu_grid, 1024).residual)
    assert defects[1] < 5e-3
    assert defects[0] / defects[1] >= 2.0


@pytest.mark.slow
def test_lambda_is_real_on_the_antidiagonal():
    mu = _bump()
    lam = welding_service.lambda_map(beltrami_service.reflect(mu), mu, 1024)
    assert np.max(np.abs(np.imag(lam.values))) <= 5e-6
