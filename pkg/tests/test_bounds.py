import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from errors import DomainError
from services import bounds_service
from utils import fixtures

ALPHAS = [0.25, 0.5, 1.0, 1.5]


def _lam(alpha):
    return min(bounds_service.certified_threshold(alpha) + 0.05, 0.99)


def test_thresholds_at_alpha_one():
    assert bounds_service.lambda_threshold(1.0) == pytest.approx(0.25 ** (1.0 / 3.0))
    assert bounds_service.certified_threshold(1.0) == pytest.approx(0.25 ** 0.25)


@given(st.floats(min_value=0.01, max_value=1.99))
def test_certified_threshold_dominates(alpha):
    assert bounds_service.certified_threshold(alpha) >= bounds_service.lambda_threshold(alpha)


@pytest.mark.parametrize("alpha", [0.0, 2.0, -1.0])
def test_alpha_range(alpha):
    with pytest.raises(DomainError):
        bounds_service.lambda_threshold(alpha)


def test_lambda_range():
    with pytest.raises(DomainError):
        bounds_service.recurrence(1.0, 1.0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_first_term(alpha):
    lam = _lam(alpha)
    s = bounds_service.recurrence(alpha, lam, 5).s
    assert s[0] == 1.0
    assert s[1] == pytest.approx((4.0 * lam) ** (1.0 / alpha), rel=1e-12)


@given(st.floats(min_value=0.25, max_value=1.5), st.floats(min_value=0.01, max_value=0.95))
@hsettings(max_examples=50, deadline=None)
def test_recurrence_identity_holds(alpha, fraction):
    certified = bounds_service.certified_threshold(alpha)
    lam = certified + fraction * (1.0 - certified)
    trace = bounds_service.recurrence(alpha, lam, 200)
    assert np.max(bounds_service.recurrence_residuals(trace), initial=0.0) <= 1e-12


@pytest.mark.parametrize("alpha", ALPHAS)
def test_divergence_above_certified_threshold(alpha):
    trace = bounds_service.recurrence(alpha, _lam(alpha), 200)
    assert trace.diverged
    assert trace.s[-1] > bounds_service.DIVERGED
    assert trace.increasing


@pytest.mark.parametrize("alpha", ALPHAS)
def test_dominating_sequence_is_a_lower_bound(alpha):
    lam = _lam(alpha)
    trace = bounds_service.recurrence(alpha, lam, 200)
    lower = bounds_service.dominating_sequence(alpha, lam, 200)
    m = min(trace.uncapped.size, lower.uncapped.size)
    assert np.all(trace.s[:m] >= lower.s[:m] * (1.0 - 1e-12))


def test_cap_is_recorded():
    trace = bounds_service.recurrence(1.0, 0.9, 200)
    assert trace.capped_from is not None
    assert trace.uncapped.size == trace.capped_from
    assert trace.s[-1] == pytest.approx(bounds_service.CAP)


def test_rows_for_export():
    rows = bounds_service.recurrence(1.0, 0.9, 3).rows()
    assert [n for n, _ in rows] == [0, 1, 2, 3]
    assert rows[1][1] == pytest.approx(3.6)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_telescoping_terms(alpha):
    terms, expected = bounds_service.telescoping_terms(alpha, _lam(alpha), 0.5, 0.3)
    assert terms.size == expected.size > 0
    np.testing.assert_allclose(terms, expected, rtol=1e-12)


def test_default_lambda_is_above_threshold():
    for alpha in ALPHAS:
        lam = bounds_service.default_lambda(alpha)
        assert bounds_service.certified_threshold(alpha) < lam < 1.0


def test_zeta_grid():
    zetas = bounds_service.zeta_grid([0.0, 0.5], 4)
    assert zetas.size == 5
    assert zetas[0] == 0
    np.testing.assert_allclose(np.abs(zetas[1:]), 0.5)


def _field():
    return fixtures.build_beltrami(fixtures.fixture_spec("angular-bump")).to_beltrami_field()


@pytest.mark.parametrize("zeta", [0.0, 0.3, 0.6j, -0.9])
def test_decomposition_matches_the_telescoped_bound(zeta):
    alpha, lam = 1.0, 0.9
    d = bounds_service.decompose_for_point(_field(), alpha, lam, zeta)
    assert d.radii[0] == 1.0
    assert np.all(np.diff(d.radii) > 0)
    assert np.all(d.k >= 0)
    t = bounds_service.t_sequence(alpha, lam, d.tau)
    n = d.last_index
    assert d.ell * t[n + 1] ** alpha >= 1.0
    assert n == 0 or d.ell * t[n] ** alpha < 1.0
    assert bounds_service.schwarzian_sum_bound(d) <= bounds_service.geometric_bound(d) * (1.0 + 1e-9)


def test_decomposition_needs_a_point_in_the_disk():
    with pytest.raises(DomainError):
        bounds_service.decompose_for_point(_field(), 1.0, 0.9, 1.0)


def test_zero_coefficient_meets_the_bound_trivially():
    mu = fixtures.zero_coefficient().to_planar_grid(1.0 / 16.0)
    reports = bounds_service.verify_alpha_bound(mu, 1.0, 0.9)
    assert [r.check for r in reports] == ["alpha-bound", "schwarzian-sum-bound"]
    assert all(r.passed for r in reports)


def test_bound_needs_lambda_above_threshold():
    mu = fixtures.zero_coefficient().to_planar_grid(1.0 / 16.0)
    with pytest.raises(DomainError):
        bounds_service.verify_alpha_bound(mu, 1.0, 0.5)


@pytest.mark.slow
def test_alpha_bound_on_angular_bump():
    fx = fixtures.build_beltrami(fixtures.fixture_spec("angular-bump"))
    reports = bounds_service.verify_alpha_bound(fx.to_planar_grid(1.0 / 32.0), 1.0, None, envelope=fx.envelope,
                                                field=fx.to_beltrami_field(), threads=2)
    assert all(r.passed for r in reports), [r.detail for r in reports]
