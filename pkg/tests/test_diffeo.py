import numpy as np
import pytest

from errors import DomainError, NumericalDegeneracyError, SizeError
from models import CircleDiffeo, PeriodicFunction
from services import diffeo_service
from utils.fixtures import sine_diffeo


def _phi(x):
    return np.cos(x) + 0.3 * np.sin(3.0 * x)


def _dphi(x):
    return -np.sin(x) + 0.9 * np.cos(3.0 * x)


def test_zero_log_derivative_gives_identity():
    h = diffeo_service.from_log_derivative(PeriodicFunction(np.zeros(64), is_real=True))
    assert h.is_identity


def test_log_derivative_round_trip():
    phi = PeriodicFunction.from_callable(lambda t: 0.3 * np.cos(2 * t), 256)
    h = diffeo_service.from_log_derivative(phi)
    assert h.lift[0] == 0.0
    assert np.mean(h.deriv) == pytest.approx(1.0, abs=1e-12)
    # log h' differs from φ by a constant
    shift = h.log_deriv - phi.values
    assert np.ptp(shift) < 1e-12


def test_complex_log_derivative_is_rejected():
    with pytest.raises(DomainError):
        diffeo_service.from_log_derivative(PeriodicFunction(np.ones(16) * 1j))


def test_compose_with_inverse_is_identity():
    h = sine_diffeo(1024, 0.5, 1)
    out = diffeo_service.compose(h, diffeo_service.invert(h))
    assert np.max(np.abs(out.lift)) < 1e-10
    np.testing.assert_allclose(out.deriv, 1.0, atol=1e-10)


def test_inverse_matches_closed_form_derivative():
    h = sine_diffeo(1024, 0.3, 1)
    inv = diffeo_service.invert(h)
    y = inv.values
    np.testing.assert_allclose(inv.deriv, 1.0 / (1.0 + 0.3 * np.cos(y)), atol=1e-10)


def test_identity_composition_returns_argument():
    h = sine_diffeo(64)
    assert diffeo_service.compose(diffeo_service.identity_diffeo(64), h) is h


def test_compose_needs_shared_grid():
    with pytest.raises(SizeError):
        diffeo_service.compose(sine_diffeo(64), sine_diffeo(128))


def test_normalize_is_idempotent():
    once = diffeo_service.normalize(sine_diffeo(256))
    assert once.normalized
    for j in (0, 64, 192):
        assert once.lift[j] == 0.0
    assert diffeo_service.normalize(once) is once


def test_normalize_undoes_rotation():
    out = diffeo_service.normalize(diffeo_service.rotation(64, 0.3))
    assert np.max(np.abs(out.lift)) < 1e-12
    np.testing.assert_allclose(out.deriv, 1.0, atol=1e-12)


def test_whole_step_rotation_rolls_samples(cosine):
    h = diffeo_service.rotation(64, 3 * 2.0 * np.pi / 64)
    out = diffeo_service.composition_operator(h, cosine)
    np.testing.assert_allclose(out.values, np.roll(cosine.values, -3), atol=1e-12)


def test_composition_operator_samples_f_of_h():
    h = sine_diffeo(256)
    f = PeriodicFunction.from_callable(np.cos, 256)
    out = diffeo_service.composition_operator(h, f)
    np.testing.assert_allclose(out.values, np.cos(h.values), atol=1e-12)
    q = diffeo_service.affine_translation(h, f)
    np.testing.assert_allclose(q.values, np.cos(h.values) + np.log(h.deriv), atol=1e-12)


def test_operator_norm_of_identity():
    est = diffeo_service.estimate_operator_norm(diffeo_service.identity_diffeo(256), trials=8, threads=2)
    assert est.estimate == pytest.approx(1.0)
    assert est.bound == pytest.approx(1.0)
    assert est.k_disc == pytest.approx(1.0)
    assert est.used == 8


def test_operator_norm_is_bounded_and_deterministic():
    h = sine_diffeo(256)
    serial = diffeo_service.estimate_operator_norm(h, trials=16, band=16, seed=4, threads=1)
    pooled = diffeo_service.estimate_operator_norm(h, trials=16, band=16, seed=4, threads=4)
    assert serial.estimate == pooled.estimate
    assert serial.estimate <= 4.0 * serial.bound


def test_operator_norm_rejects_unknown_space():
    with pytest.raises(DomainError):
        diffeo_service.estimate_operator_norm(sine_diffeo(64), space="besov", trials=1)


@pytest.mark.parametrize("alpha", [0.3, 0.5])
def test_endpoint_inequalities_hold(alpha):
    h = sine_diffeo(256)
    first, _ = diffeo_service.endpoint_inequality_1(h, _phi, alpha)
    second, _ = diffeo_service.endpoint_inequality_2(h, _dphi, alpha)
    assert first <= 1.0
    assert second <= 1.0


def test_non_monotone_lift_is_rejected():
    deriv = np.ones(16)
    deriv[3] = -0.1
    with pytest.raises(NumericalDegeneracyError) as err:
        CircleDiffeo(np.zeros(16), deriv)
    assert err.value.node == 3


def test_sine_diffeo_amplitude_range():
    with pytest.raises(DomainError):
        sine_diffeo(64, 1.2)


def test_distances_report_uniform_and_zygmund_separately():
    shifted = diffeo_service.distances(diffeo_service.rotation(64, 0.3), diffeo_service.identity_diffeo(64))
    assert shifted["uniform"] == pytest.approx(0.3, abs=1e-9)
    assert shifted["zygmund"] == pytest.approx(0.0, abs=1e-9)
    h = sine_diffeo(1024)
    same = diffeo_service.distances(h, h)
    assert same["uniform"] < 1e-8


def test_operator_norm_of_off_grid_rotation():
    h = diffeo_service.rotation(256, 0.1234567)
    assert h.is_rotation
    est = diffeo_service.estimate_operator_norm(h, trials=8, threads=2)
    assert est.estimate == pytest.approx(1.0, abs=1e-9)
    assert est.used == 8
    assert not sine_diffeo(256).is_rotation
