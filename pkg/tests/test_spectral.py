import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from errors import DomainError, SizeError
from models import FourierCoefficients, PeriodicFunction
from services import spectral_service
from utils.fixtures import random_band


def _complex_samples(seed, n=64):
    rng = np.random.default_rng(seed)
    return PeriodicFunction(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def test_dft_of_constant_is_mode_zero():
    c = spectral_service.dft(PeriodicFunction.constant(1.0, 64))
    assert c.mode(0) == pytest.approx(1.0)
    assert np.max(np.abs(np.delete(c.coeffs, 32))) < 1e-15


def test_dft_of_cosine(cosine):
    c = spectral_service.dft(cosine)
    assert abs(c.mode(1) - 0.5) < 1e-14
    assert abs(c.mode(-1) - 0.5) < 1e-14
    assert c.mode(100) == 0.0


def test_idft_inverts_dft(cosine):
    back = spectral_service.idft(spectral_service.dft(cosine))
    assert back.is_real
    np.testing.assert_allclose(back.values, cosine.values, atol=1e-14)


def test_hilbert_of_cosine_is_i_sine(cosine):
    out = spectral_service.hilbert_transform(cosine)
    np.testing.assert_allclose(out.values, 1j * np.sin(cosine.nodes), atol=1e-14)


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
@hsettings(max_examples=25, deadline=None)
def test_hilbert_is_an_involution(seed):
    f = _complex_samples(seed)
    twice = spectral_service.hilbert_transform(spectral_service.hilbert_transform(f))
    np.testing.assert_allclose(twice.values, f.values, atol=1e-12)


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
@hsettings(max_examples=25, deadline=None)
def test_szego_projections_split_the_function(seed):
    f = _complex_samples(seed)
    inner = spectral_service.szego_interior(f)
    outer = spectral_service.szego_exterior(f)
    np.testing.assert_allclose(inner.coeffs + outer.coeffs, spectral_service.dft(f).coeffs, atol=1e-15)
    assert np.all(inner.coeffs[inner.modes < 0] == 0)
    assert np.all(outer.coeffs[outer.modes >= 0] == 0)


def test_szego_trace_is_half_of_f_plus_hf():
    f = _complex_samples(7)
    trace = spectral_service.idft(spectral_service.szego_interior(f), real=False)
    half = 0.5 * (f.values + spectral_service.hilbert_transform(f).values)
    np.testing.assert_allclose(trace.values, half, atol=1e-12)


def test_principal_value_quadrature_matches_multiplier():
    rng = np.random.default_rng(3)
    f = PeriodicFunction(random_band(128, 16, rng), is_real=True)
    pv = spectral_service.pv_hilbert_quadrature(f)
    multiplier = spectral_service.hilbert_transform(f)
    scale = np.max(np.abs(f.values))
    assert np.max(np.abs(pv.values - multiplier.values)) <= 1e-10 * scale


@pytest.mark.parametrize("n", [100, 8, 48])
def test_grid_length_must_be_power_of_two(n):
    with pytest.raises(SizeError):
        PeriodicFunction(np.ones(n))


def test_real_flag_rejects_imaginary_parts():
    with pytest.raises(DomainError):
        PeriodicFunction(np.ones(16) + 1j, is_real=True)


def test_interior_extension_scales_modes():
    z = PeriodicFunction.from_callable(lambda t: np.exp(1j * t), 64, real=False)
    out = spectral_service.extend_holomorphic(spectral_service.szego_interior(z), "interior", 0.5)
    np.testing.assert_allclose(out.values, 0.5 * z.values, atol=1e-14)


def test_exterior_extension_scales_modes():
    z = PeriodicFunction.from_callable(lambda t: np.exp(-2j * t), 64, real=False)
    out = spectral_service.extend_holomorphic(spectral_service.szego_exterior(z), "exterior", 2.0)
    np.testing.assert_allclose(out.values, 0.25 * z.values, atol=1e-14)


def test_extension_rejects_wrong_side(cosine):
    with pytest.raises(DomainError):
        spectral_service.extend_holomorphic(spectral_service.dft(cosine), "interior", 0.5)
    with pytest.raises(DomainError):
        spectral_service.extend_holomorphic(spectral_service.szego_interior(cosine), "interior", 1.5)
    with pytest.raises(DomainError):
        spectral_service.extend_holomorphic(spectral_service.szego_interior(cosine), "sideways", 0.5)


def test_evaluate_at_off_grid(cosine):
    x = np.array([0.3, 1.7, -4.0, 12.5])
    out = spectral_service.evaluate_at(cosine, x)
    assert np.isrealobj(out)
    np.testing.assert_allclose(out, np.cos(x), atol=1e-13)


def test_spectral_derivative_and_antiderivative(sine, cosine):
    np.testing.assert_allclose(spectral_service.spectral_derivative(sine).values, cosine.values, atol=1e-13)
    np.testing.assert_allclose(spectral_service.antiderivative(cosine).values, sine.values, atol=1e-13)


def test_shift_translates(cosine):
    out = spectral_service.shift(cosine, 0.4)
    np.testing.assert_allclose(out.values, np.cos(cosine.nodes + 0.4), atol=1e-13)


def test_fourier_coefficients_require_power_of_two():
    with pytest.raises(SizeError):
        FourierCoefficients(np.zeros(12))
