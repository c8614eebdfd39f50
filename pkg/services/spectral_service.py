import logging

import numpy as np
import scipy.fft

from errors import DomainError, SizeError
from models import FourierCoefficients, PeriodicFunction, check_power_of_two

# Configure logging
logger = logging.getLogger(__name__)

# Wrong-side mode magnitude tolerated by extend_holomorphic
SUPPORT_TOL = 1e-12

# Evaluation points per chunk in evaluate_at
EVAL_CHUNK = 512


def dft(f: PeriodicFunction) -> FourierCoefficients:
    """
    Fourier coefficients of periodic samples.

    Args:
        f (PeriodicFunction): Samples at θ_j = 2πj/n.

    Returns:
        FourierCoefficients: c_k = (1/n) Σ_j f_j e^{-ikθ_j}, modes -n/2 ... n/2-1.
    """
    check_power_of_two(f.n_samples)
    return FourierCoefficients(scipy.fft.fftshift(scipy.fft.fft(f.values)) / f.n_samples)


def idft(c: FourierCoefficients, real: bool | None = None) -> PeriodicFunction:
    """
    Samples of the trigonometric polynomial Σ c_k e^{ikθ}.

    Args:
        c (FourierCoefficients): Coefficients in ascending mode order.
        real (bool, optional): Force the real flag; by default it is inferred.

    Returns:
        PeriodicFunction: Samples at the n equispaced nodes.
    """
    check_power_of_two(c.n_samples)
    values = scipy.fft.ifft(scipy.fft.ifftshift(c.coeffs)) * c.n_samples
    if real is None:
        scale = np.max(np.abs(values))
        real = bool(np.max(np.abs(values.imag)) <= 1e-12 * max(scale, 1e-300))
    if real:
        values = values.real
    return PeriodicFunction(values, is_real=real)


def hilbert_multiplier(n):
    """+1 on the modes k >= 0, -1 on k < 0, ascending order."""
    modes = np.arange(-n // 2, n // 2)
    return np.where(modes >= 0, 1.0, -1.0)


def hilbert_transform(f: PeriodicFunction) -> PeriodicFunction:
    """Circle Hilbert transform as the sign multiplier; an involution."""
    c = dft(f)
    return idft(FourierCoefficients(c.coeffs * hilbert_multiplier(c.n_samples)))


def szego_interior(f: PeriodicFunction) -> FourierCoefficients:
    """Keep the modes k >= 0 (the constant term included)."""
    c = dft(f)
    return FourierCoefficients(np.where(c.modes >= 0, c.coeffs, 0.0))


def szego_exterior(f: PeriodicFunction) -> FourierCoefficients:
    """Keep the modes k < 0."""
    c = dft(f)
    return FourierCoefficients(np.where(c.modes < 0, c.coeffs, 0.0))


def extend_holomorphic(c, side, radius):
    """
    Evaluate the holomorphic extension of one-sided coefficients on a circle.

    Args:
        c (FourierCoefficients): Interior (k >= 0) or exterior (k < 0) modes.
        side (str): "interior" or "exterior".
        radius (float): Circle radius, <= 1 inside and >= 1 outside.

    Returns:
        PeriodicFunction: Σ c_k ρ^{|k|} e^{ikθ} for interior, Σ c_k ρ^{-|k|} e^{ikθ} for exterior.
    """
    if side not in ("interior", "exterior"):
        raise DomainError(f"unknown side {side!r}")
    if radius <= 0:
        raise DomainError("radius must be positive")
    modes = c.modes
    if side == "interior":
        if radius > 1.0:
            raise DomainError(f"interior extension needs radius <= 1, got {radius}")
        wrong = modes < 0
        decay = radius ** np.abs(modes)
    else:
        if radius < 1.0:
            raise DomainError(f"exterior extension needs radius >= 1, got {radius}")
        wrong = modes >= 0
        decay = (1.0 / radius) ** np.abs(modes)
    leak = np.max(np.abs(c.coeffs[wrong]), initial=0.0)
    if leak > SUPPORT_TOL:
        raise DomainError(f"{side} extension received wrong-side modes of size {leak:.2e}")
    scaled = np.where(wrong, 0.0, c.coeffs * decay)
    return idft(FourierCoefficients(scaled), real=False)


def evaluate_at(f, x):
    """
    Evaluate the trigonometric interpolant of f at arbitrary points.

    The Nyquist mode is split symmetrically so real samples give real values.

    Args:
        f (PeriodicFunction): Samples.
        x (ndarray): Evaluation points (any real values).

    Returns:
        ndarray: Interpolant values, real when f is real.
    """
    c = dft(f)
    n = c.n_samples
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    coeffs = np.array(c.coeffs)
    nyquist = coeffs[0]
    k = np.arange(-n // 2 + 1, n // 2)
    inner = coeffs[1:]
    out = np.empty(flat.shape, dtype=complex)
    for start in range(0, flat.size, EVAL_CHUNK):
        chunk = flat[start:start + EVAL_CHUNK]
        phase = np.exp(1j * np.outer(chunk, k))
        out[start:start + EVAL_CHUNK] = phase @ inner + nyquist * np.cos(n // 2 * chunk)
    out = out.reshape(x.shape)
    return out.real if f.is_real else out


def spectral_derivative(f: PeriodicFunction, order: int = 1) -> PeriodicFunction:
    """Derivative of the trigonometric interpolant; the Nyquist mode is dropped."""
    c = dft(f)
    factor = (1j * c.modes) ** order
    factor[0] = 0.0
    return idft(FourierCoefficients(c.coeffs * factor), real=f.is_real or None)


def antiderivative(f):
    """Zero-mean periodic antiderivative; the mean of f must be handled by the caller."""
    c = dft(f)
    modes = c.modes
    safe = np.where(modes == 0, 1, modes)
    coeffs = np.where((modes == 0) | (modes == -c.n_samples // 2), 0.0, c.coeffs / (1j * safe))
    return idft(FourierCoefficients(coeffs), real=f.is_real or None)


def shift(f, amount):
    """Exact modal translation: returns samples of f(θ + amount)."""
    c = dft(f)
    coeffs = c.coeffs * np.exp(1j * c.modes * amount)
    coeffs[0] = c.coeffs[0] * np.cos(c.n_samples // 2 * amount)
    return idft(FourierCoefficients(coeffs), real=f.is_real or None)


def pv_hilbert_quadrature(f: PeriodicFunction) -> PeriodicFunction:
    """
    Principal-value quadrature of 𝓗f for use as an independent oracle.

    Hf(θ_j) = mean(f) + i·(2/n)·Σ_{(j-k) odd} f_k cot((θ_j - θ_k)/2): the
    trapezoid rule on the alternate nodes, which skips the singular node and
    is exact for modes |k| < n/2.
    """
    n = f.n_samples
    if n % 2:
        raise SizeError("principal-value oracle needs an even grid")
    values = np.asarray(f.values, dtype=complex)
    offsets = np.arange(n)
    odd = offsets % 2 == 1
    kernel = np.zeros(n, dtype=float)
    kernel[odd] = 1.0 / np.tan(np.pi * offsets[odd] / n)
    # circular convolution over the offset j - k
    conv = scipy.fft.ifft(scipy.fft.fft(values) * scipy.fft.fft(kernel))
    out = np.mean(values) + 1j * (2.0 / n) * conv
    return PeriodicFunction(out, is_real=False)
