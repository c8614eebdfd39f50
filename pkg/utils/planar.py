import logging
from math import factorial

import numpy as np
import scipy.fft

# Configure logging
logger = logging.getLogger(__name__)

# Points per chunk when summing kernels directly
CHUNK = 64


def cauchy_sum(points, nodes, weights, spacing, order=0):
    """
    Evaluate the k-th derivative of P(z) = z + Cg(z) at arbitrary points.

    Cg(z) = -(1/π) Σ spacing² g_k / (ζ_k - z) is the midpoint rule for the
    Cauchy transform; a point that coincides with a node skips that node.

    Args:
        points (ndarray): Complex evaluation points, any shape.
        nodes (ndarray): Complex positions of the active grid nodes.
        weights (ndarray): Density g at those nodes.
        spacing (float): Grid spacing.
        order (int): Derivative order k >= 0.

    Returns:
        ndarray: Values with the shape of points.
    """
    points = np.asarray(points, dtype=complex)
    flat = points.ravel()
    out = np.zeros(flat.shape, dtype=complex)
    if nodes.size:
        factor = -(spacing ** 2 / np.pi) * factorial(order)
        for start in range(0, flat.size, CHUNK):
            z = flat[start:start + CHUNK]
            diff = nodes[None, :] - z[:, None]
            near = np.abs(diff) < 1e-12 * spacing
            diff[near] = 1.0
            terms = weights[None, :] / diff ** (order + 1)
            terms[near] = 0.0
            out[start:start + CHUNK] = factor * terms.sum(axis=1)
    if order == 0:
        out += flat
    elif order == 1:
        out += 1.0
    return out.reshape(points.shape)


class GridConvolution:
    """FFT convolution with the discrete Cauchy and Beurling kernels on a square grid."""

    def __init__(self, half, spacing):
        self.size = 2 * half + 1
        self.spacing = spacing
        self.shape = (scipy.fft.next_fast_len(2 * self.size - 1),) * 2
        offsets = np.arange(-(self.size - 1), self.size)
        d = (offsets[None, :] + 1j * offsets[:, None]) * spacing
        d[self.size - 1, self.size - 1] = 1.0
        weight = spacing ** 2 / np.pi
        cauchy = weight / d
        beurling = -weight / d ** 2
        cauchy[self.size - 1, self.size - 1] = 0.0
        beurling[self.size - 1, self.size - 1] = 0.0
        self._cauchy = self._transform(cauchy)
        self._beurling = self._transform(beurling)
        logger.debug(f"Kernel transforms ready for a {self.size}x{self.size} grid, padded to {self.shape}")

    def _transform(self, kernel):
        full = np.zeros(self.shape, dtype=complex)
        idx = np.arange(-(self.size - 1), self.size) % self.shape[0]
        full[np.ix_(idx, idx)] = kernel
        return scipy.fft.fft2(full)

    def _apply(self, kernel_hat, g):
        padded = np.zeros(self.shape, dtype=complex)
        padded[:self.size, :self.size] = g
        out = scipy.fft.ifft2(scipy.fft.fft2(padded) * kernel_hat)
        return out[:self.size, :self.size]

    def cauchy(self, g):
        return self._apply(self._cauchy, g)

    def beurling(self, g):
        return self._apply(self._beurling, g)


def three_point_matrix(src, dst):
    """Matrix of the Möbius map sending the three points src to dst."""

    def to_standard(z1, z2, z3):
        return np.array([[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]], dtype=complex)

    return np.linalg.solve(to_standard(*dst), to_standard(*src))


def mobius(matrix, z):
    (a, b), (c, d) = matrix
    return (a * z + b) / (c * z + d)


def mobius_derivative(matrix, z):
    (a, b), (c, d) = matrix
    return (a * d - b * c) / (c * z + d) ** 2


def reflect(z):
    """Reflection in the unit circle, z -> 1/conj(z)."""
    return 1.0 / np.conj(z)
