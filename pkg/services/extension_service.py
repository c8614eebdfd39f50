import logging

import numpy as np
import scipy.fft

from errors import DomainError, NumericalDegeneracyError
from models import CircleDiffeo, HalfPlaneField, PeriodicFunction
from services.norms_service import zygmund_seminorm
from services.spectral_service import dft, evaluate_at
from utils.quadrature import gauss_legendre_unit

# Configure logging
logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# Vertical parameter of the extension; r = 2 extends the identity to the identity
VERTICAL = 2.0

# Below this |u| the averaging factor uses its Taylor series
SMALL_ARG = 1e-4


def dyadic_depths(levels, y_max):
    """-y_max·2^{-k} for k = 0 ... levels-1, approaching the real axis."""
    return -float(y_max) * 0.5 ** np.arange(levels)


def _average_factor(u):
    """E(u) = ∫_0^1 e^{iut} dt."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < SMALL_ARG
    safe = np.where(small, 1.0, u)
    series = 1.0 + 0.5j * u - u ** 2 / 6.0 - 1j * u ** 3 / 24.0
    return np.where(small, series, (np.exp(1j * safe) - 1.0) / (1j * safe))


def _periodic_part(source):
    """Periodic samples and the slope of the linear part (1 for a lift, 0 for a function)."""
    if isinstance(source, CircleDiffeo):
        return PeriodicFunction(source.lift, is_real=True), 1.0
    if not source.is_real:
        raise DomainError("Beurling–Ahlfors extension expects real boundary values")
    return source, 0.0


class _Averages:
    """Forward/backward averages α, β of the periodic part at one depth, with f(x ± s)."""

    def __init__(self, coeffs, s):
        n = coeffs.n_samples
        k = coeffs.modes.astype(float)
        c = np.array(coeffs.coeffs)
        nyq = n // 2

        def fold(weights_plus, weights_minus):
            # the Nyquist mode is split evenly between ±n/2 so real input stays real
            out = c * weights_plus
            out[0] = c[0] * 0.5 * (weights_plus[0] + weights_minus)
            return np.real(scipy.fft.ifft(scipy.fft.ifftshift(out)) * n)

        self.alpha = fold(_average_factor(k * s), _average_factor(nyq * s))
        self.beta = fold(_average_factor(-k * s), _average_factor(-nyq * s))
        self.ahead = fold(np.exp(1j * k * s), np.exp(1j * nyq * s))
        self.behind = fold(np.exp(-1j * k * s), np.exp(-1j * nyq * s))
        self.here = fold(np.ones(n), 1.0)


def _level_terms(source, depth):
    """α, β, their x and s derivatives at one depth, linear part included."""
    periodic, slope = _periodic_part(source)
    s = abs(depth)
    avg = _Averages(dft(periodic), s)
    x = periodic.nodes
    alpha = avg.alpha + slope * (x + 0.5 * s)
    beta = avg.beta + slope * (x - 0.5 * s)
    ahead = avg.ahead + slope * (x + s)
    behind = avg.behind + slope * (x - s)
    here = avg.here + slope * x
    return {
        "alpha": alpha,
        "beta": beta,
        "alpha_x": (ahead - here) / s,
        "alpha_s": (ahead - alpha) / s,
        "beta_x": (here - behind) / s,
        "beta_s": (behind - beta) / s,
    }


def _combine(alpha, beta):
    return 0.5 * (alpha + beta) - 0.5j * VERTICAL * (alpha - beta)


def ba_extend(source: PeriodicFunction | CircleDiffeo, depths=None, levels: int = 5,
              y_max: float = 0.125) -> HalfPlaneField:
    """
    Periodic Beurling–Ahlfors extension to the lower half-plane.

    Φ(x+iy) = ½(α+β) - i(r/2)(α-β) with α, β the averages of f over
    [x, x+|y|] and [x-|y|, x]; the averages are exact mode by mode.

    Args:
        source (PeriodicFunction | CircleDiffeo): Real boundary values or a lift.
        depths (ndarray, optional): Negative depths approaching 0; defaults to dyadic levels.
        levels (int): Number of dyadic levels when depths is omitted.
        y_max (float): Shallowest |y| when depths is omitted.

    Returns:
        HalfPlaneField: kind "map".
    """
    depths = dyadic_depths(levels, y_max) if depths is None else np.asarray(depths, dtype=float)
    rows = []
    for y in depths:
        terms = _level_terms(source, y)
        rows.append(_combine(terms["alpha"], terms["beta"]))
    return HalfPlaneField(depths, np.array(rows), "map", source=source)


def _derivatives(phi):
    if phi.kind != "map" or phi.source is None:
        raise DomainError("derivative fields need a map produced by ba_extend")
    dbar, dz = [], []
    for y in phi.depths:
        t = _level_terms(phi.source, y)
        a_x = 0.5 * (t["alpha_x"] + t["beta_x"])
        a_s = 0.5 * (t["alpha_s"] + t["beta_s"])
        b_x = t["alpha_x"] - t["beta_x"]
        b_s = t["alpha_s"] - t["beta_s"]
        sigma = -0.5j * VERTICAL
        phi_x = a_x + sigma * b_x
        # y = -s below the axis
        phi_y = -(a_s + sigma * b_s)
        dbar.append(0.5 * (phi_x + 1j * phi_y))
        dz.append(0.5 * (phi_x - 1j * phi_y))
    return np.array(dbar), np.array(dz)


def dbar_field(phi: HalfPlaneField) -> HalfPlaneField:
    """∂̄Φ from the analytically differentiated averages."""
    dbar, _ = _derivatives(phi)
    return HalfPlaneField(phi.depths, dbar, "dbar", source=phi.source)


def dz_field(phi):
    _, dz = _derivatives(phi)
    return HalfPlaneField(phi.depths, dz, "map", source=phi.source)


def dilatation_field(phi: HalfPlaneField) -> HalfPlaneField:
    """
    μ = ∂̄Φ/∂Φ at every node.

    Raises:
        NumericalDegeneracyError: The Jacobian is not positive at some node.
    """
    dbar, dz = _derivatives(phi)
    jacobian = np.abs(dz) ** 2 - np.abs(dbar) ** 2
    bad = np.flatnonzero(~(jacobian > 0.0))
    if bad.size:
        k, j = np.unravel_index(bad[0], jacobian.shape)
        raise NumericalDegeneracyError(
            f"Jacobian {jacobian[k, j]:.3e} at depth {phi.depths[k]:.3e}, x-node {j}", node=int(bad[0]))
    return HalfPlaneField(phi.depths, dbar / dz, "dilatation", source=phi.source)


def decay_profile(field: HalfPlaneField, order: float = 1.0) -> list:
    """Rows (depth, max |value|·|y|^{-order}) from the shallowest level to the deepest."""
    if order < 0:
        raise DomainError("decay order must be non-negative")
    level_max = np.max(np.abs(field.values), axis=1)
    weighted = level_max * np.abs(field.depths) ** (-order)
    return [(float(y), float(w)) for y, w in zip(field.depths, weighted)]


def level_growth(profile: list) -> list:
    """Ratios of successive weighted maxima, deeper level over shallower."""
    values = np.array([w for _, w in profile])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = values[1:] / values[:-1]
    return [float(r) for r in ratios]


def ba_point(f, x, y, nodes=64):
    """
    Φ(x+iy) by Gauss–Legendre quadrature of the defining averages.

    f may be a PeriodicFunction (evaluated through its trigonometric
    interpolant) or a callable.
    """
    if y >= 0:
        raise DomainError("extension points lie below the real axis")
    t, w = gauss_legendre_unit(nodes)
    s = abs(y)
    fn = (lambda p: evaluate_at(f, p)) if isinstance(f, PeriodicFunction) else f
    alpha = np.dot(w, fn(x + t * s))
    beta = np.dot(w, fn(x - t * s))
    return complex(_combine(alpha, beta))


def dbar_constant(f, levels=5, y_max=0.125):
    """Measured sup|∂̄Φ| / ‖f‖_{C^Z} over the dyadic levels."""
    seminorm = zygmund_seminorm(f).value
    field = dbar_field(ba_extend(f, levels=levels, y_max=y_max))
    sup = float(np.max(np.abs(field.values)))
    logger.info(f"sup |∂̄Φ| = {sup:.4g} against Zygmund seminorm {seminorm:.4g}")
    return {"sup_dbar": sup, "zygmund": seminorm, "k_ba": sup / seminorm if seminorm > 0 else 0.0}
