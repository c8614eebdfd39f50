import logging

import numpy as np
import scipy.fft

from errors import DomainError, TruncationError
from models import BeltramiField, FourierCoefficients, PeriodicFunction, SeminormValue
from services.spectral_service import dft, spectral_derivative, szego_exterior, szego_interior

# Configure logging
logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# Radii ladder defaults for the B^Z / A^Z sup over the disk
RADII_PER_LEVEL = 16
MAX_LEVELS = 60
TAIL_TOL = 1e-8


def _real_values(f):
    if not f.is_real:
        raise DomainError("seminorm expects a real-valued function")
    return np.asarray(f.values, dtype=float)


def _step(k, n):
    return TWO_PI * k / n


def _first_differences(values, k):
    """f(x + kh) - f(x) at every node."""
    return np.roll(values, -k) - values


def holder_seminorm(f: PeriodicFunction, alpha: float) -> SeminormValue:
    """
    Discrete C^α seminorm: max of |f(x+t) - f(x)| / t^α over t = kh <= π.

    Args:
        f (PeriodicFunction): Real samples.
        alpha (float): Exponent in (0, 1]; alpha = 1 is the Lipschitz seminorm.

    Returns:
        SeminormValue: Value with the maximizing step recorded.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"Hölder exponent {alpha} is outside (0, 1]")
    values = _real_values(f)
    n = values.size
    best, best_t = 0.0, 0.0
    for k in range(1, n // 2 + 1):
        t = _step(k, n)
        q = np.max(np.abs(_first_differences(values, k))) / t ** alpha
        if q > best:
            best, best_t = q, t
    kind = "lipschitz" if alpha == 1.0 else f"holder({alpha:g})"
    return SeminormValue(float(best), n, kind, details={"argmax_step": best_t})


def lipschitz_seminorm(f: PeriodicFunction) -> SeminormValue:
    return holder_seminorm(f, 1.0)


def zygmund_seminorm(f: PeriodicFunction) -> SeminormValue:
    """
    Discrete Zygmund seminorm: max of |f(x+t) + f(x-t) - 2f(x)| / (2t) over t = kh <= π.

    The second difference is formed as a difference of two first differences,
    so the value never exceeds the Lipschitz seminorm on the same grid.
    """
    values = _real_values(f)
    n = values.size
    best, best_t = 0.0, 0.0
    for k in range(1, n // 2 + 1):
        t = _step(k, n)
        d1 = _first_differences(values, k)
        second = d1 - np.roll(d1, k)
        q = np.max(np.abs(second)) / (2.0 * t)
        if q > best:
            best, best_t = q, t
    return SeminormValue(float(best), n, "zygmund", details={"argmax_step": best_t})


def besov_seminorm(f: PeriodicFunction, s: float) -> SeminormValue:
    """
    Discrete Besov B^s_{∞,∞} seminorm with forward differences of order floor(s) + 1.

    Args:
        f (PeriodicFunction): Real samples.
        s (float): Smoothness in (0, 2).

    Returns:
        SeminormValue: sup over t = kh <= π of t^{-s} max_x |Δ_t^m f(x)|.
    """
    if not 0.0 < s < 2.0:
        raise DomainError(f"Besov smoothness {s} is outside (0, 2)")
    values = _real_values(f)
    n = values.size
    order = int(np.floor(s)) + 1
    best, best_t = 0.0, 0.0
    for k in range(1, n // 2 + 1):
        t = _step(k, n)
        diff = _first_differences(values, k)
        if order == 2:
            diff = np.roll(diff, -k) - diff
        q = np.max(np.abs(diff)) / t ** s
        if q > best:
            best, best_t = q, t
    return SeminormValue(float(best), n, f"besov({s:g})", details={"argmax_step": best_t, "order": order})


def sup_norm(f):
    return float(np.max(np.abs(f.values)))


def holder_norm_1_plus(f, alpha):
    """‖f'‖_{C^α} + ‖f'‖_∞ with f' the spectral derivative."""
    df = spectral_derivative(f)
    return holder_seminorm(df, alpha).value + sup_norm(df)


def radii_ladder(levels, per_level=RADII_PER_LEVEL):
    """0 followed by each dyadic interval [1 - 2^{1-j}, 1 - 2^{-j}] split evenly."""
    radii = [np.zeros(1)]
    for j in range(1, levels + 1):
        radii.append(_level_radii(j, per_level))
    return np.concatenate(radii)


def _level_radii(j, per_level):
    lo, hi = 1.0 - 2.0 ** (1 - j), 1.0 - 2.0 ** (-j)
    return lo + (hi - lo) * np.arange(1, per_level + 1) / per_level


def _circle_max(coeffs, radii, n):
    """max over θ of |Σ_k coeffs_k r^k e^{ikθ}| for each radius."""
    k = np.arange(coeffs.size)
    table = coeffs[None, :] * radii[:, None] ** k[None, :]
    values = scipy.fft.ifft(table, n=n, axis=1) * n
    return np.max(np.abs(values), axis=1)


def _taylor(c):
    wrong = np.max(np.abs(c.coeffs[c.modes < 0]), initial=0.0)
    if wrong > 1e-12:
        raise DomainError(f"interior norm received negative modes of size {wrong:.2e}")
    return c.taylor()


def _weighted_sup(coeffs, n, tail_weight, kind, levels, per_level, max_levels, tail_tol, offset=0.0):
    sup, arg_r = 0.0, 0.0
    if coeffs.size:
        sup = float(np.max(np.abs(_circle_max(coeffs, np.zeros(1), n))))
    depth = levels if levels is not None else max_levels
    tail = np.inf
    used = 0
    for j in range(1, depth + 1):
        radii = _level_radii(j, per_level)
        vals = (1.0 - radii ** 2) * _circle_max(coeffs, radii, n) if coeffs.size else np.zeros(radii.size)
        i = int(np.argmax(vals))
        if vals[i] > sup:
            sup, arg_r = float(vals[i]), float(radii[i])
        used = j
        tail = (1.0 - radii[-1] ** 2) * tail_weight
        if levels is None and tail <= tail_tol * max(sup + offset, 1e-300):
            break
    else:
        if levels is None:
            raise TruncationError(f"{kind} tail {tail:.2e} still above tolerance after {max_levels} levels")
    logger.debug(f"{kind}: sup {sup:.6g} at r={arg_r:.6f} using {used} levels, tail {tail:.2e}")
    return sup, {"levels": used, "radii_per_level": per_level, "argmax_radius": arg_r, "tail": float(tail)}


def bz_norm(c: FourierCoefficients, levels: int | None = None, per_level: int = RADII_PER_LEVEL,
            max_levels: int = MAX_LEVELS, tail_tol: float = TAIL_TOL) -> SeminormValue:
    """
    B^Z norm |Φ'(0)| + sup (1 - |z|²)|Φ''(z)| of Φ = Σ_{k>=0} c_k z^k.

    The sup runs over the dyadic radii ladder; without an explicit levels
    count the ladder grows until (1 - r²)·Σ k(k-1)|c_k| falls below
    tail_tol times the running sup.

    Args:
        c (FourierCoefficients): Interior coefficients.
        levels (int, optional): Fixed number of dyadic levels (refinement diagnostics).

    Returns:
        SeminormValue: kind "bz", ladder description in details.
    """
    a = _taylor(c)
    k = np.arange(a.size)
    second = (k[2:] * (k[2:] - 1) * a[2:]) if a.size > 2 else np.zeros(0, dtype=complex)
    first = abs(a[1]) if a.size > 1 else 0.0
    tail_weight = float(np.sum(np.abs(second)))
    sup, details = _weighted_sup(second, c.n_samples, tail_weight, "bz", levels, per_level,
                                 max_levels, tail_tol, offset=first)
    # r = 0 term carries weight 1 as well
    return SeminormValue(first + sup, c.n_samples, "bz", details=details)


def az_norm(c: FourierCoefficients, levels: int | None = None, per_level: int = RADII_PER_LEVEL,
            max_levels: int = MAX_LEVELS, tail_tol: float = TAIL_TOL) -> SeminormValue:
    """A^Z norm sup (1 - |z|²)|Ψ(z)| of Ψ = Σ_{k>=0} c_k z^k."""
    a = _taylor(c)
    tail_weight = float(np.sum(np.abs(a)))
    sup, details = _weighted_sup(a, c.n_samples, tail_weight, "az", levels, per_level, max_levels, tail_tol)
    return SeminormValue(sup, c.n_samples, "az", details=details)


def bz_norm_exterior(c: FourierCoefficients, **kwargs) -> SeminormValue:
    """B^Z(𝔻*) norm of Σ_{k<0} c_k z^k, computed through w = 1/z."""
    n = c.n_samples
    wrong = np.max(np.abs(c.coeffs[c.modes >= 0]), initial=0.0)
    if wrong > 1e-12:
        raise DomainError(f"exterior norm received non-negative modes of size {wrong:.2e}")
    reflected = np.zeros(2 * n, dtype=complex)
    # mode -m of c becomes mode m of the reflected function
    for m in range(1, n // 2 + 1):
        reflected[n + m] = c.mode(-m)
    value = bz_norm(FourierCoefficients(reflected), **kwargs)
    return SeminormValue(value.value, n, "bz", details=value.details)


def coefficients_from_taylor(a) -> FourierCoefficients:
    """Wrap Taylor coefficients a_0 ... a_M as interior FourierCoefficients."""
    a = np.asarray(a, dtype=complex)
    n = 16
    while n // 2 < a.size:
        n *= 2
    coeffs = np.zeros(n, dtype=complex)
    coeffs[n // 2:n // 2 + a.size] = a
    return FourierCoefficients(coeffs)


def beltrami_weighted_norm(mu: BeltramiField, alpha: float) -> SeminormValue:
    """
    Weighted norm max ((d^{-α}) ∨ 1)|μ| with d the distance to the boundary.

    Args:
        mu (BeltramiField): Dilatation on a disk-exterior or half-plane grid.
        alpha (float): Decay order in (0, 2).

    Returns:
        SeminormValue: kind "beltrami_weighted(α)"; profile rows are
        (level, distance, max |μ|, weighted max) for each level.
    """
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"decay order {alpha} is outside (0, 2)")
    d = mu.distances
    weight = np.maximum(d ** (-alpha), 1.0)
    level_max = np.max(np.abs(mu.values), axis=1) if mu.values.size else np.zeros(d.size)
    weighted = weight * level_max
    profile = tuple((float(l), float(dd), float(m), float(w))
                    for l, dd, m, w in zip(mu.levels, d, level_max, weighted))
    value = float(np.max(weighted, initial=0.0))
    return SeminormValue(value, mu.n_angles, f"beltrami_weighted({alpha:g})", profile=profile)


def planar_weighted_norm(grid, alpha):
    """The same weighted norm evaluated over every node of a PlanarGrid, on either side of 𝕊."""
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"decay order {alpha} is outside (0, 2)")
    mask = grid.values != 0
    if not np.any(mask):
        return SeminormValue(0.0, grid.values.shape[0], f"beltrami_weighted({alpha:g})")
    d = np.abs(np.abs(grid.nodes[mask]) - 1.0)
    weighted = np.maximum(d ** (-alpha), 1.0) * np.abs(grid.values[mask])
    return SeminormValue(float(np.max(weighted)), grid.values.shape[0], f"beltrami_weighted({alpha:g})")


def decompose_cz(f):
    """Szegő pair (interior, exterior) of f; the constant term sits in the interior."""
    return szego_interior(f), szego_exterior(f)


def split_constant(f, **kwargs):
    """
    Measure K_split = max(B^Z parts) / (Zygmund seminorm + |f̂(1)| + |f̂(-1)|).

    Returns:
        dict: bz_interior, bz_exterior, reference and k_split.
    """
    interior, exterior = decompose_cz(f)
    bz_in = bz_norm(interior, **kwargs).value
    bz_out = bz_norm_exterior(exterior, **kwargs).value
    values = np.asarray(f.values)
    reference = zygmund_seminorm(PeriodicFunction(values.real, is_real=True)).value
    if np.iscomplexobj(values):
        reference += zygmund_seminorm(PeriodicFunction(values.imag, is_real=True)).value
    c = dft(f)
    reference += abs(c.mode(1)) + abs(c.mode(-1))
    top = max(bz_in, bz_out)
    k_split = top / reference if reference > 0 else 0.0
    return {"bz_interior": bz_in, "bz_exterior": bz_out, "reference": reference, "k_split": k_split}


def dyadic_disk_field(fn, levels, n_angles, d_max=1.0):
    """Sample fn on radii 1 + d_max·2^{-k}, k = 0 ... levels-1."""
    radii = np.sort(1.0 + d_max * 0.5 ** np.arange(levels))
    theta = TWO_PI * np.arange(n_angles) / n_angles
    points = radii[:, None] * np.exp(1j * theta)[None, :]
    return BeltramiField("disk_exterior", radii, fn(points), ratio=0.5)


def dyadic_halfplane_field(fn, levels, n, y_max):
    """Sample fn on depths -y_max·2^{-k}, k = 0 ... levels-1."""
    depths = -y_max * 0.5 ** np.arange(levels)
    x = TWO_PI * np.arange(n) / n
    points = x[None, :] + 1j * depths[:, None]
    return BeltramiField("halfplane_periodic", depths, fn(points), ratio=0.5)
