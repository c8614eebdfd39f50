import logging
from functools import lru_cache

import numpy as np
import scipy.fft
from scipy.interpolate import griddata
from scipy.spatial import QhullError

from errors import (DomainError, ExtractionError, ExtrapolationError, NumericalDegeneracyError, SolverError,
                    SymmetryError)
from models import CircleDiffeo, ConformalJet, PlanarGrid, QuasiconformalMap
from services.diffeo_service import normalize
from utils import planar

# Configure logging
logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# Nodes beyond the support band kept as zero-valued anchors when pushing μ forward
PUSH_BAND = 3

# Circularity below which a trace is treated as lying on 𝕊
CIRCLE_TOL = 1e-6
CIRCLE_LIMIT = 1e-4

JET_TAIL = 1e-10


@lru_cache(maxsize=4)
def _convolution(half, spacing):
    return planar.GridConvolution(half, spacing)


def solve(mu: PlanarGrid, normalization: str = "disk_conformal", tol: float = 1e-8, max_iter: int = 200,
          mu_cap: float = 0.7) -> QuasiconformalMap:
    """
    Solve ∂̄F = μ∂F for the normalized quasiconformal map F.

    The density g = ∂̄P of the principal solution P = z + Cg solves
    g = μ(1 + Bg); the iteration runs until the grid max residual is below
    tol, then F = scale·P + shift realizes the normalization.

    Args:
        mu (PlanarGrid): Beltrami coefficient.
        normalization (str): "disk_conformal" (F(0)=0, F'(0)=1) or "three_point" (0, 1, ∞ fixed).
        tol (float): Residual target.
        max_iter (int): Iteration cap.
        mu_cap (float): Largest admissible ‖μ‖_∞.

    Returns:
        QuasiconformalMap: The normalized solution with iteration statistics.

    Raises:
        DomainError: ‖μ‖_∞ exceeds the cap or the normalization is unknown.
        SolverError: The iteration stopped contracting.
        NumericalDegeneracyError: The Jacobian is not positive at a node.
    """
    if normalization not in ("disk_conformal", "three_point"):
        raise DomainError(f"unknown normalization {normalization!r}")
    if mu.sup_abs > mu_cap:
        raise DomainError(f"‖μ‖_∞ = {mu.sup_abs:.3f} exceeds the solver cap {mu_cap}")
    values = np.asarray(mu.values)
    density = np.zeros(values.shape, dtype=complex)
    residual, steps, contraction = 0.0, 0, 0.0
    if not mu.is_zero:
        conv = _convolution(mu.half, mu.spacing)
        logger.info(f"Solving Beltrami equation on a {values.shape[0]}² grid, ‖μ‖_∞ = {mu.sup_abs:.3f}")
        density = values.copy()
        history = []
        while True:
            update = values * (1.0 + conv.beurling(density))
            residual = float(np.max(np.abs(update - density)))
            density = update
            steps += 1
            history.append(residual)
            logger.debug(f"step {steps}: residual {residual:.3e}")
            if residual <= tol:
                break
            if steps >= max_iter or not np.isfinite(residual):
                tail = np.array(history[-6:])
                ratios = tail[1:] / tail[:-1] if tail.size > 1 else np.array([np.inf])
                contraction = float(np.exp(np.mean(np.log(ratios)))) if np.all(ratios > 0) else float("inf")
                raise SolverError(f"residual {residual:.3e} after {steps} steps", contraction=contraction)
        if len(history) > 1:
            contraction = float((history[-1] / history[0]) ** (1.0 / (len(history) - 1)))
        logger.info(f"Converged in {steps} steps, residual {residual:.2e}, contraction {contraction:.3f}")
        principal = mu.nodes + conv.cauchy(density)
        dz = 1.0 + conv.beurling(density)
    else:
        principal = np.array(mu.nodes)
        dz = np.ones(values.shape, dtype=complex)

    draft = QuasiconformalMap(mu, density, principal, dz, normalization, residual=residual,
                              steps=steps, contraction=contraction)
    p0 = complex(draft.principal_at(np.zeros(1))[0])
    if normalization == "disk_conformal":
        scale = 1.0 / complex(draft.principal_at(np.zeros(1), order=1)[0])
    else:
        scale = 1.0 / (complex(draft.principal_at(np.ones(1))[0]) - p0)
    result = QuasiconformalMap(mu, density, principal, dz, normalization, scale=scale, shift=-scale * p0,
                               residual=residual, steps=steps, contraction=contraction)
    jacobian = result.jacobian()
    bad = np.flatnonzero(~(jacobian > 0.0))
    if bad.size:
        raise NumericalDegeneracyError(f"Jacobian {jacobian.flat[bad[0]]:.3e} at grid node {bad[0]}",
                                       node=int(bad[0]))
    return result


def conformal_jet(F: QuasiconformalMap, radius: float = 1.0, samples: int = 256,
                  tail_tol: float = JET_TAIL) -> ConformalJet:
    """
    Taylor coefficients of F on the disk from a DFT on |z| = radius.

    Raises:
        ExtractionError: Negative modes or the last coefficient exceed tail_tol times the largest.
    """
    if any(b < 1.0 for _, b in F.grid.support):
        raise DomainError("jets need a map that is conformal on the whole unit disk")
    inner = F.grid.inner_radius
    if not radius < inner:
        raise DomainError(f"extraction radius {radius} reaches the support at {inner}")
    theta = TWO_PI * np.arange(samples) / samples
    values = F.evaluate(radius * np.exp(1j * theta))
    spectrum = scipy.fft.fft(values) / samples
    scale = np.max(np.abs(spectrum))
    negative = np.max(np.abs(spectrum[samples // 2:]))
    last = abs(spectrum[samples // 2 - 1])
    tail = max(negative, last) / scale if scale > 0 else 0.0
    if tail > tail_tol:
        raise ExtractionError(f"jet tail {tail:.2e} above {tail_tol:.0e}; use more samples or a smaller radius")
    m = np.arange(samples // 2)
    coeffs = spectrum[:samples // 2] / radius ** m
    return ConformalJet(coeffs, radius, tail)


def reflect(mu: PlanarGrid) -> PlanarGrid:
    """μ*(z) = conj(μ(1/z̄))·(z/z̄)² on the same grid, support reflected in 𝕊."""
    support = tuple((1.0 / b, 1.0 / a) for a, b in mu.support)
    nodes = mu.nodes
    r = np.abs(nodes)
    mask = np.zeros(r.shape, dtype=bool)
    for a, b in support:
        mask |= (r >= a) & (r <= b)
    values = np.zeros(nodes.shape, dtype=complex)
    z = nodes[mask]
    values[mask] = np.conj(mu.sample(planar.reflect(z))) * (z / np.conj(z)) ** 2
    return PlanarGrid(mu.spacing, mu.half, values, support)


def _padded(mu, half):
    pad = half - mu.half
    return np.pad(np.asarray(mu.values), pad)


def combine(inner: PlanarGrid, outer: PlanarGrid) -> PlanarGrid:
    """One coefficient equal to inner on its support and outer on its support."""
    if inner.spacing != outer.spacing:
        raise DomainError("combined coefficients must share a grid spacing")
    half = max(inner.half, outer.half)
    a, b = _padded(inner, half), _padded(outer, half)
    if np.any((a != 0) & (b != 0)):
        raise DomainError("combined coefficients overlap")
    return PlanarGrid(inner.spacing, half, a + b, inner.support + outer.support)


def symmetric_extension(mu: PlanarGrid) -> PlanarGrid:
    """μ on 𝔻* together with its reflection on 𝔻."""
    if any(b < 1.0 for _, b in mu.support):
        raise DomainError("symmetric extension expects a coefficient supported outside the unit disk")
    return combine(reflect(mu), mu)


def circle_trace(F, samples):
    """(θ, F(e^{iθ}), e^{iθ}F'(e^{iθ})/F(e^{iθ})) on the unit circle."""
    theta = TWO_PI * np.arange(samples) / samples
    z = np.exp(1j * theta)
    w = F.evaluate(z)
    return theta, w, z * F.derivative(z) / w


def trace_diffeo(F: QuasiconformalMap, samples: int) -> CircleDiffeo:
    """Circle diffeomorphism carried by a solution that preserves 𝕊."""
    theta, w, log_slope = circle_trace(F, samples)
    drift = float(np.max(np.abs(np.abs(w) - 1.0)))
    if drift > CIRCLE_LIMIT:
        raise SymmetryError(f"trace leaves the unit circle by {drift:.2e}; refine the grid")
    if drift > CIRCLE_TOL:
        logger.warning(f"Trace circularity {drift:.2e} above {CIRCLE_TOL:.0e}")
    values = np.unwrap(np.angle(w))
    values -= TWO_PI * np.round(values[0] / TWO_PI)
    return CircleDiffeo(values - theta, np.real(log_slope))


def boundary_homeo(mu: PlanarGrid, samples: int = 1024, **solver) -> CircleDiffeo:
    """
    The normalized boundary homeomorphism h_μ.

    μ is extended symmetrically so its 0, 1, ∞ normalized solution maps 𝕊
    onto itself; the trace is then normalized at 1, i, -i.
    """
    if mu.is_zero:
        return CircleDiffeo(np.zeros(samples), np.ones(samples), normalized=True)
    H = solve(symmetric_extension(mu), "three_point", **solver)
    return normalize(trace_diffeo(H, samples))


def inverse_samples(mu, H):
    """
    Pushforward samples (H(z), μ⁻¹(H(z))) with μ⁻¹∘H = -μ·∂H/conj(∂H).

    Nodes in a band of PUSH_BAND spacings around each exterior support annulus
    are included with value zero outside the support.
    """
    grid = H.grid
    r = np.abs(grid.nodes)
    band = PUSH_BAND * grid.spacing
    near = np.zeros(r.shape, dtype=bool)
    for a, b in mu.support:
        near |= (r >= a - band) & (r <= b + band)
    values = _padded(mu, grid.half)[near]
    dz = H.dz_values[near]
    return H.values[near], -values * dz / np.conj(dz)


def _scatter(points, values, targets):
    xy = np.column_stack([points.real, points.imag])
    query = np.column_stack([targets.real, targets.imag])
    try:
        re = griddata(xy, values.real, query, method="linear")
        im = griddata(xy, values.imag, query, method="linear")
    except QhullError as e:
        raise ExtrapolationError(f"pushforward samples do not span a triangulation: {e}") from e
    missing = np.isnan(re) | np.isnan(im)
    if np.any(missing):
        raise ExtrapolationError(f"{int(np.sum(missing))} target nodes lie outside the pushforward hull")
    return re + 1j * im


def _image_support(H, mu):
    support = []
    r = np.abs(H.grid.nodes)
    image = np.abs(H.values)
    for a, b in mu.support:
        ring = (r >= a) & (r <= b)
        support.append((float(np.min(image[ring])), float(np.max(image[ring]))))
    return tuple(support)


def invert_coefficient(mu, H):
    """
    Beltrami coefficient of H^{-1}, resampled onto H's grid.

    Args:
        mu (PlanarGrid): Exterior coefficient whose symmetric extension H solves.
        H (QuasiconformalMap): Three-point normalized symmetric solution.

    Returns:
        PlanarGrid: μ⁻¹ on the image support.
    """
    grid = H.grid
    if mu.is_zero:
        return PlanarGrid(grid.spacing, grid.half, np.zeros(grid.nodes.shape), mu.support)
    points, values = inverse_samples(mu, H)
    support = _image_support(H, mu)
    r = np.abs(grid.nodes)
    mask = np.zeros(r.shape, dtype=bool)
    for a, b in support:
        mask |= (r >= a) & (r <= b)
    out = np.zeros(grid.nodes.shape, dtype=complex)
    out[mask] = _scatter(points, values, grid.nodes[mask])
    return PlanarGrid(grid.spacing, grid.half, out, support)


def reflected_inverse(mu: PlanarGrid, H: QuasiconformalMap) -> PlanarGrid:
    """(μ⁻¹)* on 𝔻, sampling the pushforward directly at the reflected nodes."""
    grid = H.grid
    image = _image_support(H, mu)
    support = tuple((1.0 / b, 1.0 / a) for a, b in image)
    r = np.abs(grid.nodes)
    mask = np.zeros(r.shape, dtype=bool)
    for a, b in support:
        mask |= (r >= a) & (r <= b)
    out = np.zeros(grid.nodes.shape, dtype=complex)
    if not mu.is_zero:
        points, values = inverse_samples(mu, H)
        z = grid.nodes[mask]
        out[mask] = np.conj(_scatter(points, values, planar.reflect(z))) * (z / np.conj(z)) ** 2
    return PlanarGrid(grid.spacing, grid.half, out, support)


def compose_dilatation(mu: PlanarGrid, H_nu: QuasiconformalMap) -> PlanarGrid:
    """
    Complex dilatation of H(μ) ∘ H(ν) on the grid of ν.

    (μ_B + μ_A(B)·θ) / (1 + conj(μ_B)·μ_A(B)·θ) with B = H(ν), θ = conj(∂B)/∂B.
    """
    grid = H_nu.grid
    if grid.spacing != mu.spacing:
        raise DomainError("coefficients must share a grid spacing")
    nu = np.asarray(grid.values)
    outer = mu.sample(H_nu.values)
    dz = H_nu.dz_values
    theta = np.conj(dz) / dz
    values = (nu + outer * theta) / (1.0 + np.conj(nu) * outer * theta)
    r = np.abs(grid.nodes)
    support = list(grid.support)
    for side in (r < 1.0, r > 1.0):
        pulled = (np.abs(outer) > 0) & side
        if np.any(pulled):
            support.append((float(np.min(r[pulled])), float(np.max(r[pulled]))))
    return PlanarGrid(grid.spacing, grid.half, values, tuple(support))


def jacobian_distortion(H, mu):
    """max and min of (|H(z)| - 1)/(|z| - 1) over the exterior support nodes of μ."""
    r = np.abs(H.grid.nodes)
    ring = np.zeros(r.shape, dtype=bool)
    for a, b in mu.support:
        ring |= (r >= a) & (r <= b)
    ratio = (np.abs(H.values[ring]) - 1.0) / (r[ring] - 1.0)
    return float(np.max(ratio)), float(np.min(ratio))
