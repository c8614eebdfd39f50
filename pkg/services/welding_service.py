import logging

import numpy as np

from errors import DomainError
from models import CircleDiffeo, ConformalJet, PeriodicFunction, PlanarGrid, VerificationReport, WeldingTriple
from services import beltrami_service
from services.diffeo_service import affine_translation, compose, identity_diffeo, invert, normalize
from services.norms_service import (az_norm, bz_norm, coefficients_from_taylor, planar_weighted_norm,
                                    zygmund_seminorm)
from services.spectral_service import spectral_derivative

# Configure logging
logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


def _wrap_phase(values):
    """Reduce imaginary parts into (-π, π]."""
    im = np.angle(np.exp(1j * values.imag))
    return values.real + 1j * im


def _lifted_log(ratio):
    """log of a non-vanishing periodic ratio with continuous imaginary part, mean in (-π, π]."""
    values = np.log(np.abs(ratio)) + 1j * np.unwrap(np.angle(ratio))
    mean = np.mean(values.imag)
    values -= 1j * TWO_PI * np.round(mean / TWO_PI)
    return values


def _trace_seminorm(values):
    """Zygmund seminorm of a complex trace: real part plus imaginary part."""
    total = zygmund_seminorm(PeriodicFunction(np.real(values), is_real=True)).value
    if np.iscomplexobj(values):
        total += zygmund_seminorm(PeriodicFunction(np.imag(values), is_real=True)).value
    return total


def _decomposition(mu, **solver):
    """F_μ, H, G and the scale F(1) of the welding factorization F_μ = F(1)·G∘H."""
    F = beltrami_service.solve(mu, "disk_conformal", **solver)
    H = beltrami_service.solve(beltrami_service.symmetric_extension(mu), "three_point", **solver)
    G = beltrami_service.solve(beltrami_service.reflected_inverse(mu, H), "three_point", **solver)
    # H and G both fix 1
    return F, H, G, complex(F.evaluate(np.ones(1))[0])


def welding_check(mu: PlanarGrid, samples: int = 1024, tolerance: float = 1e-3,
                  **solver) -> WeldingTriple:
    """
    Residual of the welding identity log h' = log f' - log g'∘h on 𝕊.

    f = F_μ is conformal on 𝔻 with μ on 𝔻*; H is the 0, 1, ∞ normalized
    solution for the symmetric extension of μ; G carries the reflected
    inverse coefficient on 𝔻 and satisfies F_μ = G∘H, so with h = H|_𝕊
    log h_θ + i(h - θ) = log F'(e^{iθ}) - log G'(e^{ih}) modulo 2πi.

    Args:
        mu (PlanarGrid): Exterior coefficient.
        samples (int): Boundary samples.
        tolerance (float): Residual accepted as passing.

    Returns:
        WeldingTriple: h, both traces, the residual and the Zygmund seminorms of each term.
    """
    if mu.is_zero:
        h = identity_diffeo(samples)
        trace = PeriodicFunction(np.exp(1j * h.nodes))
        return WeldingTriple(h, trace, trace, 0.0, tolerance,
                             {"log_h": 0.0, "log_f": 0.0, "log_g": 0.0})
    F, H, G, f_one = _decomposition(mu, **solver)
    h = beltrami_service.trace_diffeo(H, samples)
    theta = h.nodes
    z = np.exp(1j * theta)
    w = np.exp(1j * h.values)
    log_f = np.log(F.derivative(z))
    log_g = np.log(f_one * G.derivative(w))
    lhs = h.log_deriv + 1j * (h.values - theta)
    residual = float(np.max(np.abs(_wrap_phase(lhs - (log_f - log_g)))))
    seminorms = {
        "log_h": _trace_seminorm(h.log_deriv),
        "log_f": _trace_seminorm(_lifted_log(F.derivative(z))),
        "log_g": _trace_seminorm(_lifted_log(G.derivative(w))),
    }
    logger.info(f"Welding residual {residual:.3e} on {samples} boundary samples")
    return WeldingTriple(h, PeriodicFunction(F.evaluate(z)), PeriodicFunction(f_one * G.evaluate(w)),
                         residual, tolerance, seminorms)


def lambda_map(mu1: PlanarGrid, mu2: PlanarGrid, samples: int = 1024, **solver) -> PeriodicFunction:
    """
    Λ(μ1, μ2) in angle coordinates: log(e^{iθ}G'(e^{iθ})/G(e^{iθ})).

    G solves for μ1 on 𝔻 and μ2 on 𝔻* and fixes 0, 1, ∞.

    Returns:
        PeriodicFunction: complex samples; real when the pair is reflection symmetric.
    """
    if any(b >= 1.0 for _, b in mu1.support) or any(a <= 1.0 for a, _ in mu2.support):
        raise DomainError("Λ expects μ1 inside the unit disk and μ2 outside it")
    G = beltrami_service.solve(beltrami_service.combine(mu1, mu2), "three_point", **solver)
    return _lambda_of(G, samples)


def _lambda_of(G, samples):
    _, _, log_slope = beltrami_service.circle_trace(G, samples)
    return PeriodicFunction(_lifted_log(log_slope))


def lifted_log_derivative(jet: ConformalJet, samples: int = 1024) -> PeriodicFunction:
    """log(zF'(z)/F(z)) on 𝕊 from a conformal jet, with the same branch as Λ."""
    theta = TWO_PI * np.arange(samples) / samples
    z = np.exp(1j * theta)
    return PeriodicFunction(_lifted_log(z * jet.evaluate(z, 1) / jet.evaluate(z)))


def translation_relation_check(mu1: PlanarGrid, mu2: PlanarGrid, nu: PlanarGrid, samples: int = 1024,
                               digest: str = "", environment: dict | None = None, tolerance: float = 5e-3,
                               **solver) -> VerificationReport:
    """
    Defect of Λ∘r_ν = Q_h∘Λ with h = H(ν)|_𝕊.

    ν is an interior coefficient; H(ν) solves its symmetric extension with
    0, 1, ∞ fixed, so it preserves 𝕊, and r_ν(μ) is the dilatation of
    H(μ)∘H(ν).
    """
    combined = beltrami_service.combine(mu1, mu2)
    G = beltrami_service.solve(combined, "three_point", **solver)
    base = _lambda_of(G, samples)
    if nu.is_zero:
        shifted, h = base, identity_diffeo(samples)
    else:
        symmetric = beltrami_service.combine(nu, beltrami_service.reflect(nu))
        H = beltrami_service.solve(symmetric, "three_point", **solver)
        h = beltrami_service.trace_diffeo(H, samples)
        moved = beltrami_service.compose_dilatation(combined, H)
        shifted = _lambda_of(beltrami_service.solve(moved, "three_point", **solver), samples)
    rhs = affine_translation(h, base)
    defect = float(np.max(np.abs(_wrap_phase(np.asarray(shifted.values) - np.asarray(rhs.values)))))
    lhs_norm = _trace_seminorm(np.asarray(shifted.values))
    rhs_norm = _trace_seminorm(np.asarray(rhs.values))
    detail = f"seminorms lhs {lhs_norm:.4g}, rhs {rhs_norm:.4g}"
    logger.info(f"Translation relation defect {defect:.3e}; {detail}")
    return VerificationReport(
        "translation-relation", digest, lhs_norm, rhs_norm, defect, tolerance, bool(defect <= tolerance),
        False, dict(environment or {}), detail,
    )


def equivalence_diagnostics(mu: PlanarGrid, radius: float = 1.0, jet_samples: int = 256,
                            ladder: dict | None = None, **solver) -> dict:
    """
    The five quantities of the decay/regularity equivalence for an exterior coefficient.

    ladder holds the per_level, max_levels and tail_tol of the B^Z and A^Z radii ladder.

    Returns:
        dict: mu_z, bz_log_derivative, az_schwarzian, az_third_derivative, zygmund_derivative_trace.
    """
    ladder = ladder or {}
    F = beltrami_service.solve(mu, "disk_conformal", **solver)
    jet = beltrami_service.conformal_jet(F, radius, jet_samples)
    boundary = PeriodicFunction.from_callable(lambda t: jet.evaluate(np.exp(1j * t), 1), 1024, real=False)
    values = {
        "mu_z": planar_weighted_norm(mu, 1.0).value,
        "bz_log_derivative": bz_norm(coefficients_from_taylor(jet.log_derivative_coeffs), **ladder).value,
        "az_schwarzian": az_norm(coefficients_from_taylor(jet.schwarzian_coeffs), **ladder).value,
        "az_third_derivative": az_norm(coefficients_from_taylor(jet.derivative_coeffs(3)), **ladder).value,
        "zygmund_derivative_trace": _trace_seminorm(np.asarray(boundary.values)),
    }
    logger.info("Equivalence diagnostics: " + ", ".join(f"{k}={v:.4g}" for k, v in values.items()))
    return values


def _argument_diffeo(trace):
    """θ ↦ arg w(θ) for a boundary trace winding once around 0."""
    n = trace.size
    theta = TWO_PI * np.arange(n) / n
    args = np.unwrap(np.angle(trace))
    args -= TWO_PI * np.round(args[0] / TWO_PI)
    lift = args - theta
    slope = spectral_derivative(PeriodicFunction(lift, is_real=True))
    return CircleDiffeo(lift, 1.0 + np.asarray(slope.values))


def welding_homeo(mu: PlanarGrid, samples: int = 1024, **solver) -> CircleDiffeo:
    """
    h = (F(1)·G)⁻¹∘F_μ on 𝕊, normalized at 1, i, -i.

    F_μ|_𝕊 and F(1)·G|_𝕊 parametrize the same Jordan curve. Each is read
    through its argument, which stays monotone while the curve is
    star-shaped about 0, and h is the first parametrization pulled back
    through the second.

    Args:
        mu (PlanarGrid): Exterior coefficient.
        samples (int): Boundary samples.

    Returns:
        CircleDiffeo: The normalized welding homeomorphism.
    """
    if mu.is_zero:
        return identity_diffeo(samples)
    F, _, G, f_one = _decomposition(mu, **solver)
    _, f_trace, _ = beltrami_service.circle_trace(F, samples)
    _, g_trace, _ = beltrami_service.circle_trace(G, samples)
    inner = _argument_diffeo(f_trace)
    outer = _argument_diffeo(f_one * g_trace)
    return normalize(compose(invert(outer), inner))


def boundary_cross_check(mu: PlanarGrid, samples: int = 1024, **solver) -> float:
    """max lift gap between boundary_homeo and welding_homeo for the same coefficient."""
    direct = beltrami_service.boundary_homeo(mu, samples, **solver)
    welded = welding_homeo(mu, samples, **solver)
    gap = float(np.max(np.abs(direct.lift - welded.lift)))
    logger.info(f"boundary_homeo and welding_homeo differ by {gap:.3e}")
    return gap
