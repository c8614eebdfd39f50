import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from errors import DomainError
from models import AnnulusDecomposition, BeltramiField, RecurrenceTrace, VerificationReport
from services import beltrami_service
from services.norms_service import beltrami_weighted_norm, planar_weighted_norm

# Configure logging
logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# Terms are capped here; log(CAP) bounds every stored logarithm
CAP = 1e300
DIVERGED = 1e6

# Points with |ζ| above this are left out of the end-to-end check
ZETA_LIMIT = 0.95

# Radii per annulus when sampling a closed-form envelope
ENVELOPE_SAMPLES = 512


def _check_alpha(alpha):
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"α = {alpha} is outside (0, 2)")


def _check_lambda(lam):
    if not 0.0 < lam < 1.0:
        raise DomainError(f"λ = {lam} is outside (0, 1)")


def lambda_threshold(alpha):
    """(1/4)^{(2-α)²/(2+α)}."""
    _check_alpha(alpha)
    return 0.25 ** ((2.0 - alpha) ** 2 / (2.0 + alpha))


def certified_threshold(alpha):
    """
    (1/4)^{(2-α)²/4}: above it the dominating sequence s'_n diverges.

    The dominating logarithms b_n = log s'_n obey b_n = (n/α)log λ + (2/α)b_{n-1},
    whose linear particular solution is overtaken exactly when
    log(4λ)/α exceeds its value at n = 1.
    """
    _check_alpha(alpha)
    return 0.25 ** ((2.0 - alpha) ** 2 / 4.0)


def default_lambda(alpha):
    """max(certified threshold + 0.05, 0.9), pulled back below 1 when needed."""
    thr = certified_threshold(alpha)
    lam = max(thr + 0.05, 0.9)
    return lam if lam < 1.0 else 0.5 * (1.0 + thr)


def _iterate(alpha, lam, n_max, first, step):
    _check_alpha(alpha)
    _check_lambda(lam)
    logs = [0.0]
    capped_from = None
    for n in range(1, n_max + 1):
        value = first if n == 1 else step(n, logs[-1])
        if value > np.log(CAP):
            capped_from = n
            logs.extend([np.log(CAP)] * (n_max + 1 - n))
            break
        logs.append(value)
    return np.exp(np.array(logs)), capped_from


def recurrence(alpha: float, lam: float, n_max: int = 200, tau: float = 1.0) -> RecurrenceTrace:
    """
    s_0 = 1, s_n = λ^{n/α}(1 + s_{n-1})^{2/α}, iterated in logarithms.

    Terms above 1e300 are capped and the cap position is recorded.

    Returns:
        RecurrenceTrace: the sequence with its divergence flag.
    """
    log_lam = np.log(lam)

    def step(n, prev):
        return (n * log_lam + 2.0 * np.logaddexp(0.0, prev)) / alpha

    s, capped_from = _iterate(alpha, lam, n_max, np.log(4.0 * lam) / alpha, step)
    diverged = bool(s[-1] > DIVERGED)
    if lam <= lambda_threshold(alpha):
        logger.warning(f"λ = {lam} is at or below the threshold {lambda_threshold(alpha):.5f}; no claim is made")
    return RecurrenceTrace(alpha, lam, s, tau=tau, diverged=diverged, capped_from=capped_from)


def recurrence_residuals(trace):
    """Relative defects of (1/(1 + s_{n-1}))² s_n^α = λ^n over the uncapped steps."""
    s = trace.uncapped
    n = np.arange(1, s.size)
    log_defect = trace.alpha * np.log(s[1:]) - 2.0 * np.log1p(s[:-1]) - n * np.log(trace.lam)
    return np.abs(np.expm1(log_defect))


def dominating_sequence(alpha, lam, n_max=200):
    """s'_1 = (4λ)^{1/α}, s'_n = λ^{n/α} s'_{n-1}^{2/α}; index 0 holds 1."""
    log_lam = np.log(lam)

    def step(n, prev):
        return (n * log_lam + 2.0 * prev) / alpha

    s, capped_from = _iterate(alpha, lam, n_max, np.log(4.0 * lam) / alpha, step)
    return RecurrenceTrace(alpha, lam, s, diverged=bool(s[-1] > DIVERGED), capped_from=capped_from)


def t_sequence(alpha, lam, tau, n_max=200):
    """t_n = τ·s_n, the radii increments (τ/(τ + t_{n-1}))²·ℓt_n^α = λ^n ℓτ^α."""
    return recurrence(alpha, lam, n_max, tau=tau).t


def telescoping_terms(alpha, lam, tau, ell, n_terms=20):
    """
    The per-annulus terms (τ/(τ+t_n))²·ℓ t_{n+1}^α for n = 0 ... n_terms-1.

    Terms past the overflow cap are dropped, so fewer than n_terms may come back.

    Returns:
        tuple: (terms, λ^{n+1}ℓτ^α), which agree term by term.
    """
    trace = recurrence(alpha, lam, n_terms + 1, tau=tau)
    t = tau * trace.uncapped
    n = np.arange(t.size - 1)
    terms = (tau / (tau + t[:-1])) ** 2 * ell * t[1:] ** alpha
    expected = lam ** (n + 1) * ell * tau ** alpha
    return terms, expected


def _annulus_sup(field, envelope, lo, hi):
    r = field.levels
    inside = (r > lo) & (r < hi)
    k = float(np.max(np.abs(field.values[inside]))) if np.any(inside) else 0.0
    if envelope is not None:
        top = min(hi, field.levels[-1] + 1.0) if np.isinf(hi) else hi
        fine = np.linspace(lo, top, ENVELOPE_SAMPLES)
        k = max(k, float(np.max(envelope(fine))))
    return k


def decompose_for_point(mu, alpha, lam, zeta, envelope=None, ell=None, n_max=200):
    """
    Annulus decomposition of μ adapted to the point ζ.

    R_{-1} = 1 and R_i = 1 + t_i with t_n = τ s_n, τ = 1 - |ζ|; N is the least
    index with ℓ t_{N+1}^α >= 1.

    Args:
        mu (BeltramiField): Exterior coefficient on a polar grid.
        alpha (float): Decay order.
        lam (float): Ratio λ.
        zeta (complex): Point in the disk.
        envelope (callable, optional): Closed-form bound of |μ| by radius.
        ell (float, optional): Precomputed ‖μ‖_α.

    Returns:
        AnnulusDecomposition: radii, sup moduli and parameters.
    """
    if mu.geometry != "disk_exterior":
        raise DomainError("annulus decomposition needs an exterior polar field")
    if not abs(zeta) < 1.0:
        raise DomainError(f"ζ = {zeta} is not inside the unit disk")
    ell = beltrami_weighted_norm(mu, alpha).value if ell is None else ell
    tau = 1.0 - abs(zeta)
    if ell == 0.0:
        return AnnulusDecomposition(np.ones(1), np.zeros(1), zeta, 0.0, alpha, lam)
    t = t_sequence(alpha, lam, tau, n_max)
    reach = np.flatnonzero(ell * t[1:] ** alpha >= 1.0)
    if not reach.size:
        raise DomainError(f"ℓt_n^α stays below 1 for n <= {n_max}; λ = {lam} is too small for α = {alpha}")
    n_last = int(reach[0])
    radii = np.concatenate([[1.0], 1.0 + t[:n_last + 1]])
    edges = np.append(radii, np.inf)
    k = np.array([_annulus_sup(mu, envelope, edges[i], edges[i + 1]) for i in range(radii.size)])
    return AnnulusDecomposition(radii, k, zeta, ell, alpha, lam)


def schwarzian_sum_bound(d):
    """12 Σ k_i/(R_i - |ζ|)²."""
    return float(12.0 * np.sum(d.k / (d.radii - abs(d.zeta)) ** 2))


def geometric_bound(d):
    """12ℓτ^{α-2}/(1-λ), the telescoped form of the sum bound."""
    return float(12.0 * d.ell * d.tau ** (d.alpha - 2.0) / (1.0 - d.lam))


def zeta_grid(radii, angles):
    """ζ = r e^{2πik/angles}; the origin appears once."""
    points = []
    for r in radii:
        if r == 0.0:
            points.append(0j)
            continue
        points.extend(r * np.exp(1j * TWO_PI * np.arange(angles) / angles))
    return np.array(points, dtype=complex)


def polar_field(mu, n_radii=48, n_angles=256):
    """Exterior PlanarGrid resampled on radii refining geometrically toward 𝕊."""
    outer = mu.outer_radius
    ratio = 0.5 ** (1.0 / max(1, n_radii // 12))
    radii = np.sort(1.0 + (outer - 1.0) * ratio ** np.arange(n_radii))
    theta = TWO_PI * np.arange(n_angles) / n_angles
    return BeltramiField("disk_exterior", radii, mu.sample(radii[:, None] * np.exp(1j * theta)[None, :]),
                         ratio=ratio)


def _ell(mu, alpha, field, envelope):
    ell = max(planar_weighted_norm(mu, alpha).value, beltrami_weighted_norm(field, alpha).value)
    if envelope is not None:
        r = np.linspace(1.0 + 1e-9, mu.outer_radius, 4 * ENVELOPE_SAMPLES)
        ell = max(ell, float(np.max(np.maximum((r - 1.0) ** (-alpha), 1.0) * envelope(r))))
    return ell


def verify_alpha_bound(mu, alpha=1.0, lam=None, zetas=None, envelope=None, field=None, threads=4,
                       digest="", environment=None, radius=1.0, jet_samples=256, **solver):
    """
    End-to-end check of (1-|ζ|)^{2-α}|S(ζ)| < 12ℓ/(1-λ) with ℓ = ‖μ‖_α.

    The same pass checks the per-point sum bound |S(ζ)| <= 12 Σ k_i/(R_i-|ζ|)².

    Returns:
        list[VerificationReport]: the theorem-level report and the sum-bound report.
    """
    lam = default_lambda(alpha) if lam is None else lam
    if lam <= lambda_threshold(alpha):
        raise DomainError(f"λ = {lam} does not exceed the threshold {lambda_threshold(alpha):.5f}")
    zetas = zeta_grid([0.0, 0.3, 0.6, 0.9], 8) if zetas is None else np.asarray(zetas, dtype=complex)
    excluded = zetas[np.abs(zetas) > ZETA_LIMIT]
    zetas = zetas[np.abs(zetas) <= ZETA_LIMIT]
    if excluded.size:
        logger.warning(f"Excluded {excluded.size} points with |ζ| > {ZETA_LIMIT}")
    constant = 12.0 / (1.0 - lam)
    env = dict(environment or {})
    env.update({"alpha": alpha, "lambda": lam, "C": constant, "excluded": int(excluded.size)})

    if mu.is_zero:
        zero = [VerificationReport.bound("alpha-bound", digest, 0.0, 0.0, env, "μ ≡ 0"),
                VerificationReport.bound("schwarzian-sum-bound", digest, 0.0, 0.0, env, "μ ≡ 0")]
        return zero

    field = polar_field(mu) if field is None else field
    ell = _ell(mu, alpha, field, envelope)
    F = beltrami_service.solve(mu, "disk_conformal", **solver)
    jet = beltrami_service.conformal_jet(F, radius, jet_samples)

    def point(zeta):
        s = abs(complex(jet.schwarzian(np.array([zeta]))[0]))
        lhs = (1.0 - abs(zeta)) ** (2.0 - alpha) * s
        d = decompose_for_point(field, alpha, lam, zeta, envelope=envelope, ell=ell)
        return lhs, s, schwarzian_sum_bound(d)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(point, zetas))
    lhs = np.array([r[0] for r in rows])
    schwarz = np.array([r[1] for r in rows])
    sums = np.array([r[2] for r in rows])
    rhs = constant * ell
    ratio = lhs / rhs
    worst = int(np.argmax(ratio))
    logger.info(f"α-bound: max ratio {ratio[worst]:.4f} at ζ = {zetas[worst]:.3f}, ℓ = {ell:.4g}")
    slack = schwarz - sums
    lemma_worst = int(np.argmax(slack))
    return [
        VerificationReport.bound("alpha-bound", digest, lhs[worst], rhs, env,
                                 f"max ratio {ratio[worst]:.6g} over {zetas.size} points", strict=True),
        VerificationReport.bound("schwarzian-sum-bound", digest, schwarz[lemma_worst], sums[lemma_worst], env,
                                 f"tightest point ζ = {zetas[lemma_worst]:.3f}"),
    ]
