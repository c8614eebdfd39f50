import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.interpolate import PchipInterpolator

from errors import DomainError, NumericalDegeneracyError, SizeError
from models import CircleDiffeo, OperatorNormEstimate, PeriodicFunction
from services.norms_service import holder_seminorm, zygmund_seminorm
from services.spectral_service import antiderivative, evaluate_at
from utils import planar
from utils.fixtures import random_band

# Configure logging
logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# Trials whose input seminorm falls below this are skipped
UNDERFLOW = 1e-14

# Newton/bisection step cap for inversion
INVERT_STEPS = 60


def identity_diffeo(n: int) -> CircleDiffeo:
    return CircleDiffeo(np.zeros(n), np.ones(n), normalized=True)


def rotation(n: int, c: float) -> CircleDiffeo:
    """h(x) = x + c."""
    return CircleDiffeo(np.full(n, float(c)), np.ones(n))


def from_log_derivative(phi: PeriodicFunction) -> CircleDiffeo:
    """
    Build h with log h' = φ + c, where c makes h' average to 1 and h(0) = 0.

    Args:
        phi (PeriodicFunction): Real samples of the log-derivative.

    Returns:
        CircleDiffeo: The integrated lift.
    """
    if not phi.is_real:
        raise DomainError("log-derivative must be real")
    values = np.asarray(phi.values, dtype=float)
    c = -np.log(np.mean(np.exp(values)))
    deriv = np.exp(values + c)
    # spectral antiderivative of h' - 1, pinned so that h(0) = 0
    lift = np.asarray(antiderivative(PeriodicFunction(deriv - 1.0, is_real=True)).values)
    lift = lift - lift[0]
    logger.debug(f"Integrated log-derivative with constant {c:.3e}")
    return CircleDiffeo(lift, deriv)


def _interpolant(h):
    """Monotone cubic through the lift over three periods."""
    n = h.n_samples
    x = h.nodes
    knots = np.concatenate([x - TWO_PI, x, x + TWO_PI, [2.0 * TWO_PI]])
    values = np.concatenate([h.values - TWO_PI, h.values, h.values + TWO_PI, [h.values[0] + 2.0 * TWO_PI]])
    return PchipInterpolator(knots, values, extrapolate=False), n


def evaluate(h, x):
    """Values h(x) at arbitrary real points."""
    interp, _ = _interpolant(h)
    x = np.asarray(x, dtype=float)
    turns = np.floor(x / TWO_PI)
    return interp(x - TWO_PI * turns) + TWO_PI * turns


def evaluate_derivative(h, x):
    """h'(x) at arbitrary points by trigonometric interpolation of the samples."""
    return evaluate_at(PeriodicFunction(h.deriv, is_real=True), x)


def compose(h1: CircleDiffeo, h2: CircleDiffeo) -> CircleDiffeo:
    """
    h1 ∘ h2 on the grid of h2.

    Values of h1 between nodes come from the monotone cubic through its lift;
    the derivative follows the chain rule.
    """
    if h1.n_samples != h2.n_samples:
        raise SizeError("composed diffeomorphisms must share a grid")
    if h1.is_identity:
        return h2
    y = h2.values
    outer = evaluate(h1, y)
    deriv = evaluate_derivative(h1, y) * h2.deriv
    bad = np.flatnonzero(~(deriv > 0.0))
    if bad.size:
        raise NumericalDegeneracyError(f"composed derivative is not positive at node {bad[0]}", node=int(bad[0]))
    return CircleDiffeo(outer - h2.nodes, deriv)


def invert(h: CircleDiffeo) -> CircleDiffeo:
    """
    h^{-1} on the same grid by bracketed Newton steps on the monotone cubic.

    Returns:
        CircleDiffeo: lift of the inverse with derivative 1/h'(h^{-1}(x)).
    """
    interp, n = _interpolant(h)
    slope = interp.derivative()
    target = h.nodes
    knots = interp.x
    values = interp(knots)
    # bracket each target between consecutive knots of h
    idx = np.clip(np.searchsorted(values, target, side="right") - 1, 0, knots.size - 2)
    lo, hi = knots[idx], knots[idx + 1]
    f_lo, f_hi = values[idx], values[idx + 1]
    y = lo + (target - f_lo) / (f_hi - f_lo) * (hi - lo)
    for step in range(INVERT_STEPS):
        fy = interp(y) - target
        if np.max(np.abs(fy)) <= 4e-16 * TWO_PI:
            break
        lo = np.where(fy < 0, y, lo)
        hi = np.where(fy > 0, y, hi)
        newton = y - fy / slope(y)
        y = np.where((newton > lo) & (newton < hi), newton, 0.5 * (lo + hi))
    logger.debug(f"Inverted n={n} diffeo in {step + 1} steps")
    deriv = 1.0 / evaluate_derivative(h, y)
    return CircleDiffeo(y - target, deriv)


def normalize(h: CircleDiffeo) -> CircleDiffeo:
    """
    Post-compose with the circle Möbius map that sends h(0), h(π/2), h(3π/2) to 0, π/2, 3π/2.

    Already-normalized input is returned unchanged, so the operation is idempotent.
    """
    n = h.n_samples
    marks = (0, n // 4, 3 * n // 4)
    if all(h.lift[j] == 0.0 for j in marks):
        return h if h.normalized else CircleDiffeo(h.lift, h.deriv, normalized=True)
    w = np.exp(1j * h.values)
    matrix = planar.three_point_matrix(tuple(w[j] for j in marks), (1.0, 1j, -1j))
    image = planar.mobius(matrix, w)
    values = np.unwrap(np.angle(image))
    values -= TWO_PI * np.round(values[0] / TWO_PI)
    factor = np.real(w * planar.mobius_derivative(matrix, w) / image)
    lift = values - h.nodes
    for j in marks:
        lift[j] = 0.0
    return CircleDiffeo(lift, factor * h.deriv, normalized=True)


def distances(h1: CircleDiffeo, h2: CircleDiffeo) -> dict:
    """
    Uniform and Zygmund distances of h1 ∘ h2^{-1} from the identity.

    The two are reported side by side; no combined metric is formed.
    """
    g = compose(h1, invert(h2))
    return {
        "uniform": float(np.max(np.abs(g.lift))),
        "zygmund": zygmund_seminorm(PeriodicFunction(g.log_deriv, is_real=True)).value,
    }


def composition_operator(h: CircleDiffeo, f: PeriodicFunction) -> PeriodicFunction:
    """P_h f = f ∘ h sampled on the grid."""
    if f.n_samples != h.n_samples:
        raise SizeError("function and diffeomorphism grids differ")
    if h.is_identity:
        return f
    shift = h.lift[0] / (TWO_PI / h.n_samples)
    if np.all(h.lift == h.lift[0]) and shift == np.round(shift):
        # rotation by a whole number of grid steps
        return PeriodicFunction(np.roll(f.values, -int(shift)), is_real=f.is_real)
    return PeriodicFunction(evaluate_at(f, h.values), is_real=f.is_real)


def affine_translation(h: CircleDiffeo, f: PeriodicFunction) -> PeriodicFunction:
    """Q_h f = P_h f + log h'."""
    composed = composition_operator(h, f)
    return PeriodicFunction(composed.values + h.log_deriv, is_real=f.is_real)


def _seminorm(space, alpha):
    if space == "zygmund":
        return lambda f: zygmund_seminorm(f).value
    if space == "holder":
        if alpha is None:
            raise DomainError("holder space needs an exponent")
        return lambda f: holder_seminorm(f, alpha).value
    raise DomainError(f"unknown space {space!r}")


def c1_alpha_norm(h: CircleDiffeo, alpha: float) -> float:
    """‖h'‖_∞ + ‖h'‖_{C^α} from the derivative samples."""
    deriv = PeriodicFunction(h.deriv, is_real=True)
    return float(np.max(h.deriv)) + holder_seminorm(deriv, alpha).value


def estimate_operator_norm(h: CircleDiffeo, space: str = "zygmund", alpha: float = 0.5, trials: int = 64,
                           band: int | None = None, seed: int = 0, threads: int = 4,
                           extra_trials: tuple = ()) -> OperatorNormEstimate:
    """
    Empirical operator norm of P_h on a seminormed space.

    Trial functions are seeded random band-limited polynomials, generated in
    order before any work is dispatched; fixed extra trials may be appended.

    Args:
        h (CircleDiffeo): The diffeomorphism.
        space (str): "zygmund" or "holder".
        alpha (float): Hölder exponent, and the α of the reported C^{1+α} bound.
        trials (int): Number of random trials.
        band (int, optional): Highest trial mode; defaults to n/16.
        seed (int): Generator seed.
        threads (int): Worker cap.
        extra_trials (iterable): Additional PeriodicFunction trials.

    Returns:
        OperatorNormEstimate: estimate, bound and the measured ratio.
    """
    n = h.n_samples
    band = band or max(1, n // 16)
    seminorm = _seminorm(space, alpha if space == "holder" else None)
    rng = np.random.default_rng(seed)
    inputs = [PeriodicFunction(random_band(n, band, rng), is_real=True) for _ in range(trials)]
    inputs.extend(extra_trials)

    def ratio(f):
        base = seminorm(f)
        if base < UNDERFLOW:
            return None
        if h.is_rotation:
            # f∘h sampled on the grid translated by -c reproduces the samples of f
            return 1.0
        return seminorm(composition_operator(h, f)) / base

    with ThreadPoolExecutor(max_workers=threads) as pool:
        ratios = list(pool.map(ratio, inputs))
    used = [r for r in ratios if r is not None]
    skipped = len(ratios) - len(used)
    if skipped:
        logger.warning(f"Skipped {skipped} trials with vanishing seminorm")
    estimate = max(used, default=0.0)
    bound = c1_alpha_norm(h, alpha)
    logger.info(f"P_h on {space}: estimate {estimate:.4f}, bound {bound:.4f} over {len(used)} trials")
    return OperatorNormEstimate(float(estimate), float(bound), len(used), skipped, space)


def _pair_distance(n):
    x = TWO_PI * np.arange(n) / n
    d = np.abs(x[:, None] - x[None, :])
    return np.minimum(d, TWO_PI - d)


def endpoint_inequality_1(h, phi, alpha, upsample=8):
    """
    Worst ratio of |φ∘h(x) - φ∘h(y)| to ‖φ‖_{C^{1-α}}‖h'‖_∞^{1-α}|x-y|^{1-α} over grid pairs.

    Args:
        h (CircleDiffeo): The diffeomorphism.
        phi (callable): Closed-form 2π-periodic real function.
        alpha (float): Exponent in (0, 1).
        upsample (int): Refinement of the grid on which ‖φ‖_{C^{1-α}} is measured.

    Returns:
        tuple: (max ratio, (i, j) worst pair).
    """
    n = h.n_samples
    fine = PeriodicFunction.from_callable(phi, n * upsample)
    seminorm = holder_seminorm(fine, 1.0 - alpha).value
    composed = phi(h.values)
    lhs = np.abs(composed[:, None] - composed[None, :])
    d = _pair_distance(n)
    rhs = seminorm * np.max(h.deriv) ** (1.0 - alpha) * d ** (1.0 - alpha)
    return _worst(lhs, rhs)


def endpoint_inequality_2(h, dphi, alpha, upsample=8):
    """
    Worst ratio of |(φ∘h)'(x) - (φ∘h)'(y)| to ‖φ‖_{C^{1+α}}(‖h'‖_∞ + ‖h'‖_{C^α})^{1+α}|x-y|^α.

    dphi is the closed-form derivative φ'.
    """
    n = h.n_samples
    fine = PeriodicFunction.from_callable(dphi, n * upsample)
    phi_norm = holder_seminorm(fine, alpha).value + float(np.max(np.abs(fine.values)))
    composed = dphi(h.values) * h.deriv
    lhs = np.abs(composed[:, None] - composed[None, :])
    d = _pair_distance(n)
    rhs = phi_norm * c1_alpha_norm(h, alpha) ** (1.0 + alpha) * d ** alpha
    return _worst(lhs, rhs)


def _worst(lhs, rhs):
    off = ~np.eye(lhs.shape[0], dtype=bool)
    ratio = np.zeros(lhs.shape)
    ratio[off] = lhs[off] / rhs[off]
    i, j = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    return float(ratio[i, j]), (int(i), int(j))
