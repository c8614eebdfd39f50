import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from config import Settings
from errors import UsageError, ZqError
from models import FourierCoefficients, PeriodicFunction, VerificationReport
from services import (beltrami_service, bounds_service, diffeo_service, extension_service, spectral_service,
                      welding_service)
from services.norms_service import lipschitz_seminorm, zygmund_seminorm
from utils import fixtures
from utils.reports import inputs_digest

# Configure logging
logger = logging.getLogger(__name__)

# Closed-form value of the Zygmund seminorm of cos under the half-step convention
COSINE_ZYGMUND = 0.7246

# Cap on the measured extension constant sup|∂̄Φ|/‖f‖_{C^Z}
EXTENSION_CONSTANT_CAP = 1e3

# Imaginary part of Λ tolerated on the anti-diagonal; the reflected grid coefficient is only
# symmetric up to interpolation error
ANTIDIAGONAL_TOL = 5e-6

# Lipschitz growth floor of the lacunary series from 8 to 12 terms at n = 2^14, where the top
# mode has four samples per period
LIPSCHITZ_GROWTH = 1.35

# Welding identity residual on 𝕊 for the small angular bump
WELDING_TOL = 1e-3

# Per-halving growth floors of the blow-up scans. Both exceed 1, so a pass means a strictly
# increasing profile. Zygmund data grow like log(1/|y|), Hölder-1/2 data like 2^{1/2} per level.
ZYGMUND_LEVEL_GROWTH = 1.05
HOLDER_LEVEL_GROWTH = 1.2

ALPHA_GRID = (0.25, 0.5, 1.0, 1.5)


def _solver(settings):
    s = settings.section("solver")
    return {"tol": s["tol"], "max_iter": s["max_iter"], "mu_cap": s["mu_cap"]}


def _env(settings, **extra):
    env = settings.environment()
    env["ba_r"] = extension_service.VERTICAL
    env.update(extra)
    return env


def _beltrami(name, spacing, **overrides):
    spec = fixtures.fixture_spec(name, spacing=spacing, **overrides)
    return spec, fixtures.build_beltrami(spec)


def _interior_zero(spacing, radius):
    return fixtures.zero_coefficient(((0.45, 0.7),)).to_planar_grid(spacing, radius)


# -- spectral identities -------------------------------------------------------

def _random_functions(settings, count=32):
    n = settings.get("spectral", "n_samples")
    rng = np.random.default_rng(settings.seed)
    return [PeriodicFunction(fixtures.random_band(n, 16, rng), is_real=True) for _ in range(count)]


def _relative_worst(functions, defect):
    return max(float(np.max(np.abs(defect(f))) / np.max(np.abs(f.values))) for f in functions)


def check_hilbert_involution(settings):
    functions = _random_functions(settings)
    worst = _relative_worst(functions, lambda f: np.asarray(
        spectral_service.hilbert_transform(spectral_service.hilbert_transform(f)).values) - f.values)
    digest = inputs_digest("hilbert-involution", settings.get("spectral", "n_samples"), settings.seed)
    return [VerificationReport.two_sided("hilbert-involution", digest, worst, 0.0, 1e-11, _env(settings),
                                         "max|HHf - f| / max|f| over 32 band-limited functions")]


def check_szego_trace(settings):
    functions = _random_functions(settings)

    def defect(f):
        trace = spectral_service.idft(spectral_service.szego_interior(f), real=False).values
        half = 0.5 * (f.values + np.asarray(spectral_service.hilbert_transform(f).values))
        return np.asarray(trace) - half

    worst = _relative_worst(functions, defect)
    digest = inputs_digest("szego-trace", settings.get("spectral", "n_samples"), settings.seed)
    return [VerificationReport.two_sided("szego-trace", digest, worst, 0.0, 1e-11, _env(settings),
                                         "max|trace(Sf) - (f + Hf)/2| / max|f|")]


def check_szego_complement(settings):
    functions = _random_functions(settings)

    def defect(f):
        inner = spectral_service.szego_interior(f).coeffs
        outer = spectral_service.szego_exterior(f).coeffs
        return np.asarray(spectral_service.idft(FourierCoefficients(inner + outer), real=False).values) - f.values

    worst = _relative_worst(functions, defect)
    digest = inputs_digest("szego-complement", settings.get("spectral", "n_samples"), settings.seed)
    return [VerificationReport.two_sided("szego-complement", digest, worst, 0.0, 1e-11, _env(settings),
                                         "interior plus exterior projection reproduces f")]


def check_hilbert_quadrature(settings):
    functions = _random_functions(settings)
    worst = _relative_worst(functions, lambda f: np.asarray(spectral_service.pv_hilbert_quadrature(f).values) -
                            np.asarray(spectral_service.hilbert_transform(f).values))
    digest = inputs_digest("hilbert-pv-quadrature", settings.get("spectral", "n_samples"), settings.seed)
    return [VerificationReport.two_sided("hilbert-pv-quadrature", digest, worst, 0.0, 1e-10, _env(settings),
                                         "multiplier against the principal-value oracle")]


# -- seminorm calculus ---------------------------------------------------------

def check_cosine_zygmund(settings):
    f = fixtures.build_function(fixtures.fixture_spec("cosine", n_samples=4096))
    value = zygmund_seminorm(f).value
    return [VerificationReport.two_sided("zygmund-cosine", inputs_digest("zygmund-cosine", 4096), value,
                                         COSINE_ZYGMUND, 0.02 * COSINE_ZYGMUND, _env(settings),
                                         f"seminorm {value:.6f} at n = 4096")]


def check_zygmund_below_lipschitz(settings):
    n = settings.get("spectral", "n_samples")
    ratios = []
    for name in ("cosine", "weierstrass", "zygmund-series", "random-band"):
        f = fixtures.build_function(fixtures.fixture_spec(name, n_samples=n, seed=settings.seed))
        ratios.append(zygmund_seminorm(f).value / lipschitz_seminorm(f).value)
    worst = max(ratios)
    return [VerificationReport.bound("zygmund-below-lipschitz", inputs_digest("zygmund-below-lipschitz", n,
                                                                               settings.seed),
                                     worst, 1.0 + 1e-12, _env(settings), f"largest C^Z/C^L ratio {worst:.6f}")]


def check_zygmund_not_lipschitz(settings):
    n = 2 ** 14
    values = {}
    for terms in (8, 12):
        f = fixtures.build_function(fixtures.fixture_spec("zygmund-series", n_samples=n, terms=terms))
        values[terms] = (zygmund_seminorm(f).value, lipschitz_seminorm(f).value)
    zyg_ratio = values[12][0] / values[8][0]
    lip_ratio = values[12][1] / values[8][1]
    digest = inputs_digest("zygmund-not-lipschitz", n)
    detail = f"C^Z ratio {zyg_ratio:.4f}, Lipschitz ratio {lip_ratio:.4f}, terms 8 -> 12"
    return [
        VerificationReport.bound("zygmund-not-lipschitz:zygmund-stable", digest, zyg_ratio, 2.0,
                                 _env(settings), detail),
        VerificationReport.bound("zygmund-not-lipschitz:lipschitz-grows", digest, LIPSCHITZ_GROWTH, lip_ratio,
                                 _env(settings), detail),
    ]


# -- composition endpoints -----------------------------------------------------

def _endpoint_diffeo(settings):
    return fixtures.sine_diffeo(settings.get("spectral", "n_samples"), 0.5, 1)


def _phi(x):
    return np.cos(x) + 0.3 * np.sin(3.0 * x)


def _dphi(x):
    return -np.sin(x) + 0.9 * np.cos(3.0 * x)


def check_endpoint_chains(settings):
    h = _endpoint_diffeo(settings)
    reports = []
    for alpha in (0.3, 0.5):
        digest = inputs_digest("endpoint", h.n_samples, alpha)
        env = _env(settings, alpha=alpha)
        first, pair = diffeo_service.endpoint_inequality_1(h, _phi, alpha)
        reports.append(VerificationReport.bound(f"endpoint-chain-1:alpha={alpha}", digest, first, 1.0, env,
                                                f"worst pair {pair}"))
        second, pair = diffeo_service.endpoint_inequality_2(h, _dphi, alpha)
        reports.append(VerificationReport.bound(f"endpoint-chain-2:alpha={alpha}", digest, second, 1.0, env,
                                                f"worst pair {pair}"))
    return reports


def check_operator_norm(settings):
    h = _endpoint_diffeo(settings)
    d = settings.section("diffeo")
    reports = []
    for alpha in (0.3, 0.5):
        est = diffeo_service.estimate_operator_norm(h, "zygmund", alpha, trials=d["trials"],
                                                    band=d["trial_band"], seed=settings.seed,
                                                    threads=settings.threads)
        digest = inputs_digest("operator-norm", h.n_samples, alpha, d["trials"], d["trial_band"], settings.seed)
        reports.append(VerificationReport.bound(f"operator-norm:alpha={alpha}", digest, est.estimate,
                                                4.0 * est.bound, _env(settings, alpha=alpha, **est.to_dict()),
                                                f"discretization factor {est.k_disc:.4f}"))
    return reports


# -- Beurling–Ahlfors diagnostics ----------------------------------------------

def check_ba_identity(settings):
    e = settings.section("extension")
    h = diffeo_service.identity_diffeo(e["n_samples"])
    mu = extension_service.dilatation_field(extension_service.ba_extend(h, levels=e["levels"], y_max=e["y_max"]))
    value = float(np.max(np.abs(mu.values)))
    return [VerificationReport.two_sided("ba-identity", inputs_digest("ba-identity", e), value, 0.0, 1e-10,
                                         _env(settings), "identity lift extends with vanishing dilatation")]


def check_ba_smooth_decay(settings):
    e = settings.section("extension")
    h = fixtures.sine_diffeo(e["n_samples"], 0.5, 1)
    field = extension_service.dilatation_field(extension_service.ba_extend(h, levels=4, y_max=e["y_max"]))
    profile = [w for _, w in extension_service.decay_profile(field, 1.0)]
    spread = max(profile) / min(profile)
    return [VerificationReport.bound("ba-smooth-decay", inputs_digest("ba-smooth-decay", e), spread, 10.0,
                                     _env(settings), f"order-1 profile {profile}")]


def _ratios(steps):
    return ", ".join(f"{r:.3f}" for r in steps)


def check_ba_zygmund_growth(settings):
    n = 2 ** 13
    spec = fixtures.fixture_spec("diffeo-from-logderiv", n_samples=n)
    h = fixtures.build_diffeo(spec)
    depths = extension_service.dyadic_depths(5, 0.125)
    field = extension_service.dilatation_field(extension_service.ba_extend(h, depths=depths))
    steps = extension_service.level_growth(extension_service.decay_profile(field, 1.0))
    return [VerificationReport.bound("ba-zygmund-growth", spec.digest(), ZYGMUND_LEVEL_GROWTH, min(steps),
                                     _env(settings), "order-1 growth per level " + _ratios(steps))]


def check_ba_holder_growth(settings):
    # the top mode 2^16 stays far above 1/|y| at the deepest level
    spec = fixtures.fixture_spec("weierstrass", n_samples=2 ** 18, terms=16)
    f = fixtures.build_function(spec)
    depths = extension_service.dyadic_depths(5, 0.125)
    field = extension_service.dbar_field(extension_service.ba_extend(f, depths=depths))
    steps = extension_service.level_growth(extension_service.decay_profile(field, 0.0))
    return [VerificationReport.bound("ba-holder-growth", spec.digest(), HOLDER_LEVEL_GROWTH, min(steps),
                                     _env(settings), "sup|∂̄Φ| growth per level " + _ratios(steps))]


def check_ba_dbar_constant(settings):
    e = settings.section("extension")
    spec = fixtures.fixture_spec("zygmund-series", n_samples=e["n_samples"])
    measured = extension_service.dbar_constant(fixtures.build_function(spec), e["levels"], e["y_max"])
    return [VerificationReport.bound("ba-dbar-constant", spec.digest(), measured["k_ba"], EXTENSION_CONSTANT_CAP,
                                     _env(settings, **measured), f"measured constant {measured['k_ba']:.4f}")]


# -- Beltrami solver oracle ----------------------------------------------------

def _radial_error(spacing, solver):
    spec, fx = _beltrami("radial-stretch", spacing)
    mu = fx.to_planar_grid(spacing)
    F = beltrami_service.solve(mu, "disk_conformal", **solver)
    exact = fx.exact_map(mu.nodes)
    return spec, float(np.max(np.abs(F.values - exact)) / np.max(np.abs(exact)))


def check_radial_oracle(settings):
    spec, error = _radial_error(1.0 / 64.0, _solver(settings))
    return [VerificationReport.two_sided("beltrami-radial-oracle", spec.digest(), error, 0.0, 1e-2,
                                         _env(settings), f"relative error {error:.3e} at spacing 1/64")]


def check_radial_refinement(settings):
    solver = _solver(settings)
    spec, coarse = _radial_error(1.0 / 64.0, solver)
    _, fine = _radial_error(1.0 / 128.0, solver)
    reduction = coarse / fine if fine > 0 else float("inf")
    return [VerificationReport.bound("beltrami-refinement", spec.digest(), 1.5, reduction, _env(settings),
                                     f"error {coarse:.3e} -> {fine:.3e}")]


# -- welding -------------------------------------------------------------------

def _bump_grid(settings, spacing=None):
    spacing = spacing or settings.get("solver", "spacing")
    spec, fx = _beltrami("angular-bump", spacing)
    return spec, fx, fx.to_planar_grid(spacing)


def check_welding_identity(settings):
    spec, _, mu = _bump_grid(settings)
    samples = settings.get("solver", "boundary_samples")
    triple = welding_service.welding_check(mu, samples, **_solver(settings))
    return [VerificationReport.two_sided("welding-log-identity", spec.digest(), triple.residual, 0.0, WELDING_TOL,
                                         _env(settings, **triple.seminorms),
                                         f"residual {triple.residual:.3e} on {samples} samples")]


def check_welding_refinement(settings):
    samples = settings.get("solver", "boundary_samples")
    residuals = []
    for spacing in (1.0 / 32.0, 1.0 / 64.0):
        spec, _, mu = _bump_grid(settings, spacing)
        residuals.append(welding_service.welding_check(mu, samples, **_solver(settings)).residual)
    reduction = residuals[0] / residuals[1] if residuals[1] > 0 else float("inf")
    return [VerificationReport.bound("welding-refinement", spec.digest(), 2.0, reduction, _env(settings),
                                     f"residual {residuals[0]:.3e} -> {residuals[1]:.3e}")]


def check_boundary_consistency(settings):
    spec, _, mu = _bump_grid(settings)
    gap = welding_service.boundary_cross_check(mu, settings.get("solver", "boundary_samples"), **_solver(settings))
    return [VerificationReport.two_sided("welding-boundary-consistency", spec.digest(), gap, 0.0, 1e-4,
                                         _env(settings), f"boundary_homeo against (F(1)·G)⁻¹∘F_μ: {gap:.3e}")]


# -- Λ -------------------------------------------------------------------------

def check_lambda_jet(settings):
    spec, _, mu = _bump_grid(settings)
    s = settings.section("solver")
    inner = _interior_zero(mu.spacing, mu.outer_radius)
    lam = welding_service.lambda_map(inner, mu, s["boundary_samples"], **_solver(settings))
    F = beltrami_service.solve(mu, "disk_conformal", **_solver(settings))
    jet = beltrami_service.conformal_jet(F, s["extraction_radius"], s["jet_samples"])
    side = welding_service.lifted_log_derivative(jet, s["boundary_samples"])
    defect = float(np.max(np.abs(np.asarray(lam.values) - np.asarray(side.values))))
    return [VerificationReport.two_sided("lambda-jet-consistency", spec.digest(), defect, 0.0, 1e-3,
                                         _env(settings), "Λ(0, μ) against log(zF'/F) from the jet")]


def check_translation_zero(settings):
    spec, _, mu = _bump_grid(settings)
    inner = _interior_zero(mu.spacing, mu.outer_radius)
    report = welding_service.translation_relation_check(inner, mu, inner, settings.get("solver", "boundary_samples"),
                                                        spec.digest(), _env(settings), tolerance=0.0,
                                                        **_solver(settings))
    return [dataclasses.replace(report, check="translation-relation-zero")]


def check_translation(settings):
    spec, _, mu = _bump_grid(settings)
    nu = fixtures.build_beltrami(fixtures.fixture_spec("angular-bump-interior", spacing=mu.spacing))
    nu_grid = nu.to_planar_grid(mu.spacing, mu.outer_radius)
    inner = _interior_zero(mu.spacing, mu.outer_radius)
    report = welding_service.translation_relation_check(inner, mu, nu_grid, settings.get("solver", "boundary_samples"),
                                                        spec.digest(), _env(settings), **_solver(settings))
    return [report]


def check_antidiagonal(settings):
    spec, _, mu = _bump_grid(settings)
    lam = welding_service.lambda_map(beltrami_service.reflect(mu), mu, settings.get("solver", "boundary_samples"),
                                     **_solver(settings))
    imag = float(np.max(np.abs(np.imag(lam.values))))
    return [VerificationReport.two_sided("lambda-antidiagonal-real", spec.digest(), imag, 0.0,
                                         ANTIDIAGONAL_TOL, _env(settings),
                                         "imaginary part of Λ(μ*, μ)")]


# -- recurrence ----------------------------------------------------------------

def _lambda_for(alpha):
    return min(bounds_service.certified_threshold(alpha) + 0.05, 0.99)


def check_recurrence_identity(settings):
    n_max = settings.get("bounds", "n_max")
    worst = 0.0
    for alpha in ALPHA_GRID:
        trace = bounds_service.recurrence(alpha, _lambda_for(alpha), n_max)
        worst = max(worst, float(np.max(bounds_service.recurrence_residuals(trace), initial=0.0)))
    return [VerificationReport.two_sided("recurrence-identity", inputs_digest("recurrence-identity", n_max),
                                         worst, 0.0, 1e-12, _env(settings), "per-step relative defect")]


def check_recurrence_divergence(settings):
    n_max = settings.get("bounds", "n_max")
    reports = []
    for alpha in ALPHA_GRID:
        lam = _lambda_for(alpha)
        trace = bounds_service.recurrence(alpha, lam, n_max)
        reports.append(VerificationReport.bound(
            f"recurrence-divergence:alpha={alpha}", inputs_digest("recurrence-divergence", alpha, lam, n_max),
            bounds_service.DIVERGED, trace.s[-1], _env(settings, alpha=alpha, lam=lam),
            f"s_{n_max} = {trace.s[-1]:.3e}", strict=True))
    return reports


def check_recurrence_first_term(settings):
    worst = 0.0
    for alpha in ALPHA_GRID:
        lam = _lambda_for(alpha)
        s1 = bounds_service.recurrence(alpha, lam, 1).s[1]
        expected = (4.0 * lam) ** (1.0 / alpha)
        worst = max(worst, abs(s1 - expected) / expected)
    return [VerificationReport.two_sided("recurrence-first-term", inputs_digest("recurrence-first-term"), worst,
                                         0.0, 1e-12, _env(settings), "s_1 against (4λ)^{1/α}")]


def check_telescoping(settings):
    worst = 0.0
    for alpha in ALPHA_GRID:
        terms, expected = bounds_service.telescoping_terms(alpha, _lambda_for(alpha), 0.5, 0.3)
        worst = max(worst, float(np.max(np.abs(terms / expected - 1.0))))
    return [VerificationReport.two_sided("telescoping-terms", inputs_digest("telescoping-terms"), worst, 0.0,
                                         1e-12, _env(settings), "annulus terms against λ^{n+1}ℓτ^α")]


# -- α-bound and equivalence ---------------------------------------------------

BOUND_FIXTURES = ("angular-bump", "annulus-indicator")


def _zetas(settings):
    b = settings.section("bounds")
    return bounds_service.zeta_grid(b["zeta_radii"], b["zeta_angles"])


def check_alpha_bound(settings):
    b = settings.section("bounds")
    s = settings.section("solver")
    reports = []
    for name in BOUND_FIXTURES:
        spec, fx = _beltrami(name, s["spacing"])
        out = bounds_service.verify_alpha_bound(
            fx.to_planar_grid(s["spacing"]), b["alpha"], b["lambda"], _zetas(settings), envelope=fx.envelope,
            field=fx.to_beltrami_field(), threads=settings.threads, digest=spec.digest(),
            environment=settings.environment(), radius=s["extraction_radius"], jet_samples=s["jet_samples"],
            **_solver(settings))
        reports.extend(dataclasses.replace(r, check=f"{r.check}:{name}") for r in out)
    return reports


def check_equivalence(settings):
    s = settings.section("solver")
    reports = []
    for name in BOUND_FIXTURES:
        spec, fx = _beltrami(name, s["spacing"])
        values = welding_service.equivalence_diagnostics(fx.to_planar_grid(s["spacing"]), s["extraction_radius"],
                                                         s["jet_samples"], settings.ladder(), **_solver(settings))
        finite = sum(bool(np.isfinite(v)) for v in values.values())
        reports.append(VerificationReport.two_sided(f"equivalence-finite:{name}", spec.digest(), finite,
                                                    len(values), 0.0, _env(settings, **values),
                                                    ", ".join(f"{k}={v:.4g}" for k, v in values.items())))
    return reports


# Registered checks: suite, reference and summary shown by explain
CHECKS = {
    "hilbert-involution": {
        "suite": "spectral-identities", "run": check_hilbert_involution,
        "reference": "§4, Hilbert transform on the circle",
        "summary": "The sign multiplier applied twice returns the input.",
    },
    "szego-trace": {
        "suite": "spectral-identities", "run": check_szego_trace,
        "reference": "§4, Szegő projection and its trace",
        "summary": "The interior projection has boundary trace (f + Hf)/2.",
    },
    "szego-complement": {
        "suite": "spectral-identities", "run": check_szego_complement,
        "reference": "§4, decomposition into interior and exterior parts",
        "summary": "Interior and exterior projections sum to the identity.",
    },
    "hilbert-pv-quadrature": {
        "suite": "spectral-identities", "run": check_hilbert_quadrature,
        "reference": "§4, singular integral form of the Hilbert transform",
        "summary": "The multiplier agrees with an alternating-node principal-value quadrature.",
    },
    "zygmund-cosine": {
        "suite": "seminorm-calculus", "run": check_cosine_zygmund,
        "reference": "§2, Zygmund seminorm",
        "summary": "The Zygmund seminorm of cos matches its closed-form value 0.7246 within 2%.",
    },
    "zygmund-below-lipschitz": {
        "suite": "seminorm-calculus", "run": check_zygmund_below_lipschitz,
        "reference": "§2, C^Z is dominated by the Lipschitz seminorm",
        "summary": "On every circle fixture the Zygmund seminorm never exceeds the Lipschitz one.",
    },
    "zygmund-not-lipschitz": {
        "suite": "seminorm-calculus", "run": check_zygmund_not_lipschitz,
        "reference": "§2, Zygmund functions that are not Lipschitz",
        "summary": "Adding lacunary terms keeps C^Z within 2x while the Lipschitz seminorm grows by at least 1.35x.",
    },
    "endpoint-chains": {
        "suite": "composition-endpoints", "run": check_endpoint_chains,
        "reference": "§3, composition operator lemma, both endpoint chains",
        "summary": "Both displayed inequality chains hold at every grid pair for h(x) = x + 0.5 sin x.",
    },
    "operator-norm": {
        "suite": "composition-endpoints", "run": check_operator_norm,
        "reference": "§3, boundedness of P_h on the Zygmund class",
        "summary": "The empirical norm of P_h stays within 4x of the C^{1+α} bound.",
    },
    "ba-identity": {
        "suite": "ba-diagnostics", "run": check_ba_identity,
        "reference": "§1, Beurling–Ahlfors extension applied to the periodic lift",
        "summary": "The identity extends with dilatation below 1e-10.",
    },
    "ba-smooth-decay": {
        "suite": "ba-diagnostics", "run": check_ba_smooth_decay,
        "reference": "§1, Theorem junhu, decay of the extension dilatation, forward direction",
        "summary": "For a smooth diffeomorphism |μ|/|y| stays within a factor 10 over 4 dyadic levels.",
    },
    "ba-zygmund-growth": {
        "suite": "ba-diagnostics", "run": check_ba_zygmund_growth,
        "reference": "§1, Theorem junhu, decay of the extension dilatation, converse direction",
        "summary": "When log h' is only Zygmund, |μ|/|y| grows by at least 1.05 at every depth halving.",
    },
    "ba-holder-growth": {
        "suite": "ba-diagnostics", "run": check_ba_holder_growth,
        "reference": "§1, Prop BACZ, blow-up of ∂̄Φ for Hölder data",
        "summary": "For the Weierstrass function of order 1/2, sup|∂̄Φ| grows by at least 1.2 per halving.",
    },
    "ba-dbar-constant": {
        "suite": "ba-diagnostics", "run": check_ba_dbar_constant,
        "reference": "§1, Prop BACZ, sup |∂̄Φ| < ∞ for Zygmund data",
        "summary": "sup|∂̄Φ| over the dyadic levels is finite and its ratio to ‖f‖_{C^Z} is reported.",
    },
    "beltrami-radial-oracle": {
        "suite": "beltrami-oracle", "run": check_radial_oracle, "slow": True,
        "reference": "§1, normalized solutions F_μ and H(μ)",
        "summary": "The radial stretch solution is recovered to 1e-2 relative error at spacing 1/64.",
    },
    "beltrami-refinement": {
        "suite": "beltrami-oracle", "run": check_radial_refinement, "slow": True,
        "reference": "§1, normalized solutions F_μ and H(μ)",
        "summary": "Going from spacing 1/64 to 1/128 reduces the radial stretch error by at least 1.5x.",
    },
    "welding-log-identity": {
        "suite": "welding", "run": check_welding_identity, "slow": True,
        "reference": "§3, identity (log): log h' = log f' - log g'∘h",
        "summary": "The welding identity holds on 𝕊 to 1e-3 for the angular bump fixture with ‖μ‖_∞ = 0.1.",
    },
    "welding-refinement": {
        "suite": "welding", "run": check_welding_refinement, "slow": True,
        "reference": "§3, identity (log)",
        "summary": "The welding residual drops by at least 2x from spacing 1/32 to 1/64.",
    },
    "welding-boundary-consistency": {
        "suite": "welding", "run": check_boundary_consistency, "slow": True,
        "reference": "§3, Teichmüller projection",
        "summary": "boundary_homeo and h rebuilt from the welding factorization agree to 1e-4.",
    },
    "lambda-jet-consistency": {
        "suite": "lambda", "run": check_lambda_jet, "slow": True,
        "reference": "§4, identity (pre-Schwarz)",
        "summary": "Λ(0, μ) equals log(zF'/F) on 𝕊 computed from the Taylor jet of F_μ.",
    },
    "translation-relation": {
        "suite": "lambda", "run": check_translation, "slow": True,
        "reference": "§4, translation relation Λ∘r_ν = Q_h∘Λ",
        "summary": "The translation relation holds to 5e-3 for an interior angular bump ν.",
    },
    "translation-relation-zero": {
        "suite": "lambda", "run": check_translation_zero, "slow": True,
        "reference": "§4, translation relation Λ∘r_ν = Q_h∘Λ",
        "summary": "With ν = 0 the translation relation is exact.",
    },
    "lambda-antidiagonal-real": {
        "suite": "lambda", "run": check_antidiagonal, "slow": True,
        "reference": "§5, Λ on the anti-diagonal",
        "summary": "Λ(μ*, μ) is real up to the interpolation error of the reflected coefficient (5e-6).",
    },
    "recurrence-identity": {
        "suite": "recurrence", "run": check_recurrence_identity,
        "reference": "§7, the recurrence for s_n",
        "summary": "Every uncapped step satisfies (1/(1+s_{n-1}))² s_n^α = λ^n to 1e-12.",
    },
    "recurrence-divergence": {
        "suite": "recurrence", "run": check_recurrence_divergence,
        "reference": "§7, divergence of s_n",
        "summary": "s_200 exceeds 1e6 for λ 0.05 above the certified threshold, α in {0.25, 0.5, 1, 1.5}.",
    },
    "recurrence-first-term": {
        "suite": "recurrence", "run": check_recurrence_first_term,
        "reference": "§7, the recurrence for s_n",
        "summary": "s_1 = (4λ)^{1/α}.",
    },
    "telescoping-terms": {
        "suite": "recurrence", "run": check_telescoping,
        "reference": "§7, telescoping of the annulus sum",
        "summary": "Each annulus term equals λ^{n+1}ℓτ^α to 1e-12.",
    },
    "alpha-bound": {
        "suite": "alpha-bound", "run": check_alpha_bound, "slow": True,
        "reference": "§7, main estimate (1-|ζ|)^{2-α}|S(ζ)| < 12‖μ‖_α/(1-λ), and the annulus lemma",
        "summary": "The Schwarzian bound holds strictly at every tested ζ for two compactly supported fixtures.",
    },
    "equivalence-finite": {
        "suite": "equivalence", "run": check_equivalence, "slow": True,
        "reference": "§1, equivalence of decay and boundary regularity",
        "summary": "The five quantities of the equivalence are finite and logged; constants are not compared.",
    },
}

SUITES = {}
for _check_id, _entry in CHECKS.items():
    SUITES.setdefault(_entry["suite"], []).append(_check_id)
SUITES["all"] = list(CHECKS)


def _run_check(check_id, settings):
    logger.info(f"Running check {check_id}")
    try:
        reports = CHECKS[check_id]["run"](settings)
    except ZqError as e:
        logger.error(f"Check {check_id} failed: {e}")
        return [VerificationReport.failure(check_id, "", e)]
    except (ArithmeticError, ValueError, RuntimeError) as e:
        logger.error(f"Check {check_id} raised {type(e).__name__}: {e}")
        return [VerificationReport.failure(check_id, "", e)]
    for report in reports:
        status = "passed" if report.passed else "FAILED"
        logger.info(f"{report.check}: {status} (lhs {report.lhs:.4g}, rhs {report.rhs:.4g})")
    return reports


def run_suite(name: str, settings: Settings) -> list[VerificationReport]:
    """
    Run every check of a registered suite.

    Checks run on a thread pool capped at settings.threads; a check that
    raises becomes a failed report and the remaining checks still run.

    Args:
        name (str): Suite name, or "all".
        settings (Settings): Resolved configuration.

    Returns:
        list[VerificationReport]: Reports ordered by check id.
    """
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    check_ids = SUITES[name]
    logger.info(f"Suite {name}: {len(check_ids)} checks on {settings.threads} threads")
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        batches = list(pool.map(lambda c: _run_check(c, settings), check_ids))
    reports = sorted((r for batch in batches for r in batch), key=lambda r: r.check)
    failed = sum(not r.passed for r in reports)
    logger.info(f"Suite {name}: {len(reports) - failed}/{len(reports)} reports passed")
    return reports


def list_fixtures():
    return fixtures.catalog()


def explain(check_id: str) -> str:
    """Text describing a check and the section it exercises."""
    entry = CHECKS.get(check_id)
    if entry is None:
        raise UsageError(f"unknown check {check_id!r}")
    return (f"{check_id} (suite {entry['suite']})\n"
            f"  {entry['summary']}\n"
            f"  Reference: {entry['reference']}")
