import argparse
import logging
import os
from typing import Callable

import numpy as np

from config import Settings
from errors import UsageError, ZqError
from models import CircleDiffeo, PeriodicFunction, PlanarGrid, VerificationReport
from services import (beltrami_service, bounds_service, diffeo_service, extension_service, norms_service,
                      spectral_service, verification_service, welding_service)
from utils import fixtures, reports

# Setup logging
logger = logging.getLogger(__name__)

NORMALIZATIONS = {"disk": "disk_conformal", "three-point": "three_point"}


def _solver(settings: Settings) -> dict:
    s = settings.section("solver")
    return {"tol": s["tol"], "max_iter": s["max_iter"], "mu_cap": s["mu_cap"]}


def _function(path: str, settings: Settings) -> PeriodicFunction:
    payload = reports.load_json(path)
    return fixtures.function_from_payload(payload, settings.get("spectral", "n_samples"), settings.seed)


def _diffeo(path: str, settings: Settings) -> CircleDiffeo:
    payload = reports.load_json(path)
    if "lift" in payload:
        return reports.diffeo_from_payload(payload)
    n = settings.get("spectral", "n_samples")
    spec = fixtures.fixture_spec(payload.get("kind", ""), n_samples=int(payload.get("n", n)), seed=settings.seed,
                                 **{k: v for k, v in payload.items() if k not in ("kind", "n")})
    return fixtures.build_diffeo(spec)


def _mu(path: str, settings: Settings,
        spacing: float | None = None) -> tuple[PlanarGrid, fixtures.BeltramiFixture | None]:
    spacing = spacing or settings.get("solver", "spacing")
    return fixtures.beltrami_from_payload(reports.load_json(path), spacing)


def _run(name: str, action: Callable[[], int]) -> int:
    """Run one verb body, turning toolkit errors into exit codes."""
    try:
        return action()
    except ZqError as e:
        logger.error(f"{name}: {e}")
        return e.exit_code


def norms_command(args: argparse.Namespace, settings: Settings) -> int:
    """Compute a seminorm or holomorphic norm of one circle function."""

    def action():
        f = _function(args.input, settings)
        if args.kind == "zygmund":
            value = norms_service.zygmund_seminorm(f)
        elif args.kind == "holder":
            value = norms_service.holder_seminorm(f, args.alpha)
        elif args.kind == "lipschitz":
            value = norms_service.lipschitz_seminorm(f)
        elif args.kind == "besov":
            value = norms_service.besov_seminorm(f, args.s)
        elif args.kind == "bz":
            value = norms_service.bz_norm(spectral_service.szego_interior(f), **settings.ladder())
        elif args.kind == "bz-exterior":
            value = norms_service.bz_norm_exterior(spectral_service.szego_exterior(f), **settings.ladder())
        else:
            value = norms_service.az_norm(spectral_service.szego_interior(f), **settings.ladder())
        reports.write_json(args.out, value.to_dict())
        return 0

    return _run("norms", action)


def spectral_command(args: argparse.Namespace, settings: Settings) -> int:
    """Apply a spectral operator to a circle function."""

    def action():
        f = _function(args.input, settings)
        if args.operator == "hilbert":
            out = spectral_service.hilbert_transform(f)
        elif args.operator == "hilbert-pv":
            out = spectral_service.pv_hilbert_quadrature(f)
        elif args.operator == "szego-interior":
            out = spectral_service.idft(spectral_service.szego_interior(f), real=False)
        elif args.operator == "szego-exterior":
            out = spectral_service.idft(spectral_service.szego_exterior(f), real=False)
        else:
            c = spectral_service.dft(f)
            reports.write_json(args.out, {"n": c.n_samples, "modes": c.modes.tolist(),
                                          "coeffs_re": c.coeffs.real.tolist(), "coeffs_im": c.coeffs.imag.tolist()})
            return 0
        reports.write_json(args.out, reports.function_payload(out))
        return 0

    return _run("spectral", action)


def diffeo_command(args: argparse.Namespace, settings: Settings) -> int:
    """Build, compose, invert, normalize or measure circle diffeomorphisms."""

    def action():
        if args.action == "make":
            h = diffeo_service.from_log_derivative(_function(args.logderiv, settings))
        elif args.action == "compose":
            h = diffeo_service.compose(_diffeo(args.first, settings), _diffeo(args.second, settings))
        elif args.action == "invert":
            h = diffeo_service.invert(_diffeo(args.first, settings))
        elif args.action == "normalize":
            h = diffeo_service.normalize(_diffeo(args.first, settings))
        elif args.action == "distance":
            reports.write_json(args.out, diffeo_service.distances(_diffeo(args.first, settings),
                                                                  _diffeo(args.second, settings)))
            return 0
        else:
            d = settings.section("diffeo")
            estimate = diffeo_service.estimate_operator_norm(
                _diffeo(args.first, settings), args.space, args.alpha, trials=d["trials"], band=d["trial_band"],
                seed=settings.seed, threads=settings.threads)
            reports.write_json(args.out, estimate.to_dict())
            return 0
        reports.write_json(args.out, reports.diffeo_payload(h))
        return 0

    return _run("diffeo", action)


def extend_command(args: argparse.Namespace, settings: Settings) -> int:
    """Extend boundary data to the lower half-plane, or profile a stored field."""

    def action():
        if args.action == "diagnose":
            if not args.field:
                raise UsageError("extend diagnose needs a field file")
            field = reports.field_from_payload(reports.load_json(args.field))
            profile = extension_service.decay_profile(field, args.order)
            reports.write_csv(args.out, ("depth", "max"), profile)
            return 0
        if not args.input:
            raise UsageError("extend needs --in")
        e = settings.section("extension")
        # a payload with a lift is a diffeomorphism, anything else a circle function
        payload = reports.load_json(args.input)
        source = reports.diffeo_from_payload(payload) if "lift" in payload else _function(args.input, settings)
        phi = extension_service.ba_extend(source, levels=args.depths or e["levels"], y_max=e["y_max"])
        kind = args.field_kind or ("dilatation" if "lift" in payload else "dbar")
        if kind == "dilatation":
            phi = extension_service.dilatation_field(phi)
        elif kind == "dbar":
            phi = extension_service.dbar_field(phi)
        reports.write_json(args.out, reports.field_payload(phi))
        return 0

    return _run("extend", action)


def solve_command(args: argparse.Namespace, settings: Settings) -> int:
    """Solve the Beltrami equation for one coefficient and summarize the solution."""

    def action():
        mu, fx = _mu(args.mu, settings, args.spacing)
        F = beltrami_service.solve(mu, NORMALIZATIONS[args.normalize], **_solver(settings))
        summary = {
            "normalization": F.normalization,
            "grid": {"spacing": mu.spacing, "half": mu.half, "support": [list(s) for s in mu.support]},
            "steps": F.steps,
            "residual": F.residual,
            "contraction": F.contraction,
            "scale": [F.scale.real, F.scale.imag],
            "shift": [F.shift.real, F.shift.imag],
            "min_jacobian": float(np.min(F.jacobian())),
        }
        # closed-form fixtures also get their relative error
        if fx is not None and fx.exact_map is not None and args.normalize == "disk":
            exact = fx.exact_map(mu.nodes)
            summary["relative_error"] = float(np.max(np.abs(F.values - exact)) / np.max(np.abs(exact)))
        reports.write_json(args.out, summary)
        return 0

    return _run("solve", action)


def weld_command(args: argparse.Namespace, settings: Settings) -> int:
    """Check the welding identity for one exterior coefficient."""

    def action():
        mu, _ = _mu(args.mu, settings)
        samples = settings.get("solver", "boundary_samples")
        triple = welding_service.welding_check(mu, samples, args.tolerance, **_solver(settings))
        env = settings.environment()
        env.update(triple.seminorms)
        report = VerificationReport.two_sided("welding-log-identity", mu.digest(), triple.residual, 0.0,
                                              triple.tolerance, env, f"{samples} boundary samples")
        # --report wins over --out
        reports.write_json(args.report or args.out, report.to_dict())
        return 0 if report.passed else 1

    return _run("weld", action)


def lambda_command(args: argparse.Namespace, settings: Settings) -> int:
    """Evaluate Λ(μ1, μ2) on the unit circle."""

    def action():
        mu1, _ = _mu(args.mu1, settings)
        mu2, _ = _mu(args.mu2, settings)
        lam = welding_service.lambda_map(mu1, mu2, settings.get("solver", "boundary_samples"), **_solver(settings))
        reports.write_json(args.out, reports.function_payload(lam))
        return 0

    return _run("lambda", action)


def bounds_command(args: argparse.Namespace, settings: Settings) -> int:
    """Trace the radii recurrence or verify the Schwarzian bound."""

    def action():
        b = settings.section("bounds")
        alpha = args.alpha if args.alpha is not None else b["alpha"]
        lam = args.lam if args.lam is not None else b["lambda"]
        if args.action == "recurrence":
            lam = bounds_service.default_lambda(alpha) if lam is None else lam
            trace = bounds_service.recurrence(alpha, lam, args.n or b["n_max"])
            reports.write_csv(args.out, ("n", "s_n"), trace.rows())
            return 0
        if not args.mu:
            raise UsageError("bounds verify needs --mu")
        mu, fx = _mu(args.mu, settings)
        s = settings.section("solver")
        out = bounds_service.verify_alpha_bound(
            mu, alpha, lam, bounds_service.zeta_grid(b["zeta_radii"], b["zeta_angles"]),
            envelope=None if fx is None else fx.envelope,
            field=None if fx is None else fx.to_beltrami_field(), threads=settings.threads, digest=mu.digest(),
            environment=settings.environment(), radius=s["extraction_radius"], jet_samples=s["jet_samples"],
            **_solver(settings))
        reports.write_json(args.out, reports.suite_payload("bounds", out))
        return 0 if all(r.passed for r in out) else 1

    return _run("bounds", action)


def verify_all_command(args: argparse.Namespace, settings: Settings) -> int:
    """Run a verification suite and write its JSON report."""

    def action():
        out = verification_service.run_suite(args.suite, settings)
        # anything but a .json path is a directory holding <suite>.json
        path = args.out
        if path is not None and not path.endswith(".json"):
            path = os.path.join(path, f"{args.suite}.json")
        reports.write_json(path, reports.suite_payload(args.suite, out))
        failed = [r.check for r in out if not r.passed]
        if failed:
            logger.error(f"Failed checks: {', '.join(failed)}")
            return 1
        return 0

    return _run("verify-all", action)


def fixtures_command(args: argparse.Namespace, settings: Settings) -> int:
    """List the fixture catalog."""
    rows = verification_service.list_fixtures()
    width = max(len(name) for name, *_ in rows)
    for name, kind, domain, description in rows:
        print(f"{name.ljust(width)}  {domain:<8}  {description}")
    return 0


def explain_command(args: argparse.Namespace, settings: Settings) -> int:
    """Describe one registered check."""

    def action():
        print(verification_service.explain(args.check))
        return 0

    return _run("explain", action)
