import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from errors import DomainError, UsageError
from models import BeltramiField, CircleDiffeo, FixtureSpec, PeriodicFunction, PlanarGrid

# Configure logging
logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# Nodes added around the outer support radius of a planar grid
GRID_MARGIN = 4

# Named fixtures: kind, default parameters and a one-line description
FIXTURES = {
    "cosine": {
        "kind": "cosine",
        "params": {"amp": 1.0, "mode": 1},
        "description": "amp·cos(mode·θ), smooth reference function",
    },
    "weierstrass": {
        "kind": "weierstrass",
        "params": {"alpha": 0.5, "terms": 12},
        "description": "Σ 2^{-αk} cos(2^k θ), Hölder of order α and no better",
    },
    "zygmund-series": {
        "kind": "zygmund-series",
        "params": {"terms": 12},
        "description": "Σ 2^{-k} cos(2^k θ), Zygmund but not Lipschitz as terms grow",
    },
    "random-band": {
        "kind": "random-band",
        "params": {"band": 16},
        "description": "real trigonometric polynomial with seeded Gaussian coefficients",
    },
    "sine-diffeo": {
        "kind": "sine-diffeo",
        "params": {"amp": 0.5, "mode": 1},
        "description": "h(x) = x + (amp/mode)·sin(mode·x), a real-analytic circle diffeomorphism",
    },
    "diffeo-from-logderiv": {
        "kind": "diffeo-from-logderiv",
        "params": {"logderiv": {"kind": "zygmund-series", "terms": 12}, "scale": 0.5},
        "description": "h built from log h' = scale·(circle fixture)",
    },
    "radial-stretch": {
        "kind": "radial-stretch",
        "params": {"r0": 1.3, "r1": 2.2, "amp": 0.4},
        "description": "dilatation of z·exp(a·b(|z|)) with b a smooth bump; the solution is known in closed form",
    },
    "angular-bump": {
        "kind": "angular-bump",
        "params": {"r0": 1.4, "r1": 2.2, "amp": 0.1, "mode": 2},
        "description": "amp·b(|z|)·e^{i·mode·θ} on an exterior annulus",
    },
    "angular-bump-interior": {
        "kind": "angular-bump",
        "params": {"r0": 0.45, "r1": 0.7, "amp": 0.1, "mode": 2},
        "description": "the angular bump on an annulus inside the unit disk",
    },
    "annulus-indicator": {
        "kind": "annulus-indicator",
        "params": {"r0": 1.5, "r1": 2.0, "value": 0.3},
        "description": "constant value on a closed annulus, zero elsewhere",
    },
}

CIRCLE_KINDS = ("cosine", "weierstrass", "zygmund-series", "random-band")
DIFFEO_KINDS = ("sine-diffeo", "diffeo-from-logderiv")
BELTRAMI_KINDS = ("radial-stretch", "angular-bump", "annulus-indicator", "grid-literal")


def bump(r, r0, r1):
    """C^∞ bump on (r0, r1) equal to 1 at the midpoint, and its derivative."""
    r = np.asarray(r, dtype=float)
    s = (2.0 * r - r0 - r1) / (r1 - r0)
    inside = np.abs(s) < 1.0
    safe = np.where(inside, s, 0.0)
    value = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe ** 2)), 0.0)
    slope = value * (-2.0 * safe / (1.0 - safe ** 2) ** 2) * (2.0 / (r1 - r0))
    return value, np.where(inside, slope, 0.0)


@dataclass(frozen=True)
class BeltramiFixture:
    """Closed-form Beltrami coefficient with its support and modulus envelope."""

    kind: str
    support: tuple
    mu: Callable
    envelope: Callable
    exact_map: Callable | None = None

    def to_planar_grid(self, spacing, radius=None):
        """Sample μ on the square grid of the given spacing covering radius (default: the support)."""
        outer = max(b for _, b in self.support)
        radius = max(outer, 1.0) if radius is None else radius
        half = int(np.ceil(radius / spacing)) + GRID_MARGIN
        x = spacing * np.arange(-half, half + 1)
        nodes = x[None, :] + 1j * x[:, None]
        r = np.abs(nodes)
        mask = np.zeros(r.shape, dtype=bool)
        for a, b in self.support:
            mask |= (r >= a) & (r <= b)
        values = np.where(mask, self.mu(nodes), 0.0)
        logger.debug(f"Sampled {self.kind} on a {2 * half + 1}-node square grid, spacing {spacing:g}")
        return PlanarGrid(spacing, half, values, self.support)

    def to_beltrami_field(self, n_radii=48, n_angles=256):
        """Sample μ on a polar grid of radii refining geometrically toward 𝕊 (exterior fixtures)."""
        outer = max(b for _, b in self.support)
        if min(a for a, _ in self.support) < 1.0:
            raise DomainError("polar Beltrami fields describe exterior coefficients only")
        ratio = 0.5 ** (1.0 / max(1, n_radii // 12))
        radii = np.sort(1.0 + (outer - 1.0) * ratio ** np.arange(n_radii))
        theta = TWO_PI * np.arange(n_angles) / n_angles
        points = radii[:, None] * np.exp(1j * theta)[None, :]
        return BeltramiField("disk_exterior", radii, self.mu(points), ratio=ratio)


def radial_stretch(r0=1.3, r1=2.2, amp=0.4):
    """
    Dilatation of f(z) = z·exp(a·b(|z|)) scaled so that ‖μ‖_∞ = amp.

    With x = a·r·b'(r) the coefficient is μ = e^{2iθ}·x/(2 + x); its largest
    modulus sits where r·b' is most negative, so a·D = 2·amp/(1 + amp) with
    D = max(-r·b').
    """
    if not 0.0 < amp < 1.0:
        raise DomainError(f"radial stretch amplitude {amp} is outside (0, 1)")
    fine = np.linspace(r0, r1, 20001)
    _, slope = bump(fine, r0, r1)
    depth = float(np.max(-fine * slope))
    a = 2.0 * amp / ((1.0 + amp) * depth)

    def mu(z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        _, db = bump(r, r0, r1)
        x = a * r * db
        phase = np.where(r > 0, z / np.where(r > 0, r, 1.0), 1.0) ** 2
        return phase * x / (2.0 + x)

    def envelope(r):
        _, db = bump(r, r0, r1)
        x = a * np.asarray(r) * db
        return np.abs(x / (2.0 + x))

    def exact_map(z):
        z = np.asarray(z, dtype=complex)
        b, _ = bump(np.abs(z), r0, r1)
        return z * np.exp(a * b)

    return BeltramiFixture("radial-stretch", ((r0, r1),), mu, envelope, exact_map)


def angular_bump(r0=1.4, r1=2.2, amp=0.1, mode=2):
    if not 0.0 < amp < 1.0:
        raise DomainError(f"angular bump amplitude {amp} is outside (0, 1)")

    def mu(z):
        z = np.asarray(z, dtype=complex)
        b, _ = bump(np.abs(z), r0, r1)
        return amp * b * np.exp(1j * mode * np.angle(z))

    def envelope(r):
        return amp * bump(r, r0, r1)[0]

    return BeltramiFixture("angular-bump", ((r0, r1),), mu, envelope)


def annulus_indicator(r0=1.5, r1=2.0, value=0.3):
    if not abs(value) < 1.0:
        raise DomainError(f"indicator value {value} reaches modulus 1")

    def mu(z):
        r = np.abs(np.asarray(z, dtype=complex))
        return np.where((r >= r0) & (r <= r1), complex(value), 0.0)

    def envelope(r):
        r = np.asarray(r, dtype=float)
        return np.where((r >= r0) & (r <= r1), abs(value), 0.0)

    return BeltramiFixture("annulus-indicator", ((r0, r1),), mu, envelope)


def zero_coefficient(support=((1.5, 2.0),)):
    """μ ≡ 0 carried on an annulus (keeps grid sizes comparable with the other fixtures)."""
    return BeltramiFixture(
        "zero", tuple(support),
        lambda z: np.zeros(np.shape(z), dtype=complex),
        lambda r: np.zeros(np.shape(r)),
        lambda z: np.asarray(z, dtype=complex),
    )


def _circle_values(kind, params, n, seed):
    theta = TWO_PI * np.arange(n) / n
    if kind == "cosine":
        return params.get("amp", 1.0) * np.cos(params.get("mode", 1) * theta)
    if kind in ("weierstrass", "zygmund-series"):
        alpha = params.get("alpha", 1.0) if kind == "weierstrass" else 1.0
        terms = int(params.get("terms", 12))
        k = np.arange(1, terms + 1)
        return (2.0 ** (-alpha * k)[:, None] * np.cos(2.0 ** k[:, None] * theta[None, :])).sum(axis=0)
    if kind == "random-band":
        return random_band(n, int(params.get("band", 16)), np.random.default_rng(seed))
    raise UsageError(f"unknown circle fixture kind {kind!r}")


def random_band(n, band, rng):
    """Real trigonometric polynomial with Gaussian modes 1 ... band and a Gaussian mean."""
    theta = TWO_PI * np.arange(n) / n
    k = np.arange(1, band + 1)
    a = rng.standard_normal(band)
    b = rng.standard_normal(band)
    values = rng.standard_normal() + (a[:, None] * np.cos(k[:, None] * theta) +
                                      b[:, None] * np.sin(k[:, None] * theta)).sum(axis=0)
    return values


def fixture_spec(name, n_samples=256, spacing=1.0 / 32.0, seed=0, **overrides):
    """FixtureSpec for a catalog entry with optional parameter overrides."""
    if name not in FIXTURES:
        raise UsageError(f"unknown fixture {name!r}")
    entry = FIXTURES[name]
    params = dict(entry["params"])
    params.update(overrides)
    return FixtureSpec(name, entry["kind"], params, n_samples, spacing, seed)


def build_function(spec):
    """PeriodicFunction for a circle fixture spec."""
    if spec.kind not in CIRCLE_KINDS:
        raise UsageError(f"fixture {spec.name!r} is not a circle function")
    return PeriodicFunction(_circle_values(spec.kind, spec.params, spec.n_samples, spec.seed), is_real=True)


def sine_diffeo(n, amp=0.5, mode=1):
    """h(x) = x + (amp/mode)·sin(mode·x) with h' = 1 + amp·cos(mode·x)."""
    if not abs(amp) < 1.0:
        raise DomainError(f"sine diffeo amplitude {amp} breaks monotonicity")
    theta = TWO_PI * np.arange(n) / n
    return CircleDiffeo(amp / mode * np.sin(mode * theta), 1.0 + amp * np.cos(mode * theta))


def build_diffeo(spec):
    """CircleDiffeo for a diffeo fixture spec."""
    if spec.kind == "sine-diffeo":
        return sine_diffeo(spec.n_samples, spec.params.get("amp", 0.5), spec.params.get("mode", 1))
    if spec.kind == "diffeo-from-logderiv":
        from services.diffeo_service import from_log_derivative

        inner = dict(spec.params.get("logderiv", {"kind": "cosine"}))
        kind = inner.pop("kind")
        phi = _circle_values(kind, inner, spec.n_samples, spec.seed) * spec.params.get("scale", 1.0)
        return from_log_derivative(PeriodicFunction(phi, is_real=True))
    raise UsageError(f"fixture {spec.name!r} is not a circle diffeomorphism")


def build_beltrami(spec):
    """BeltramiFixture for a Beltrami fixture spec."""
    p = spec.params
    if spec.kind == "radial-stretch":
        return radial_stretch(p.get("r0", 1.3), p.get("r1", 2.2), p.get("amp", 0.4))
    if spec.kind == "angular-bump":
        return angular_bump(p.get("r0", 1.4), p.get("r1", 2.2), p.get("amp", 0.1), p.get("mode", 2))
    if spec.kind == "annulus-indicator":
        return annulus_indicator(p.get("r0", 1.5), p.get("r1", 2.0), p.get("value", 0.3))
    raise UsageError(f"fixture {spec.name!r} is not a Beltrami coefficient")


def grid_from_payload(payload):
    """PlanarGrid from a grid-literal JSON payload."""
    try:
        values = np.asarray(payload["values_re"], dtype=float) + 1j * np.asarray(payload["values_im"], dtype=float)
        return PlanarGrid(float(payload["spacing"]), int(payload["half"]), values,
                          tuple(tuple(s) for s in payload["support"]))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"malformed grid literal: {e}") from e


def beltrami_from_payload(payload, spacing):
    """
    (PlanarGrid, BeltramiFixture or None) from a μ payload.

    The payload is either a closed form {"kind": "radial-stretch", "r0": ...}
    or a grid literal {"kind": "grid", "spacing", "half", "support", "values_re", "values_im"}.
    """
    params = dict(payload)
    kind = params.pop("kind", None)
    if kind in ("grid", "grid-literal"):
        return grid_from_payload(params), None
    if kind not in BELTRAMI_KINDS:
        raise UsageError(f"unknown Beltrami fixture kind {kind!r}")
    fx = build_beltrami(fixture_spec(kind, spacing=spacing, **params))
    return fx.to_planar_grid(spacing), fx


def function_from_payload(payload, n_samples=256, seed=0):
    """PeriodicFunction from raw samples {n, values_re, values_im} or a closed-form {kind, ...}."""
    if "values_re" in payload:
        re = np.asarray(payload["values_re"], dtype=float)
        im = np.asarray(payload.get("values_im", np.zeros_like(re)), dtype=float)
        if "n" in payload and int(payload["n"]) != re.size:
            raise UsageError(f"payload declares n={payload['n']} but carries {re.size} samples")
        real = not np.any(im)
        return PeriodicFunction(re if real else re + 1j * im, is_real=real)
    params = dict(payload)
    kind = params.pop("kind", None)
    n = int(params.pop("n", n_samples))
    if kind not in CIRCLE_KINDS:
        raise UsageError(f"unknown circle fixture kind {kind!r}")
    return PeriodicFunction(_circle_values(kind, params, n, seed), is_real=True)


def catalog():
    """Rows (name, kind, domain, description) sorted by name."""
    rows = []
    for name in sorted(FIXTURES):
        kind = FIXTURES[name]["kind"]
        domain = "circle" if kind in CIRCLE_KINDS else "diffeo" if kind in DIFFEO_KINDS else "beltrami"
        rows.append((name, kind, domain, FIXTURES[name]["description"]))
    return rows
