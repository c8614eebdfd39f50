import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import RegularGridInterpolator

from errors import DomainError, NumericalDegeneracyError, SizeError
from utils import planar, series

TWO_PI = 2.0 * np.pi


def _frozen(array, dtype):
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


def check_power_of_two(n, minimum=16):
    """Raise SizeError unless n is a power of two no smaller than minimum."""
    if n < minimum or n & (n - 1):
        raise SizeError(f"grid length {n} is not a power of two >= {minimum}")


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """Samples of a 2π-periodic function at θ_j = 2πj/n."""

    values: np.ndarray
    is_real: bool = False

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1:
            raise SizeError("periodic samples must be one-dimensional")
        check_power_of_two(values.size)
        if self.is_real:
            if np.iscomplexobj(values):
                scale = np.max(np.abs(values)) if values.size else 0.0
                if np.max(np.abs(values.imag)) > 1e-12 * max(scale, 1e-300):
                    raise DomainError("values flagged real carry imaginary parts")
                values = values.real
            object.__setattr__(self, "values", _frozen(values, float))
        else:
            object.__setattr__(self, "values", _frozen(values, complex))

    @classmethod
    def from_callable(cls, fn, n, real=True):
        theta = TWO_PI * np.arange(n) / n
        return cls(fn(theta), is_real=real)

    @classmethod
    def constant(cls, c, n):
        return cls(np.full(n, c), is_real=np.isrealobj(c))

    @property
    def n_samples(self):
        return self.values.size

    @property
    def nodes(self):
        return TWO_PI * np.arange(self.n_samples) / self.n_samples

    @property
    def spacing(self):
        return TWO_PI / self.n_samples

    def __repr__(self):
        kind = "real" if self.is_real else "complex"
        return f"<PeriodicFunction n={self.n_samples} {kind}>"


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Fourier modes -n/2 ... n/2-1 in ascending order."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs)
        check_power_of_two(coeffs.size)
        object.__setattr__(self, "coeffs", _frozen(coeffs, complex))

    @property
    def n_samples(self):
        return self.coeffs.size

    @property
    def modes(self):
        n = self.n_samples
        return np.arange(-n // 2, n // 2)

    def mode(self, k):
        n = self.n_samples
        if not -n // 2 <= k < n // 2:
            return 0.0
        return self.coeffs[k + n // 2]

    def taylor(self):
        """Coefficients of the modes n >= 0, lowest first."""
        return np.array(self.coeffs[self.n_samples // 2:])

    def __repr__(self):
        return f"<FourierCoefficients n={self.n_samples}>"


@dataclass(frozen=True)
class SeminormValue:
    value: float
    grid_n: int
    kind: str
    profile: tuple = ()
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.value >= 0.0:
            raise DomainError(f"seminorm value {self.value} is negative")

    def to_dict(self):
        out = {"kind": self.kind, "value": self.value, "grid_n": self.grid_n}
        if self.profile:
            out["profile"] = [list(map(float, row)) for row in self.profile]
        out.update(self.details)
        return out


@dataclass(frozen=True, eq=False)
class BeltramiField:
    """Complex dilatation on a polar (disk_exterior) or periodic half-plane grid.

    levels are radii 1 < r_1 < ... < r_K for disk_exterior and depths
    y_1 < ... < y_K < 0 for halfplane_periodic; values has shape (K, m).
    """

    geometry: str
    levels: np.ndarray
    values: np.ndarray
    ratio: float = 0.5

    def __post_init__(self):
        if self.geometry not in ("disk_exterior", "halfplane_periodic"):
            raise DomainError(f"unknown Beltrami geometry {self.geometry}")
        levels = _frozen(self.levels, float)
        values = _frozen(self.values, complex)
        if values.ndim != 2 or values.shape[0] != levels.size:
            raise SizeError("values must have one row per level")
        if levels.size > 1 and np.any(np.diff(levels) <= 0):
            raise DomainError("levels must be strictly increasing")
        if self.geometry == "disk_exterior" and levels.size and levels[0] <= 1.0:
            raise DomainError("disk_exterior radii must exceed 1")
        if self.geometry == "halfplane_periodic" and levels.size and levels[-1] >= 0.0:
            raise DomainError("half-plane depths must be negative")
        if values.size and np.max(np.abs(values)) >= 1.0:
            raise DomainError("Beltrami coefficient must have sup modulus below 1")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "values", values)

    @cached_property
    def sup_abs(self):
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    @property
    def n_angles(self):
        return self.values.shape[1]

    @property
    def distances(self):
        """Distance of each level to the boundary."""
        if self.geometry == "disk_exterior":
            return self.levels - 1.0
        return np.abs(self.levels)

    def points(self):
        m = self.n_angles
        angles = TWO_PI * np.arange(m) / m
        if self.geometry == "disk_exterior":
            return self.levels[:, None] * np.exp(1j * angles)[None, :]
        return angles[None, :] + 1j * self.levels[:, None]

    def __repr__(self):
        return f"<BeltramiField {self.geometry} levels={self.levels.size} m={self.n_angles}>"


@dataclass(frozen=True, eq=False)
class HalfPlaneField:
    """Values on x_j = 2πj/n times depths y_k < 0, shape (K, n).

    source keeps the extended PeriodicFunction or CircleDiffeo so that
    derivative fields can be formed from the defining integrals.
    """

    depths: np.ndarray
    values: np.ndarray
    kind: str
    source: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("map", "dbar", "dilatation"):
            raise DomainError(f"unknown field kind {self.kind}")
        depths = _frozen(self.depths, float)
        values = _frozen(self.values, complex)
        if np.any(depths >= 0.0):
            raise DomainError("depths must be negative")
        if depths.size > 1 and np.any(np.diff(np.abs(depths)) >= 0):
            raise DomainError("depths must approach the boundary")
        if values.shape != (depths.size, values.shape[-1]):
            raise SizeError("values must have one row per depth")
        check_power_of_two(values.shape[1])
        if self.kind == "dilatation" and np.max(np.abs(values)) >= 1.0:
            raise DomainError("dilatation reaches modulus 1")
        object.__setattr__(self, "depths", depths)
        object.__setattr__(self, "values", values)

    @property
    def n_samples(self):
        return self.values.shape[1]

    @property
    def x_nodes(self):
        return TWO_PI * np.arange(self.n_samples) / self.n_samples

    def __repr__(self):
        return f"<HalfPlaneField {self.kind} depths={self.depths.size} n={self.n_samples}>"


@dataclass(frozen=True, eq=False)
class CircleDiffeo:
    """Lift h(x) = x + lift(x) of a degree-one circle diffeomorphism."""

    lift: np.ndarray
    deriv: np.ndarray
    normalized: bool = False

    degree_tol = 1e-6

    def __post_init__(self):
        lift = _frozen(self.lift, float)
        deriv = _frozen(self.deriv, float)
        check_power_of_two(lift.size)
        if deriv.shape != lift.shape:
            raise SizeError("lift and derivative samples differ in length")
        bad = np.flatnonzero(~(deriv > 0.0))
        if bad.size:
            raise NumericalDegeneracyError(f"h' is not positive at node {bad[0]}", node=int(bad[0]))
        h = TWO_PI * np.arange(lift.size) / lift.size + lift
        steps = np.diff(np.append(h, h[0] + TWO_PI))
        bad = np.flatnonzero(steps <= 0.0)
        if bad.size:
            raise NumericalDegeneracyError(f"lift is not increasing at node {bad[0]}", node=int(bad[0]))
        drift = abs(float(np.mean(deriv)) - 1.0)
        if drift > self.degree_tol:
            raise NumericalDegeneracyError(f"mean of h' differs from 1 by {drift:.3e}")
        object.__setattr__(self, "lift", lift)
        object.__setattr__(self, "deriv", deriv)

    @property
    def n_samples(self):
        return self.lift.size

    @property
    def nodes(self):
        return TWO_PI * np.arange(self.n_samples) / self.n_samples

    @property
    def values(self):
        """Samples of h itself."""
        return self.nodes + self.lift

    @cached_property
    def log_deriv(self):
        out = np.log(self.deriv)
        out.setflags(write=False)
        return out

    @property
    def is_identity(self):
        return not np.any(self.lift) and np.all(self.deriv == 1.0)

    @property
    def is_rotation(self):
        return bool(np.all(self.lift == self.lift[0]) and np.all(self.deriv == 1.0))

    def __repr__(self):
        return f"<CircleDiffeo n={self.n_samples} normalized={self.normalized}>"


@dataclass(frozen=True, eq=False)
class PlanarGrid:
    """Square grid z = (i + 1j*k)·spacing, |i|,|k| <= half, carrying μ.

    support lists the closed annuli (a, b) where μ may be non-zero; each
    annulus lies entirely inside or entirely outside the unit circle.
    """

    spacing: float
    half: int
    values: np.ndarray
    support: tuple

    def __post_init__(self):
        values = _frozen(self.values, complex)
        size = 2 * self.half + 1
        if values.shape != (size, size):
            raise SizeError(f"grid values must be {size}x{size}")
        support = tuple((float(a), float(b)) for a, b in self.support)
        gaps = []
        for a, b in support:
            if not 0.0 < a <= b or (a < 1.0 < b) or a == 1.0 or b == 1.0:
                raise DomainError(f"support annulus ({a}, {b}) touches the unit circle")
            gaps.append(1.0 - b if b < 1.0 else a - 1.0)
        if gaps and self.spacing > min(gaps) / 8.0 + 1e-15:
            raise DomainError(f"spacing {self.spacing} exceeds an eighth of the boundary gap {min(gaps)}")
        if np.any(values[~self.support_mask(support)] != 0):
            raise DomainError("μ is non-zero outside its support annuli")
        if values.size and np.max(np.abs(values)) >= 1.0:
            raise DomainError("Beltrami coefficient must have sup modulus below 1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "support", support)

    @property
    def axis(self):
        return self.spacing * np.arange(-self.half, self.half + 1)

    @cached_property
    def nodes(self):
        x = self.axis
        return x[None, :] + 1j * x[:, None]

    def support_mask(self, support=None):
        support = self.support if support is None else support
        r = np.abs(self.nodes)
        mask = np.zeros(r.shape, dtype=bool)
        for a, b in support:
            mask |= (r >= a) & (r <= b)
        return mask

    @property
    def sup_abs(self):
        return float(np.max(np.abs(self.values)))

    @property
    def is_zero(self):
        return not np.any(self.values)

    @property
    def outer_radius(self):
        return max((b for _, b in self.support), default=0.0)

    @property
    def inner_radius(self):
        """Smallest support radius outside the unit circle (inf if none)."""
        return min((a for a, _ in self.support if a > 1.0), default=np.inf)

    def sample(self, points):
        """Bilinear values of μ at arbitrary points, zero off the support."""
        points = np.asarray(points, dtype=complex)
        x = self.axis
        flat = points.ravel()
        query = np.column_stack([flat.imag, flat.real])
        out = np.zeros(flat.shape, dtype=complex)
        for part, unit in ((self.values.real, 1.0), (self.values.imag, 1j)):
            interp = RegularGridInterpolator((x, x), part, bounds_error=False, fill_value=0.0)
            out += unit * interp(query)
        r = np.abs(flat)
        inside = np.zeros(r.shape, dtype=bool)
        for a, b in self.support:
            inside |= (r >= a) & (r <= b)
        out = np.where(inside, out, 0.0)
        return out.reshape(points.shape)

    def digest(self):
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.values).tobytes())
        h.update(json.dumps([self.spacing, self.half, self.support]).encode())
        return h.hexdigest()[:16]

    def __repr__(self):
        return f"<PlanarGrid h={self.spacing:g} half={self.half} support={self.support}>"


@dataclass(frozen=True, eq=False)
class QuasiconformalMap:
    """Normalized solution F = scale·P + shift of the Beltrami equation.

    P(z) = z + Cg(z) is the principal solution carried by the density g on the
    grid; principal and dz hold P and ∂P at the grid nodes.
    """

    grid: PlanarGrid
    density: np.ndarray
    principal: np.ndarray
    dz: np.ndarray
    normalization: str
    scale: complex = 1.0
    shift: complex = 0.0
    residual: float = 0.0
    steps: int = 0
    contraction: float = 0.0

    @cached_property
    def _active(self):
        mask = self.density != 0
        return self.grid.nodes[mask], self.density[mask]

    @property
    def values(self):
        return self.scale * self.principal + self.shift

    @property
    def dbar_values(self):
        return self.scale * self.density

    @property
    def dz_values(self):
        return self.scale * self.dz

    def principal_at(self, points, order=0):
        nodes, weights = self._active
        return planar.cauchy_sum(np.asarray(points, dtype=complex), nodes, weights,
                                 self.grid.spacing, order=order)

    def evaluate(self, points):
        return self.scale * self.principal_at(points) + self.shift

    def derivative(self, points, order=1):
        """Complex derivatives of F at points off the support of μ."""
        return self.scale * self.principal_at(points, order=order)

    def jacobian(self):
        return np.abs(self.dz_values) ** 2 - np.abs(self.dbar_values) ** 2

    def __repr__(self):
        return f"<QuasiconformalMap {self.normalization} steps={self.steps} residual={self.residual:.2e}>"


@dataclass(frozen=True, eq=False)
class ConformalJet:
    """Taylor coefficients a_0 ... a_M of a map conformal on the disk."""

    coeffs: np.ndarray
    radius: float
    tail: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs, complex))

    @property
    def order(self):
        return self.coeffs.size - 1

    def derivative_coeffs(self, k=1):
        return P.polyder(self.coeffs, k) if k else np.array(self.coeffs)

    def evaluate(self, z, k=0):
        return P.polyval(np.asarray(z, dtype=complex), self.derivative_coeffs(k))

    @property
    def series_length(self):
        # F''' is known through degree M-3
        return self.order - 2

    @cached_property
    def pre_schwarzian_coeffs(self):
        return series.divide(self.derivative_coeffs(2), self.derivative_coeffs(1), self.series_length)

    @cached_property
    def schwarzian_coeffs(self):
        m = self.series_length
        n = self.pre_schwarzian_coeffs
        third = series.divide(self.derivative_coeffs(3), self.derivative_coeffs(1), m)
        return third - 1.5 * series.multiply(n, n, m)

    @cached_property
    def log_derivative_coeffs(self):
        """Taylor coefficients of log F'."""
        return series.integrate(self.pre_schwarzian_coeffs, np.log(self.coeffs[1]))

    def pre_schwarzian(self, z):
        z = np.asarray(z, dtype=complex)
        return self.evaluate(z, 2) / self.evaluate(z, 1)

    def schwarzian(self, z):
        z = np.asarray(z, dtype=complex)
        d1, d2, d3 = (self.evaluate(z, k) for k in (1, 2, 3))
        return d3 / d1 - 1.5 * (d2 / d1) ** 2

    def __repr__(self):
        return f"<ConformalJet M={self.order} radius={self.radius} tail={self.tail:.1e}>"


@dataclass(frozen=True, eq=False)
class WeldingTriple:
    h: CircleDiffeo
    f_trace: PeriodicFunction
    g_trace: PeriodicFunction
    residual: float
    tolerance: float
    seminorms: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.residual <= self.tolerance


@dataclass(frozen=True, eq=False)
class RecurrenceTrace:
    alpha: float
    lam: float
    s: np.ndarray
    tau: float = 1.0
    diverged: bool = False
    capped_from: int | None = None

    @property
    def t(self):
        return self.tau * self.s

    @property
    def uncapped(self):
        """Terms computed without hitting the overflow cap."""
        end = self.s.size if self.capped_from is None else self.capped_from
        return self.s[:end]

    @property
    def increasing(self):
        return bool(np.all(np.diff(self.uncapped) > 0))

    def rows(self):
        return [(n, float(v)) for n, v in enumerate(self.s)]


@dataclass(frozen=True, eq=False)
class AnnulusDecomposition:
    """Radii R_{-1}=1 < R_0 < ... < R_N (R_{N+1} = inf implied) and sup moduli k_i.

    k[i] is the sup of |μ| on the annulus that starts at radii[i].
    """

    radii: np.ndarray
    k: np.ndarray
    zeta: complex
    ell: float
    alpha: float
    lam: float

    @property
    def n_annuli(self):
        return self.radii.size

    @property
    def last_index(self):
        """N, the index of the outermost finite radius."""
        return self.radii.size - 2

    @property
    def tau(self):
        return 1.0 - abs(self.zeta)


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    n_samples: int = 256
    spacing: float = 1.0 / 32.0
    seed: int = 0

    def digest(self):
        payload = json.dumps(
            {"name": self.name, "kind": self.kind, "params": self.params,
             "n": self.n_samples, "spacing": self.spacing, "seed": self.seed},
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class VerificationReport:
    check: str
    inputs_digest: str
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool
    one_sided: bool = False
    environment: dict = field(default_factory=dict)
    detail: str = ""

    @classmethod
    def two_sided(cls, check, digest, lhs, rhs, tolerance, environment=None, detail=""):
        residual = abs(float(lhs) - float(rhs))
        return cls(check, digest, float(lhs), float(rhs), residual, float(tolerance),
                   bool(residual <= tolerance), False, dict(environment or {}), detail)

    @classmethod
    def bound(cls, check, digest, lhs, rhs, environment=None, detail="", strict=False):
        """Report for a one-sided claim lhs <= rhs (lhs < rhs when strict)."""
        lhs, rhs = float(lhs), float(rhs)
        passed = lhs < rhs if strict else lhs <= rhs
        return cls(check, digest, lhs, rhs, max(lhs - rhs, 0.0), 0.0, bool(passed), True,
                   dict(environment or {}), detail)

    @classmethod
    def failure(cls, check, digest, error):
        return cls(check, digest, float("nan"), float("nan"), float("nan"), 0.0, False,
                   detail=f"{type(error).__name__}: {error}")

    def to_dict(self):
        return {
            "check": self.check,
            "inputs_digest": self.inputs_digest,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "one_sided": self.one_sided,
            "environment": self.environment,
            "detail": self.detail,
        }

    def __repr__(self):
        status = "passed" if self.passed else "FAILED"
        return f"<VerificationReport {self.check} {status}>"


@dataclass(frozen=True)
class OperatorNormEstimate:
    """Empirical sup of seminorm(P_h f)/seminorm(f) next to the C^{1+α} bound."""

    estimate: float
    bound: float
    used: int
    skipped: int
    space: str

    @property
    def k_disc(self):
        return self.estimate / self.bound if self.bound > 0 else float("inf")

    def to_dict(self):
        return {"estimate": self.estimate, "bound": self.bound, "k_disc": self.k_disc,
                "used": self.used, "skipped": self.skipped, "space": self.space}
