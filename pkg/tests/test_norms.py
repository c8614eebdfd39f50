import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from errors import DomainError
from models import BeltramiField, PeriodicFunction
from services import norms_service
from utils import fixtures

COSINE_ZYGMUND = 0.7246


def _band(seed, n=256, band=16):
    return PeriodicFunction(fixtures.random_band(n, band, np.random.default_rng(seed)), is_real=True)


def test_zygmund_of_cosine():
    f = PeriodicFunction.from_callable(np.cos, 4096)
    value = norms_service.zygmund_seminorm(f)
    assert value.kind == "zygmund"
    assert value.value == pytest.approx(COSINE_ZYGMUND, rel=2e-2)
    # the maximizing step sits near t = 2.33
    assert value.details["argmax_step"] == pytest.approx(2.331, abs=0.01)


def test_lipschitz_of_cosine():
    f = PeriodicFunction.from_callable(np.cos, 1024)
    assert norms_service.lipschitz_seminorm(f).value == pytest.approx(1.0, rel=1e-4)


@pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5])
def test_holder_exponent_range(cosine, alpha):
    with pytest.raises(DomainError):
        norms_service.holder_seminorm(cosine, alpha)


def test_seminorms_need_real_input():
    f = PeriodicFunction.from_callable(lambda t: np.exp(1j * t), 64, real=False)
    with pytest.raises(DomainError):
        norms_service.zygmund_seminorm(f)


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
@hsettings(max_examples=20, deadline=None)
def test_zygmund_never_exceeds_lipschitz(seed):
    f = _band(seed)
    zyg = norms_service.zygmund_seminorm(f).value
    lip = norms_service.lipschitz_seminorm(f).value
    assert zyg <= lip * (1.0 + 1e-12)


@given(st.floats(min_value=0.1, max_value=10.0))
@hsettings(max_examples=20, deadline=None)
def test_zygmund_is_homogeneous(scale):
    f = _band(11)
    scaled = PeriodicFunction(scale * f.values, is_real=True)
    assert norms_service.zygmund_seminorm(scaled).value == pytest.approx(
        scale * norms_service.zygmund_seminorm(f).value, rel=1e-12)


def test_besov_one_is_twice_zygmund():
    f = _band(5)
    assert norms_service.besov_seminorm(f, 1.0).value == pytest.approx(
        2.0 * norms_service.zygmund_seminorm(f).value, rel=1e-12)
    assert norms_service.besov_seminorm(f, 1.0).details["order"] == 2


def test_besov_below_one_uses_first_differences(cosine):
    assert norms_service.besov_seminorm(cosine, 0.5).value == pytest.approx(
        norms_service.holder_seminorm(cosine, 0.5).value, rel=1e-12)
    with pytest.raises(DomainError):
        norms_service.besov_seminorm(cosine, 2.0)


def test_bz_norm_of_z_and_z_squared():
    z = norms_service.coefficients_from_taylor([0.0, 1.0])
    z2 = norms_service.coefficients_from_taylor([0.0, 0.0, 1.0])
    assert norms_service.bz_norm(z).value == pytest.approx(1.0)
    assert norms_service.bz_norm(z2).value == pytest.approx(2.0)


def test_az_norm_of_constant():
    one = norms_service.coefficients_from_taylor([1.0])
    value = norms_service.az_norm(one)
    assert value.value == pytest.approx(1.0)
    assert value.details["levels"] <= norms_service.MAX_LEVELS


def test_bz_norm_rejects_negative_modes(cosine):
    from services.spectral_service import dft

    with pytest.raises(DomainError):
        norms_service.bz_norm(dft(cosine))


def test_bz_exterior_of_one_over_z():
    f = PeriodicFunction.from_callable(lambda t: np.exp(-1j * t), 64, real=False)
    from services.spectral_service import szego_exterior

    assert norms_service.bz_norm_exterior(szego_exterior(f)).value == pytest.approx(1.0)


def test_fixed_levels_are_reported():
    z2 = norms_service.coefficients_from_taylor([0.0, 0.0, 1.0])
    value = norms_service.bz_norm(z2, levels=3)
    assert value.details["levels"] == 3
    assert value.details["radii_per_level"] == norms_service.RADII_PER_LEVEL


def test_radii_ladder_is_increasing():
    radii = norms_service.radii_ladder(4, per_level=4)
    assert radii.size == 17
    assert radii[0] == 0.0
    assert np.all(np.diff(radii) > 0)
    assert radii[-1] == pytest.approx(1.0 - 2.0 ** -4)


def test_weighted_norm_of_linear_decay():
    field = norms_service.dyadic_disk_field(lambda z: 0.5 * (np.abs(z) - 1.0), 6, 64)
    value = norms_service.beltrami_weighted_norm(field, 1.0)
    assert value.value == pytest.approx(0.5)
    assert len(value.profile) == 6


def test_weighted_norm_order_range():
    field = norms_service.dyadic_disk_field(lambda z: 0.1 + 0 * z, 3, 16)
    with pytest.raises(DomainError):
        norms_service.beltrami_weighted_norm(field, 2.0)


def test_planar_weighted_norm_of_zero_grid():
    grid = fixtures.zero_coefficient().to_planar_grid(1.0 / 16.0)
    assert norms_service.planar_weighted_norm(grid, 1.0).value == 0.0


def test_split_constant_reports_every_part(cosine):
    out = norms_service.split_constant(cosine)
    assert set(out) == {"bz_interior", "bz_exterior", "reference", "k_split"}
    assert out["reference"] > 0
    assert np.isfinite(out["k_split"])


def test_az_norm_of_z_squared():
    # sup of (1 - r²) r² is 1/4 at r² = 1/2
    z2 = norms_service.coefficients_from_taylor([0.0, 0.0, 1.0])
    assert norms_service.az_norm(z2).value == pytest.approx(0.25, rel=1e-3)


@pytest.mark.parametrize("n", [64, 256])
def test_seminorms_grow_on_nested_grids(n):
    def fn(t):
        return np.cos(t) + 0.2 * np.sin(5.0 * t) + 0.05 * np.cos(17.0 * t)

    coarse = PeriodicFunction.from_callable(fn, n)
    fine = PeriodicFunction.from_callable(fn, 2 * n)
    for seminorm in (norms_service.zygmund_seminorm, norms_service.lipschitz_seminorm,
                     lambda f: norms_service.holder_seminorm(f, 0.5)):
        assert seminorm(fine).value >= seminorm(coarse).value


def test_weighted_norm_of_outer_annulus():
    radii = np.array([1.0625, 1.125, 1.25, 1.5, 2.0])
    values = np.zeros((5, 32), dtype=complex)
    values[3:] = 0.3
    field = BeltramiField("disk_exterior", radii, values)
    # weight 1/d = 2 at |z| = 1.5
    assert norms_service.beltrami_weighted_norm(field, 1.0).value == pytest.approx(0.6, rel=1e-12)


def test_bz_norm_of_lacunary_series_is_stable_in_depth():
    taylor = np.zeros(2 ** 10 + 1)
    for k in range(1, 11):
        taylor[2 ** k] = 2.0 ** -k
    c = norms_service.coefficients_from_taylor(taylor)
    shallow = norms_service.bz_norm(c, levels=10).value
    deep = norms_service.bz_norm(c, levels=14).value
    assert deep >= shallow
    assert deep == pytest.approx(shallow, rel=5e-2)
