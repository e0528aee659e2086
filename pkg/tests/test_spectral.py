"""spectral 연산자 테스트"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.config import RegNorm
from vreg_app.services.errors import GridError
from vreg_app.services.spectral import (
    Band,
    Grid,
    apply_inv_reg,
    apply_reg,
    band_limited_random,
    cutoff_filter,
    divergence,
    gradient,
    inner,
    project_div_free,
    prolong,
    resample,
    restrict,
    spectral_weights,
)
from vreg_app.services.spectral.operators import derivative_wavenumbers, fourier_relative_error


def _mean_free(u: np.ndarray) -> np.ndarray:
    return u - u.mean(axis=(-2, -1), keepdims=True)


# ============== Grid ==============


@pytest.mark.parametrize("n", [(15, 16), (2, 2), (16,)])
def test_invalid_grid_raises(n):
    with pytest.raises(GridError):
        Grid(n)


def test_grid_coords_start_at_minus_pi(grid32):
    x1, x2 = grid32.coords
    assert x1[0, 0] == pytest.approx(-np.pi)
    assert x1[1, 0] - x1[0, 0] == pytest.approx(grid32.h[0])
    assert np.all(x2[:, 3] == x2[0, 3])


def test_grid_shape_mismatch_raises(grid32):
    with pytest.raises(GridError):
        grid32.check(np.zeros((16, 16)))


# ============== Differential operators ==============


def test_gradient_of_trig_is_exact(grid32):
    x1, x2 = grid32.coords
    g = gradient(np.sin(x1) * np.cos(2 * x2))
    np.testing.assert_allclose(g[0], np.cos(x1) * np.cos(2 * x2), atol=1e-12)
    np.testing.assert_allclose(g[1], -2 * np.sin(x1) * np.sin(2 * x2), atol=1e-12)


def test_derivative_wavenumbers_zero_nyquist():
    kd1, kd2 = derivative_wavenumbers((8, 8))
    assert kd1[4, 0] == 0.0
    assert kd2[0, 4] == 0.0
    assert kd1[3, 0] == 3.0


def test_discrete_derivative_is_skew(grid32, rng):
    u = rng.standard_normal(grid32.shape)
    w = rng.standard_normal(grid32.shape)
    lhs = inner(gradient(u)[0], w)
    rhs = -inner(u, gradient(w)[0])
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_gradient_counts_one_fft_per_component(grid32):
    with tracked_ops() as ops:
        gradient(grid32.zeros())
    assert ops.fft == 3
    assert ops.interp == 0


# ============== Regularization ==============


@pytest.mark.parametrize("norm", list(RegNorm))
def test_inverse_regularization_undoes_regularization(grid32, rng, norm):
    u = _mean_free(band_limited_random(grid32, rng, components=2))
    w = spectral_weights(grid32, norm)
    np.testing.assert_allclose(apply_inv_reg(apply_reg(u, w, 0.3), w, 0.3), u, atol=1e-7)


def test_inverse_regularization_scales_constant_by_inverse_beta(grid32):
    w = spectral_weights(grid32, RegNorm.H2)
    u = np.full(grid32.vector_shape, 2.0)
    np.testing.assert_allclose(apply_inv_reg(u, w, 0.5), 4.0, atol=1e-12)


def test_regularization_symbol_orders(grid32):
    k_sq = spectral_weights(grid32, RegNorm.H1).gamma
    np.testing.assert_allclose(spectral_weights(grid32, RegNorm.H3).gamma, k_sq**3)
    assert spectral_weights(grid32, RegNorm.H2).gamma_reg[0, 0] == 1.0


def test_spectral_weights_are_read_only(grid32):
    with pytest.raises(ValueError):
        spectral_weights(grid32, RegNorm.H2).gamma[0, 0] = 5.0


# ============== Leray projection ==============


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**16))
def test_projection_is_idempotent_and_divergence_free(seed):
    grid = Grid.square(16)
    b = np.random.default_rng(seed).standard_normal(grid.vector_shape)
    p = project_div_free(b)
    np.testing.assert_allclose(project_div_free(p), p, atol=1e-12)
    assert np.max(np.abs(divergence(p))) <= 1e-10 * np.max(np.abs(p))


def test_projection_keeps_mean(grid32):
    b = np.ones(grid32.vector_shape)
    np.testing.assert_allclose(project_div_free(b), b, atol=1e-14)


def test_projection_is_symmetric(grid32, rng):
    u = rng.standard_normal(grid32.vector_shape)
    w = rng.standard_normal(grid32.vector_shape)
    assert inner(project_div_free(u), w) == pytest.approx(inner(u, project_div_free(w)), abs=1e-10)


# ============== Restriction / prolongation ==============


def test_restrict_after_prolong_is_identity(grid32, rng):
    u = band_limited_random(grid32, rng)
    np.testing.assert_allclose(restrict(prolong(u)), u, atol=1e-12)


def test_prolongation_reproduces_trig_on_fine_grid(grid32):
    x1, x2 = grid32.coords
    fx1, fx2 = grid32.fine().coords
    u = np.cos(3 * x1) + np.sin(x2)
    np.testing.assert_allclose(prolong(u), np.cos(3 * fx1) + np.sin(fx2), atol=1e-12)


def test_restriction_is_adjoint_of_prolongation(grid32, rng):
    fine = grid32.fine()
    u = band_limited_random(fine, rng)
    w = band_limited_random(grid32, rng)
    lhs = inner(restrict(u), w)
    rhs = inner(u, prolong(w))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_resample_to_rectangular_grid(grid32):
    x1, x2 = grid32.coords
    target = Grid((16, 64))
    t1, t2 = target.coords
    np.testing.assert_allclose(resample(np.sin(x1) * np.cos(x2), target), np.sin(t1) * np.cos(t2), atol=1e-12)


def test_fourier_relative_error_of_identical_field_is_zero(grid32):
    x1, _ = grid32.coords
    assert fourier_relative_error(np.sin(x1), prolong(np.sin(x1))) < 1e-14


# ============== Cut-off filters ==============


def test_low_and_high_band_partition_field(grid32, rng):
    u = rng.standard_normal(grid32.shape)
    np.testing.assert_allclose(cutoff_filter(u, Band.LOW) + cutoff_filter(u, Band.HIGH), u, atol=1e-12)


def test_low_band_cutoff(grid32):
    x1, _ = grid32.coords
    low_mode = np.cos(7 * x1)
    high_mode = np.cos(8 * x1)
    np.testing.assert_allclose(cutoff_filter(low_mode, "low"), low_mode, atol=1e-12)
    np.testing.assert_allclose(cutoff_filter(high_mode, "low"), 0.0, atol=1e-12)


def test_band_limited_random_is_normalized_and_reproducible(grid32):
    a = band_limited_random(grid32, np.random.default_rng(7), components=2)
    b = band_limited_random(grid32, np.random.default_rng(7), components=2)
    assert a.shape == grid32.vector_shape
    assert np.max(np.abs(a)) == pytest.approx(1.0)
    np.testing.assert_array_equal(a, b)
