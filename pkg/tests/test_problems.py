"""합성 문제 / 전처리 / 파일 입력 테스트"""

import numpy as np
import pytest

from vreg_app.adapters.field_io import write_field
from vreg_app.adapters.pgm_io import write_pgm
from vreg_app.schemas.config import Model, SmoothVariant
from vreg_app.services.errors import FieldFormatError, GridError, NonFiniteFieldError
from vreg_app.services.inverse import evaluate_objective
from vreg_app.services.problems import (
    PAIR_SCHEME,
    Provenance,
    RegistrationProblem,
    gaussian_multiplier,
    gaussian_smooth,
    load_image,
    load_problem,
    make_smooth_problem,
    make_synthetic_pair,
    normalize_intensity,
    preprocess,
    smooth_image,
    smooth_velocity,
)
from vreg_app.services.spectral import Grid, norm, prolong, restrict
from vreg_app.services.transport import solve_state

# ============== SMOOTH A / B ==============


@pytest.mark.parametrize("variant, peak", [(SmoothVariant.A, 0.5), (SmoothVariant.B, 1.0)])
def test_smooth_velocity_amplitude(grid64, variant, peak):
    assert np.max(np.abs(smooth_velocity(variant, grid64))) == pytest.approx(peak)


@pytest.mark.parametrize("variant", list(SmoothVariant))
def test_smooth_fields_are_band_limited(grid64, variant):
    v = smooth_velocity(variant, grid64)
    m = smooth_image(variant, grid64)
    np.testing.assert_allclose(prolong(restrict(v)), v, atol=1e-12)
    np.testing.assert_allclose(prolong(restrict(m)), m, atol=1e-12)


@pytest.mark.parametrize("variant", list(SmoothVariant))
def test_smooth_fields_nest_across_grids(variant):
    coarse, fine = Grid.square(32), Grid.square(64)
    fine_v = smooth_velocity(variant, fine)
    np.testing.assert_allclose(fine_v[:, ::2, ::2], smooth_velocity(variant, coarse), atol=1e-14)
    np.testing.assert_allclose(smooth_image(variant, fine)[::2, ::2], smooth_image(variant, coarse), atol=1e-14)


def test_smooth_image_ranges(grid64):
    for variant in SmoothVariant:
        m = smooth_image(variant, grid64)
        assert m.min() >= 0.0
        assert m.max() <= 1.0 + 1e-12


# ============== synthetic pairs ==============


def test_zero_velocity_pair_is_identical(grid32):
    m = smooth_image(SmoothVariant.A, grid32)
    problem = make_synthetic_pair(grid32.zeros_vector(), m)
    np.testing.assert_allclose(problem.m_ref, problem.m_tmpl, atol=1e-12)
    assert problem.provenance == Provenance.SYNTHETIC


def test_true_velocity_registers_pair(smooth_a_64):
    value = evaluate_objective(smooth_a_64.v_star, smooth_a_64, Model(), PAIR_SCHEME)
    assert value.mismatch <= 1e-4 * norm(smooth_a_64.m_tmpl) ** 2
    assert smooth_a_64.initial_residual > 0.1


def test_reverse_transport_recovers_template(smooth_a_64):
    recovered = solve_state(-smooth_a_64.v_star, smooth_a_64.m_ref, PAIR_SCHEME)[-1]
    assert norm(recovered - smooth_a_64.m_tmpl) <= 5e-2 * norm(smooth_a_64.m_tmpl)


def test_smooth_problem_returns_true_velocity(grid32):
    problem, v_star = make_smooth_problem(SmoothVariant.B, grid32)
    np.testing.assert_array_equal(problem.v_star, v_star)
    np.testing.assert_array_equal(problem.m_tmpl, smooth_image(SmoothVariant.B, grid32))


def test_smooth_problem_reference_is_transported_template(grid32):
    problem, v_star = make_smooth_problem(SmoothVariant.A, grid32)
    expected = solve_state(v_star, smooth_image(SmoothVariant.A, grid32), PAIR_SCHEME)[-1]
    np.testing.assert_array_equal(problem.m_ref, expected)


def test_problem_rejects_grid_mismatch():
    with pytest.raises(GridError):
        RegistrationProblem(m_ref=np.zeros((16, 16)), m_tmpl=np.zeros((32, 32)))


def test_coarse_problem_halves_grid(smooth_a_32):
    coarse = smooth_a_32.coarse()
    assert coarse.grid.n == (16, 16)
    assert coarse.v_star.shape == (2, 16, 16)


# ============== preprocessing ==============


def test_gaussian_smoothing_preserves_mean(grid32, rng):
    image = rng.random(grid32.shape)
    assert gaussian_smooth(image, 2.0).mean() == pytest.approx(image.mean(), rel=1e-12)


def test_gaussian_multiplier_is_one_at_zero_mode(grid32):
    multiplier = gaussian_multiplier(grid32, 1.0)
    assert multiplier[0, 0] == 1.0
    assert multiplier[16, 0] == pytest.approx(np.exp(-0.5 * np.pi**2))


def test_zero_sigma_is_identity(grid32, rng):
    image = rng.random(grid32.shape)
    np.testing.assert_array_equal(gaussian_smooth(image, 0.0), image)


def test_normalize_intensity_maps_to_unit_interval(grid32, rng):
    image = 3.0 + 2.0 * rng.random(grid32.shape)
    normalized, (lo, hi) = normalize_intensity(image)
    assert normalized.min() == 0.0
    assert normalized.max() == 1.0
    assert (lo, hi) == (image.min(), image.max())


def test_constant_image_normalizes_to_zero(grid32):
    normalized = preprocess(np.full(grid32.shape, 7.0))
    np.testing.assert_array_equal(normalized, 0.0)


def test_preprocess_rejects_non_finite(grid32):
    image = grid32.zeros()
    image[0, 0] = np.inf
    with pytest.raises(NonFiniteFieldError):
        preprocess(image)


# ============== file ingestion ==============


def test_load_problem_from_vrf_files(tmp_path, grid32):
    m_ref = smooth_image(SmoothVariant.A, grid32)
    m_tmpl = smooth_image(SmoothVariant.B, grid32)
    write_field(tmp_path / "ref.vrf", m_ref)
    write_field(tmp_path / "tmpl.vrf", m_tmpl)
    problem = load_problem(tmp_path / "ref.vrf", tmp_path / "tmpl.vrf", grid32, sigma=0.0)
    assert problem.provenance == Provenance.FILE
    assert problem.preprocessing.sigma == 0.0
    np.testing.assert_allclose(problem.m_ref, normalize_intensity(m_ref)[0], atol=1e-14)
    np.testing.assert_allclose(problem.m_tmpl, normalize_intensity(m_tmpl)[0], atol=1e-14)


def test_load_problem_resamples_pgm(tmp_path, rng):
    write_pgm(tmp_path / "ref.pgm", rng.random((24, 40)))
    write_pgm(tmp_path / "tmpl.pgm", rng.random((24, 40)))
    problem = load_problem(tmp_path / "ref.pgm", tmp_path / "tmpl.pgm", Grid.square(32))
    assert problem.grid.n == (32, 32)
    assert problem.m_ref.min() == pytest.approx(0.0)
    assert problem.m_ref.max() == pytest.approx(1.0)


def test_load_image_rejects_unknown_format(tmp_path):
    path = tmp_path / "image.png"
    path.write_bytes(b"\x89PNG")
    with pytest.raises(FieldFormatError):
        load_image(path)


def test_load_image_rejects_vector_field(tmp_path, grid32):
    write_field(tmp_path / "v.vrf", grid32.zeros_vector())
    with pytest.raises(FieldFormatError):
        load_image(tmp_path / "v.vrf")
