"""수송 솔버 테스트"""

import numpy as np
import pytest

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.config import HessianMode, Scheme, SchemeConfig, SmoothVariant
from vreg_app.services.errors import GridError, MissingAdjointError, TrajectoryError, TransportBlowUpError
from vreg_app.services.problems.synthetic import smooth_image, smooth_velocity
from vreg_app.services.spectral import band_limited_random, project_div_free
from vreg_app.services.transport import (
    TimeGrid,
    make_transport,
    resolve_time_grid,
    solve_state,
    summarize_jacobian,
    trace_characteristics,
)
from vreg_app.services.transport.types import BLOWUP_FACTOR, MIN_STEPS

ALL_SCHEMES = [SchemeConfig(scheme=Scheme.RK2A, cfl=0.2), SchemeConfig(scheme=Scheme.RK2, cfl=0.2), SchemeConfig()]


def _translation(grid, speed):
    v = grid.zeros_vector()
    v[0] = speed
    return v


# ============== time grid ==============


def test_time_grid_follows_cfl_rule(grid32):
    v = _translation(grid32, 1.0)
    # speed / h = 32 / 2π ≈ 5.09
    assert resolve_time_grid(v, SchemeConfig(cfl=1.0)).nt == 6
    assert resolve_time_grid(v, SchemeConfig(scheme=Scheme.RK2A, cfl=0.2)).nt == 26


def test_time_grid_minimum_and_override(grid32):
    assert resolve_time_grid(grid32.zeros_vector(), SchemeConfig()).nt == MIN_STEPS
    assert resolve_time_grid(_translation(grid32, 1.0), SchemeConfig(nt=7)).nt == 7


def test_time_grid_rejects_zero_steps():
    with pytest.raises(ValueError):
        TimeGrid(0)


# ============== state ==============


@pytest.mark.parametrize("cfg", ALL_SCHEMES, ids=lambda c: c.scheme.value)
def test_zero_velocity_is_identity(grid32, rng, cfg):
    m0 = band_limited_random(grid32, rng)
    traj = solve_state(grid32.zeros_vector(), m0, cfg)
    assert traj.shape == (MIN_STEPS + 1,) + grid32.shape
    np.testing.assert_allclose(traj[-1], m0, atol=1e-12)


@pytest.mark.parametrize(
    "cfg, tol",
    [(SchemeConfig(scheme=Scheme.RK2A, cfl=0.2), 1e-3), (SchemeConfig(cfl=1.0), 1e-4)],
    ids=["rk2a", "sl"],
)
def test_constant_velocity_translates_image(grid64, cfg, tol):
    x1, x2 = grid64.coords
    m0 = np.sin(x1) * np.cos(x2)
    m1 = solve_state(_translation(grid64, 0.5), m0, cfg)[-1]
    np.testing.assert_allclose(m1, np.sin(x1 - 0.5) * np.cos(x2), atol=tol)


def test_state_does_not_modify_inputs(grid32, rng):
    v = 0.3 * band_limited_random(grid32, rng, components=2)
    m0 = band_limited_random(grid32, rng)
    v_copy, m_copy = v.copy(), m0.copy()
    solve_state(v, m0, SchemeConfig())
    np.testing.assert_array_equal(v, v_copy)
    np.testing.assert_array_equal(m0, m_copy)


def test_state_rejects_grid_mismatch(grid32):
    solver = make_transport(grid32.zeros_vector(), SchemeConfig())
    with pytest.raises(GridError):
        solver.solve_state(np.zeros((16, 16)))


def test_rk2_blow_up_is_reported(grid32, rng):
    cfg = SchemeConfig(scheme=Scheme.RK2, cfl=0.2, nt=2)
    m0 = band_limited_random(grid32, rng)
    with pytest.raises(TransportBlowUpError):
        solve_state(_translation(grid32, 20.0), m0, cfg)


def test_blow_up_factor():
    assert BLOWUP_FACTOR == 1e3


# ============== adjoint ==============


def test_rk2a_adjoint_conserves_mass(grid64):
    v = smooth_velocity(SmoothVariant.A, grid64)
    lam1 = smooth_image(SmoothVariant.A, grid64)
    lam = make_transport(v, SchemeConfig(scheme=Scheme.RK2A, cfl=0.2)).solve_adjoint(lam1)
    assert np.sum(lam[0]) == pytest.approx(np.sum(lam1), rel=1e-10)


def test_sl_adjoint_approximately_conserves_mass(grid64):
    v = smooth_velocity(SmoothVariant.A, grid64)
    lam1 = smooth_image(SmoothVariant.A, grid64)
    lam = make_transport(v, SchemeConfig()).solve_adjoint(lam1)
    assert np.sum(lam[0]) == pytest.approx(np.sum(lam1), rel=1e-2)


@pytest.mark.parametrize("cfg", ALL_SCHEMES, ids=lambda c: c.scheme.value)
def test_full_newton_inc_adjoint_requires_adjoint_trajectory(grid32, cfg):
    solver = make_transport(grid32.zeros_vector(), cfg)
    with pytest.raises(MissingAdjointError):
        solver.solve_inc_adjoint(grid32.zeros_vector(), grid32.zeros(), mode=HessianMode.FULL_NEWTON)


def test_inc_state_rejects_short_trajectory(grid32):
    solver = make_transport(grid32.zeros_vector(), SchemeConfig(nt=4))
    with pytest.raises(TrajectoryError):
        solver.solve_inc_state(grid32.zeros_vector(), np.zeros((3,) + grid32.shape))


def test_gn_inc_adjoint_matches_adjoint(grid32, rng):
    v = 0.3 * band_limited_random(grid32, rng, components=2)
    lam1 = band_limited_random(grid32, rng)
    solver = make_transport(v, SchemeConfig())
    np.testing.assert_allclose(solver.solve_inc_adjoint(v, lam1), solver.solve_adjoint(lam1))


def test_inc_state_is_zero_for_zero_perturbation(grid32, rng):
    v = 0.3 * band_limited_random(grid32, rng, components=2)
    solver = make_transport(v, SchemeConfig(scheme=Scheme.RK2A, cfl=0.2))
    traj = solver.solve_state(band_limited_random(grid32, rng))
    np.testing.assert_array_equal(solver.solve_inc_state(grid32.zeros_vector(), traj), 0.0)


# ============== characteristics / jacobian ==============


def test_characteristics_of_constant_velocity_are_exact(grid32):
    chars = trace_characteristics(_translation(grid32, 0.7), 0.25)
    np.testing.assert_allclose(chars.departure[0], grid32.coords[0] - 0.175, atol=1e-12)
    np.testing.assert_allclose(chars.departure[1], grid32.coords[1], atol=1e-12)


def test_characteristics_reject_non_positive_step(grid32):
    with pytest.raises(ValueError):
        trace_characteristics(grid32.zeros_vector(), 0.0)


@pytest.mark.parametrize("cfg", [SchemeConfig(scheme=Scheme.RK2A, cfl=0.2), SchemeConfig()], ids=["rk2a", "sl"])
def test_divergence_free_velocity_keeps_unit_jacobian(grid64, cfg):
    v = project_div_free(smooth_velocity(SmoothVariant.A, grid64))
    summary = summarize_jacobian(make_transport(v, cfg).jacobian_det())
    assert summary.diffeomorphic
    assert summary.max_deviation <= 1e-2


def test_compressible_velocity_changes_jacobian(grid64):
    v = smooth_velocity(SmoothVariant.A, grid64)
    J = make_transport(v, SchemeConfig()).jacobian_det()
    assert np.max(np.abs(J - 1.0)) > 1e-2
    assert np.min(J) > 0.0


# ============== op counts ==============


def test_sl_interpolation_counts(grid64):
    v = smooth_velocity(SmoothVariant.A, grid64)
    m0 = smooth_image(SmoothVariant.A, grid64)
    cfg = SchemeConfig()
    nt = resolve_time_grid(v, cfg).nt

    with tracked_ops() as ops:
        make_transport(v, cfg).solve_state(m0)
    assert ops.interp == 2 + nt

    with tracked_ops() as ops:
        make_transport(v, cfg).solve_adjoint(m0)
    assert ops.interp == 2 + nt + 1


def test_rk2a_uses_no_interpolation(grid32, rng):
    v = 0.3 * band_limited_random(grid32, rng, components=2)
    with tracked_ops() as ops:
        solve_state(v, band_limited_random(grid32, rng), SchemeConfig(scheme=Scheme.RK2A, cfl=0.2))
    assert ops.interp == 0
    assert ops.fft > 0
