"""진단 프로토콜 테스트"""

import numpy as np
import pytest

from vreg_app.schemas.common import UNSTABLE_SENTINEL
from vreg_app.schemas.config import (
    CoarseSolver,
    Model,
    PrecondChoice,
    PrecondKind,
    RunConfig,
    Scheme,
    SchemeConfig,
    SmoothVariant,
    Subcommand,
)
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.diag import (
    PROTOCOLS,
    adjoint_error,
    gradient_check,
    op_count_check,
    reference_convergence,
    registry,
    relative_adjoint_error,
    run_protocol,
    self_convergence,
)
from vreg_app.services.diag.op_count import expected_interp
from vreg_app.services.diag.registry import benchmark_choices
from vreg_app.services.errors import UnknownProtocolError
from vreg_app.services.problems import smooth_image, smooth_velocity
from vreg_app.services.spectral import Grid


@pytest.fixture(scope="module")
def adjoint_report(grid64):
    return adjoint_error(smooth_velocity(SmoothVariant.A, grid64), smooth_image(SmoothVariant.A, grid64))


# ============== adjoint error ==============


def test_rk2a_adjoint_is_exact_transpose(adjoint_report):
    for delta in adjoint_report.column("delta_adj", scheme="rk2a"):
        assert delta <= 1e-12


def test_sl_adjoint_error_decreases_with_time_steps(adjoint_report):
    rows = [row for row in adjoint_report.rows if row["scheme"] == "sl" and row["cfl"] is None]
    assert [row["nt"] for row in rows] == [3, 5, 11, 21, 102]
    deltas = [row["delta_adj"] for row in rows]
    assert all(later < earlier for earlier, later in zip(deltas, deltas[1:]))


def test_sl_adjoint_error_at_cfl_rule(adjoint_report):
    (delta,) = adjoint_report.column("delta_adj", scheme="sl", cfl=0.2)
    assert delta <= 1e-4
    assert adjoint_report.summary["sl"] >= delta


def test_relative_adjoint_error_of_zero_image(grid32):
    delta, nt = relative_adjoint_error(grid32.zeros_vector(), grid32.zeros(), SchemeConfig())
    assert delta == 0.0
    assert nt == 2


def test_unstable_scheme_is_marked(grid32, rng):
    v = grid32.zeros_vector()
    v[0] = 20.0
    m0 = rng.standard_normal(grid32.shape)
    report = adjoint_error(v, m0, nt_list=(2,), schemes=(Scheme.RK2,))
    assert report.column("delta_adj", nt=2) == [UNSTABLE_SENTINEL]
    assert report.summary["rk2"] == UNSTABLE_SENTINEL


# ============== op counts ==============


def test_sl_op_counts_match_closed_form(grid64):
    v = smooth_velocity(SmoothVariant.A, grid64)
    report = op_count_check(v, smooth_image(SmoothVariant.A, grid64), SchemeConfig())
    assert report.summary["all_within_slack"]
    (state,) = [row for row in report.rows if row["solve"] == "state"]
    (adjoint,) = [row for row in report.rows if row["solve"] == "adjoint"]
    assert state["interp"] == 2 + state["nt"]
    assert adjoint["interp"] == 2 + adjoint["nt"] + 1


def test_rk2a_op_counts_use_no_interpolation(grid32):
    v = smooth_velocity(SmoothVariant.A, grid32)
    report = op_count_check(v, smooth_image(SmoothVariant.A, grid32), SchemeConfig(scheme=Scheme.RK2A, cfl=0.2))
    assert report.column("interp") == [0, 0, 0, 0, 0]
    assert all(fft > 0 for fft in report.column("fft"))


def test_expected_interp_for_unknown_solve():
    assert expected_interp("jacobian", Scheme.SL, 5) is None
    assert expected_interp("state", Scheme.RK2, 5) == 0


# ============== convergence ==============


def test_self_convergence_rows(grid32):
    report = self_convergence(SmoothVariant.A, SchemeConfig(), [grid32, grid32.fine()])
    assert len(report.rows) == 1
    row = report.rows[0]
    assert (row["n"], row["n_fine"]) == (32, 64)
    assert 0.0 < row["state_error"] < 1e-1
    assert 0.0 < row["adjoint_error"] < 1e-1


def test_self_convergence_requires_doubling_grids(grid32):
    with pytest.raises(ValueError):
        self_convergence(SmoothVariant.A, SchemeConfig(), [grid32, Grid.square(48)])
    with pytest.raises(ValueError):
        self_convergence(SmoothVariant.A, SchemeConfig(), [grid32])


@pytest.mark.slow
@pytest.mark.parametrize(
    "cfg", [SchemeConfig(scheme=Scheme.RK2A, cfl=0.2), SchemeConfig(scheme=Scheme.SL, cfl=0.2)], ids=["rk2a", "sl"]
)
def test_self_convergence_errors_decrease(cfg):
    grids = [Grid.square(64), Grid.square(128), Grid.square(256)]
    report = self_convergence(SmoothVariant.A, cfg, grids)
    states, adjoints = report.column("state_error"), report.column("adjoint_error")
    assert states[1] < states[0]
    assert adjoints[1] < adjoints[0]
    if cfg.scheme == Scheme.SL:
        assert states[0] < 1e-4


@pytest.mark.slow
@pytest.mark.parametrize("scheme", [Scheme.SL, Scheme.RK2A])
def test_smooth_b_stays_stable_on_fine_grid(scheme):
    cfg = SchemeConfig(scheme=scheme, cfl=0.2)
    report = self_convergence(SmoothVariant.B, cfg, [Grid.square(128), Grid.square(256)])
    assert not report.summary["unstable"]


def test_reference_convergence_improves_with_smaller_cfl(grid32):
    report = reference_convergence(SmoothVariant.A, [0.2, 5.0], grid32)
    small, large = report.column("state_error")
    assert small < large
    assert report.summary["reference"] == "rk2a(0.2)"


# ============== registry ==============


def test_registry_lists_all_protocols():
    assert set(PROTOCOLS) == {
        "self-convergence",
        "reference-convergence",
        "adjoint-error",
        "gradient-check",
        "hessian-symmetry",
        "kkt-bench",
        "eig-study",
        "op-count",
    }


def test_unknown_protocol_raises():
    cfg = RunConfig(subcommand=Subcommand.DIAG, protocol="nope", grid=(16, 16))
    with pytest.raises(UnknownProtocolError, match="adjoint-error"):
        run_protocol("nope", cfg)


def test_run_protocol_op_count():
    cfg = RunConfig(subcommand=Subcommand.DIAG, protocol="op-count", grid=(16, 16))
    report = run_protocol("op-count", cfg)
    assert report.protocol == "op-count"
    assert report.grid_sizes == [[16, 16]]
    assert report.interp_count > 0


@pytest.mark.parametrize("at_v_star", [True, False])
def test_kkt_bench_protocol_passes_linearization_point(monkeypatch, at_v_star):
    calls = []

    def fake_benchmark(**kwargs):
        calls.append(kwargs)
        return ErrorReport(protocol="kkt-bench", summary={"at_v_star": kwargs["at_v_star"]})

    monkeypatch.setattr(registry, "kkt_benchmark", fake_benchmark)
    cfg = RunConfig(subcommand=Subcommand.DIAG, protocol="kkt-bench", grid=(16, 16), kkt_at_v_star=at_v_star)
    report = run_protocol("kkt-bench", cfg)
    assert [call["at_v_star"] for call in calls] == [at_v_star, at_v_star]
    assert report.summary["at_v_star"] is at_v_star


def test_benchmark_choices_always_include_reg():
    labels = [(c.kind, c.coarse_solver) for c in benchmark_choices(PrecondChoice())]
    assert labels == [
        (PrecondKind.REG, CoarseSolver.CHEB),
        (PrecondKind.TWO_LEVEL, CoarseSolver.PCG),
        (PrecondKind.TWO_LEVEL, CoarseSolver.CHEB),
    ]
    selected = PrecondChoice(kind=PrecondKind.TWO_LEVEL, coarse_solver=CoarseSolver.PCG)
    assert [c.kind for c in benchmark_choices(selected)] == [PrecondKind.REG, PrecondKind.TWO_LEVEL]


def test_reports_are_reproducible_for_fixed_seed(smooth_a_32):
    first = gradient_check(smooth_a_32, Model(), SchemeConfig(), seed=11, steps=(1e-2,))
    second = gradient_check(smooth_a_32, Model(), SchemeConfig(), seed=11, steps=(1e-2,))
    assert first.rows == second.rows
    assert np.isfinite(first.summary["min_error"])
