"""이름 → 진단 프로토콜. 각 프로토콜은 RunConfig 에서 인자를 만든다"""

from __future__ import annotations

import logging
from typing import Callable

from vreg_app.schemas.config import CoarseSolver, PrecondChoice, PrecondKind, RunConfig, Scheme
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.diag.adjoint_error import DEFAULT_NT, adjoint_error
from vreg_app.services.diag.checks import gradient_check, hessian_symmetry_check
from vreg_app.services.diag.convergence import reference_convergence, self_convergence
from vreg_app.services.diag.eig_study import eig_study
from vreg_app.services.diag.kkt_bench import KKTRightHandSide, kkt_benchmark
from vreg_app.services.diag.op_count import op_count_check
from vreg_app.services.errors import UnknownProtocolError
from vreg_app.services.problems.synthetic import make_smooth_problem, smooth_image, smooth_velocity
from vreg_app.services.spectral.grid import Grid

logger = logging.getLogger(__name__)

Protocol = Callable[[RunConfig], ErrorReport]

REFERENCE_CFLS = [0.2, 0.5, 1.0, 2.0, 5.0]
STUDY_BETAS = [1e-1, 1e-2, 1e-3]
# 해 일치도 실험의 KKT 허용오차
AGREEMENT_TOL = 1e-12


def _grid(cfg: RunConfig) -> Grid:
    return Grid(cfg.grid)


def _self_convergence(cfg: RunConfig) -> ErrorReport:
    grid = _grid(cfg)
    return self_convergence(cfg.variant, cfg.newton.gradient_scheme, [grid, grid.fine(), grid.fine().fine()])


def _reference_convergence(cfg: RunConfig) -> ErrorReport:
    return reference_convergence(cfg.variant, REFERENCE_CFLS, _grid(cfg))


def _adjoint_error(cfg: RunConfig) -> ErrorReport:
    grid = _grid(cfg)
    return adjoint_error(
        smooth_velocity(cfg.variant, grid),
        smooth_image(cfg.variant, grid),
        DEFAULT_NT,
        schemes=(Scheme.RK2, Scheme.RK2A, Scheme.SL),
    )


def _gradient_check(cfg: RunConfig) -> ErrorReport:
    problem, _ = make_smooth_problem(cfg.variant, _grid(cfg))
    return gradient_check(problem, cfg.model, cfg.newton.gradient_scheme, seed=cfg.seed)


def _hessian_symmetry(cfg: RunConfig) -> ErrorReport:
    problem, _ = make_smooth_problem(cfg.variant, _grid(cfg))
    return hessian_symmetry_check(
        problem, cfg.model, cfg.newton.resolved_hessian_scheme, seed=cfg.seed, mode=cfg.newton.hessian_mode
    )


def benchmark_choices(selected: PrecondChoice) -> list[PrecondChoice]:
    """REG 는 항상 기준으로 넣고, two-level 이 선택되지 않았으면 PCG/CHEB 둘 다 비교"""
    reg = selected.model_copy(update={"kind": PrecondKind.REG})
    if selected.kind == PrecondKind.TWO_LEVEL:
        return [reg, selected]
    two_level = selected.model_copy(update={"kind": PrecondKind.TWO_LEVEL})
    return [
        reg,
        two_level.model_copy(update={"coarse_solver": CoarseSolver.PCG}),
        two_level.model_copy(update={"coarse_solver": CoarseSolver.CHEB}),
    ]


def _kkt_bench(cfg: RunConfig) -> ErrorReport:
    problem, _ = make_smooth_problem(cfg.variant, _grid(cfg))
    choices = benchmark_choices(cfg.precond)
    common = dict(
        problem=problem,
        model=cfg.model,
        betas=[cfg.model.beta_v],
        grids=[_grid(cfg)],
        choices=choices,
        scheme=cfg.newton.resolved_hessian_scheme,
        max_inner_iter=cfg.newton.max_inner_iter,
        at_v_star=cfg.kkt_at_v_star,
        seed=cfg.seed,
    )
    iterations = kkt_benchmark(**common, rhs_kind=KKTRightHandSide.GRADIENT, tol=1e-6)
    agreement = kkt_benchmark(**common, rhs_kind=KKTRightHandSide.SOLUTION, tol=AGREEMENT_TOL)
    return agreement.model_copy(
        update={
            "rows": iterations.rows + agreement.rows,
            "wall_time": iterations.wall_time + agreement.wall_time,
            "fft_count": iterations.fft_count + agreement.fft_count,
            "interp_count": iterations.interp_count + agreement.interp_count,
        }
    )


def _eig_study(cfg: RunConfig) -> ErrorReport:
    problem, _ = make_smooth_problem(cfg.variant, _grid(cfg))
    return eig_study(problem, cfg.model, STUDY_BETAS, cfg.precond, seed=cfg.seed)


def _op_count(cfg: RunConfig) -> ErrorReport:
    grid = _grid(cfg)
    return op_count_check(
        smooth_velocity(cfg.variant, grid), smooth_image(cfg.variant, grid), cfg.newton.gradient_scheme
    )


PROTOCOLS: dict[str, Protocol] = {
    "self-convergence": _self_convergence,
    "reference-convergence": _reference_convergence,
    "adjoint-error": _adjoint_error,
    "gradient-check": _gradient_check,
    "hessian-symmetry": _hessian_symmetry,
    "kkt-bench": _kkt_bench,
    "eig-study": _eig_study,
    "op-count": _op_count,
}


def run_protocol(name: str, cfg: RunConfig) -> ErrorReport:
    protocol = PROTOCOLS.get(name)
    if protocol is None:
        raise UnknownProtocolError(f"알 수 없는 프로토콜 '{name}'. 사용 가능: {', '.join(PROTOCOLS)}")
    logger.info(f"진단 프로토콜 시작: {name}")
    report = protocol(cfg)
    logger.info(f"진단 프로토콜 종료: {name} ({report.wall_time:.2f}s)")
    return report
