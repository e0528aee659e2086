"""KKT 전처리기 벤치마크

β, 격자, 전처리기 조합마다 H δv = rhs 를 split 좌표 PCG 로 풀고 반복 수, matvec 수,
전처리기 시간 비율, REG 해와의 일치도를 기록한다.
선형화 지점은 기본이 v* (at_v_star=False 면 v = 0).
rhs 는 두 가지: "solution" (참 해 x* = −½v* 에서 rhs = Hx*, 오차도 기록) / "gradient" (rhs = −g).
"""

from __future__ import annotations

import logging
import time
from enum import Enum

import numpy as np

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.config import CoarseSolver, Model, NewtonConfig, PrecondChoice, PrecondKind, SchemeConfig
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.inverse.newton import NewtonSolver
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.spectral.operators import norm

logger = logging.getLogger(__name__)


class KKTRightHandSide(str, Enum):
    SOLUTION = "solution"
    GRADIENT = "gradient"


def precond_label(choice: PrecondChoice) -> str:
    if choice.kind == PrecondKind.REG:
        return "reg"
    if choice.coarse_solver == CoarseSolver.CHEB:
        return f"2l-cheb({choice.cheb_iters})"
    return f"2l-pcg({choice.eps_scale:g})"


def _solve_one(
    problem: RegistrationProblem,
    model: Model,
    scheme: SchemeConfig,
    choice: PrecondChoice,
    rhs_kind: KKTRightHandSide,
    tol: float,
    max_inner_iter: int,
    at_v_star: bool,
    seed: int,
) -> tuple[np.ndarray, dict]:
    cfg = NewtonConfig(gradient_scheme=scheme, max_inner_iter=max_inner_iter)
    solver = NewtonSolver(problem, model, cfg, choice, seed=seed)
    grid = problem.grid
    v = problem.v_star if at_v_star and problem.v_star is not None else grid.zeros_vector()
    v = solver.space.project(v)
    grad = solver.space.evaluate_gradient(v)

    x_true = None
    if rhs_kind == KKTRightHandSide.SOLUTION:
        if problem.v_star is None:
            raise ValueError("solution 모드에는 v* 가 있는 합성 문제가 필요합니다")
        x_true = solver.space.project(-0.5 * problem.v_star)
        rhs = solver.space.hessian_matvec(x_true, solver.space.hessian_context(v, grad))
    else:
        rhs = -grad.g

    precond = solver.precond
    precond_before = precond.elapsed if precond is not None else 0.0
    start = time.perf_counter()
    dv, result, op = solver.solve_kkt(v, grad, rhs, tol)
    solve_time = time.perf_counter() - start
    precond_time = (precond.elapsed if precond is not None else 0.0) - precond_before

    row = {
        "n": grid.n[0],
        "beta_v": model.beta_v,
        "precond": precond_label(choice),
        "rhs": rhs_kind.value,
        "tol": tol,
        "iterations": result.iterations,
        "matvecs": op.matvecs,
        "converged": result.converged,
        "residual_rel": result.relative_residual,
        "solve_time": solve_time,
        "precond_share": precond_time / solve_time if solve_time > 0 else 0.0,
        "error_true": norm(dv - x_true) / norm(x_true) if x_true is not None else None,
    }
    return dv, row


def kkt_benchmark(
    problem: RegistrationProblem,
    model: Model,
    betas: list[float],
    grids: list[Grid],
    choices: list[PrecondChoice],
    scheme: SchemeConfig | None = None,
    rhs_kind: KKTRightHandSide = KKTRightHandSide.GRADIENT,
    tol: float = 1e-6,
    max_inner_iter: int = 500,
    at_v_star: bool = True,
    seed: int = 0,
) -> ErrorReport:
    """(β, grid, 전처리기) 별 KKT solve. REG 가 목록에 있으면 agreement 를 REG 해 기준으로 잰다"""
    scheme = scheme or SchemeConfig()
    start = time.perf_counter()
    rows = []
    with tracked_ops() as ops:
        for grid in grids:
            grid_problem = problem if grid.n == problem.grid.n else problem.resampled(grid)
            for beta in betas:
                beta_model = model.with_beta(beta)
                solutions: dict[str, np.ndarray] = {}
                block = []
                for choice in choices:
                    dv, row = _solve_one(
                        grid_problem, beta_model, scheme, choice, rhs_kind, tol, max_inner_iter, at_v_star, seed
                    )
                    solutions[row["precond"]] = dv
                    block.append(row)
                    logger.info(
                        f"kkt-bench n={grid.n[0]} β={beta:g} {row['precond']}: "
                        f"iters={row['iterations']}, matvecs={row['matvecs']}"
                    )
                baseline = solutions.get("reg")
                for row in block:
                    dv = solutions[row["precond"]]
                    row["agreement"] = (
                        norm(dv - baseline) / norm(baseline) if baseline is not None and norm(baseline) > 0 else None
                    )
                rows.extend(block)

    return ErrorReport(
        protocol="kkt-bench",
        grid_sizes=[list(g.n) for g in grids],
        scheme=scheme.scheme.value,
        cfl=scheme.cfl,
        seed=seed,
        rows=rows,
        summary={
            "rhs": rhs_kind.value,
            "tol": tol,
            "at_v_star": at_v_star,
            "max_agreement": max((r["agreement"] for r in rows if r["agreement"] is not None), default=None),
        },
        wall_time=time.perf_counter() - start,
        fft_count=ops.fft,
        interp_count=ops.interp,
    )
