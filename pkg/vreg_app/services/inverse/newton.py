"""비정확 (Gauss-)Newton-Krylov 외부 반복

각 반복: gradient → split KKT 를 PCG(η_k) 로 풀기 → Armijo backtracking.
η_k = min(η_max, √(‖g_k‖∞/‖g_0‖∞)). PCG 가 쓸 만한 방향을 못 주면 Sobolev gradient −(β𝒜)⁻¹g 로 대체한다.
"""

from __future__ import annotations

import logging
import time

import numpy as np

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.common import SolverStatus
from vreg_app.schemas.config import Model, NewtonConfig, PrecondChoice
from vreg_app.schemas.report import IterationRecord, SolverReport
from vreg_app.services.errors import TransportBlowUpError
from vreg_app.services.inverse.krylov import KrylovResult, pcg
from vreg_app.services.inverse.objective import GradientResult, ObjectiveValue, ReducedSpace
from vreg_app.services.precond.regularization import SplitKKTOperator
from vreg_app.services.precond.two_level import TwoLevelPreconditioner, build_preconditioner
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.operators import apply_inv_reg, divergence, inner, norm
from vreg_app.services.transport.solver import jacobian_det, summarize_jacobian

logger = logging.getLogger(__name__)


def div_ratio(u: np.ndarray) -> float:
    """max|∇·u| / max|u|"""
    peak = float(np.max(np.abs(u)))
    return float(np.max(np.abs(divergence(u)))) / peak if peak > 0 else 0.0


class NewtonSolver:
    """축소공간 Newton-Krylov. 한 인스턴스가 한 번의 solve 상태를 가진다"""

    def __init__(
        self,
        problem: RegistrationProblem,
        model: Model,
        cfg: NewtonConfig,
        choice: PrecondChoice | None = None,
        seed: int = 0,
    ):
        self.problem = problem
        self.model = model
        self.cfg = cfg
        self.choice = choice or PrecondChoice()
        self.seed = seed
        self.space = ReducedSpace(
            problem,
            model,
            cfg.gradient_scheme,
            hessian_scheme=cfg.resolved_hessian_scheme,
            hessian_mode=cfg.hessian_mode,
        )
        self._precond: TwoLevelPreconditioner | None = None
        self._precond_built = False

    @property
    def precond(self) -> TwoLevelPreconditioner | None:
        if not self._precond_built:
            self._precond = build_preconditioner(self.problem, self.model, self.choice, seed=self.seed)
            self._precond_built = True
        return self._precond

    # ============== KKT ==============

    def kkt_operator(self, v: np.ndarray, grad: GradientResult) -> SplitKKTOperator:
        """현재 v 의 split KKT 연산자 I + M^{-1/2}𝒬M^{-1/2}"""
        ctx = self.space.hessian_context(v, grad)
        return SplitKKTOperator(
            lambda vt: self.space.data_matvec(vt, ctx),
            self.space.weights,
            self.model.beta_v,
            project=self.space.project if self.space.incompressible else None,
        )

    def solve_kkt(
        self, v: np.ndarray, grad: GradientResult, rhs: np.ndarray, tol: float
    ) -> tuple[np.ndarray, KrylovResult, SplitKKTOperator]:
        """H δv = rhs 를 split 좌표 PCG 로 푼다. 잔차는 split (REG 전처리) 좌표에서 잰다"""
        op = self.kkt_operator(v, grad)
        precond = self.precond
        if precond is not None:
            precond.kkt_tol = tol
            precond.update(v)
        result = pcg(op, op.rhs(rhs), precond=precond, tol=tol, maxiter=self.cfg.max_inner_iter)
        return op.recover(result.x), result, op

    def sobolev_step(self, g: np.ndarray) -> np.ndarray:
        """−(β_v𝒜)⁻¹g (0 모드 정규화)"""
        return -self.space.project(apply_inv_reg(g, self.space.weights, self.model.beta_v))

    # ============== line search ==============

    def line_search(
        self, v: np.ndarray, dv: np.ndarray, current: GradientResult
    ) -> tuple[np.ndarray | None, ObjectiveValue | None, float, int]:
        """Armijo backtracking. 실패하면 (None, None, 0, 횟수)"""
        slope = inner(current.g, dv)
        alpha = 1.0
        for backtracks in range(self.cfg.max_backtracks + 1):
            trial = v + alpha * dv
            try:
                value = self.space.evaluate_objective(trial)
            except TransportBlowUpError as e:
                logger.debug(f"line search: α={alpha:.3e} 에서 수송 발산 ({e})")
                value = None
            if value is not None and value.objective <= current.objective + self.cfg.c1 * alpha * slope:
                return trial, value, alpha, backtracks
            alpha *= self.cfg.shrink
        return None, None, 0.0, self.cfg.max_backtracks

    # ============== outer loop ==============

    def solve(self, v0: np.ndarray | None = None) -> tuple[np.ndarray, SolverReport]:
        cfg = self.cfg
        grid = self.problem.grid
        v = grid.zeros_vector() if v0 is None else self.space.project(v0.copy())
        records: list[IterationRecord] = []
        status, reason = SolverStatus.MAX_ITER, f"최대 반복 {cfg.max_outer_iter} 도달"
        solve_start = time.perf_counter()

        with tracked_ops() as total_ops:
            grad = self.space.evaluate_gradient(v)
            g0 = grad.grad_inf
            pending: dict = {}
            for k in range(cfg.max_outer_iter + 1):
                iter_start = time.perf_counter()
                grad_rel = grad.grad_inf / g0 if g0 > 0 else 0.0
                record = dict(
                    iteration=k,
                    grad_inf=grad.grad_inf,
                    grad_rel=grad_rel,
                    objective=grad.objective,
                    mismatch=grad.mismatch,
                    **pending,
                )
                logger.info(
                    f"[Newton {k:3d}] J={grad.objective:.6e}, ‖g‖∞={grad.grad_inf:.3e}, ‖g‖rel={grad_rel:.3e}, "
                    f"inner={pending.get('inner_iters', 0)}, step={pending.get('step_length', 0.0):.3e}"
                )
                if grad.grad_inf <= cfg.tol_abs or grad_rel <= cfg.tol_rel:
                    records.append(IterationRecord(**record))
                    status, reason = SolverStatus.CONVERGED, f"{k}번째 반복에서 gradient 기준 만족"
                    break
                if k == cfg.max_outer_iter:
                    records.append(IterationRecord(**record))
                    break

                with tracked_ops() as step_ops:
                    step = self._step(v, grad, grad_rel)
                records.append(IterationRecord(**record))
                if step is None:
                    status, reason = SolverStatus.LINE_SEARCH_FAILED, f"{k}번째 반복에서 line search 실패"
                    logger.warning(reason)
                    break
                v, grad, pending = step
                pending.update(
                    wall_time=time.perf_counter() - iter_start,
                    fft_count=step_ops.fft,
                    interp_count=step_ops.interp,
                )

        report = self._report(v, records, status, reason, time.perf_counter() - solve_start)
        report.fft_total = total_ops.fft
        report.interp_total = total_ops.interp
        logger.info(f"Newton 종료: {status.value} ({reason}), ‖r‖rel={report.residual_rel:.3e}")
        return v, report

    def _step(
        self, v: np.ndarray, grad: GradientResult, grad_rel: float
    ) -> tuple[np.ndarray, GradientResult, dict] | None:
        """한 Newton 스텝. line search 실패면 None"""
        forcing = min(self.cfg.forcing_max, float(np.sqrt(grad_rel)))
        precond_before = self.precond.elapsed if self.precond is not None else 0.0
        dv, krylov, op = self.solve_kkt(v, grad, -grad.g, forcing)
        precond_time = (self.precond.elapsed if self.precond is not None else 0.0) - precond_before

        fallback = False
        if krylov.breakdown or not np.all(np.isfinite(dv)) or not inner(grad.g, dv) < 0:
            logger.warning(
                f"KKT 해가 하강 방향이 아님 (breakdown={krylov.breakdown}, iters={krylov.iterations}), Sobolev gradient 사용"
            )
            dv = self.sobolev_step(grad.g)
            fallback = True

        trial, value, alpha, backtracks = self.line_search(v, dv, grad)
        if trial is None or value is None:
            return None
        new_grad = self.space.evaluate_gradient(trial, value)
        info = dict(
            inner_iters=krylov.iterations,
            matvecs=op.matvecs,
            line_search_steps=backtracks,
            step_length=alpha,
            forcing=forcing,
            div_ratio=div_ratio(dv) if self.space.incompressible else None,
            fallback_step=fallback,
            precond_time=precond_time,
        )
        return trial, new_grad, info

    def _report(
        self, v: np.ndarray, records: list[IterationRecord], status: SolverStatus, reason: str, wall_time: float
    ) -> SolverReport:
        scheme = self.cfg.gradient_scheme
        m1 = self.space.evaluate_objective(v).state_traj[-1]
        initial = self.problem.initial_residual
        residual = norm(m1 - self.problem.m_ref)
        jac = summarize_jacobian(jacobian_det(v, scheme))
        return SolverReport(
            status=status,
            reason=reason,
            iterations=records,
            residual_rel=residual / initial if initial > 0 else 0.0,
            jacobian_min=jac.min,
            jacobian_max=jac.max,
            jacobian_max_deviation=jac.max_deviation,
            div_ratio=div_ratio(v) if self.space.incompressible else None,
            wall_time=wall_time,
        )


def newton_solve(
    problem: RegistrationProblem,
    model: Model,
    cfg: NewtonConfig,
    choice: PrecondChoice | None = None,
    seed: int = 0,
) -> tuple[np.ndarray, SolverReport]:
    """영 초기값에서 Newton-Krylov 를 돌려 (v, report) 를 돌려준다"""
    return NewtonSolver(problem, model, cfg, choice, seed=seed).solve()
