"""축소공간 목적함수 / gradient / Hessian matvec

J(v) = ½‖m(1) − m_R‖² + (β_v/2)⟨𝒜v, v⟩ (+ (β_w/2)‖∇·v‖²_H¹, near-incompressible)
g    = β_v𝒜v + 𝒦[∫ λ∇m dt] (+ penalty gradient)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from vreg_app.schemas.config import Deformation, HessianMode, Model, SchemeConfig
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.operators import (
    apply_div_penalty,
    apply_reg,
    inner,
    project_div_free,
    spectral_weights,
)
from vreg_app.services.transport.base import TransportSolver
from vreg_app.services.transport.solver import make_transport

logger = logging.getLogger(__name__)


@dataclass
class ObjectiveValue:
    """목적함수 값과 재사용할 state 궤적"""

    objective: float
    mismatch: float
    reg_term: float
    penalty: float
    state_traj: np.ndarray
    transport: TransportSolver


@dataclass
class GradientResult:
    """축소 gradient 와 부산물"""

    g: np.ndarray
    body_force: np.ndarray
    objective: float
    mismatch: float
    reg_term: float
    penalty: float
    state_traj: np.ndarray
    adjoint_traj: np.ndarray | None
    transport: TransportSolver

    @property
    def grad_inf(self) -> float:
        return float(np.max(np.abs(self.g)))

    @property
    def m_final(self) -> np.ndarray:
        return self.state_traj[-1]


@dataclass
class HessianContext:
    """현재 v 에서 Hessian matvec 에 필요한 궤적"""

    transport: TransportSolver
    state_traj: np.ndarray
    adjoint_traj: np.ndarray | None
    mode: HessianMode


class ReducedSpace:
    """정합 문제 + 모델 + 스킴에 묶인 축소공간 연산"""

    def __init__(
        self,
        problem: RegistrationProblem,
        model: Model,
        gradient_scheme: SchemeConfig,
        hessian_scheme: SchemeConfig | None = None,
        hessian_mode: HessianMode = HessianMode.GN,
    ):
        self.problem = problem
        self.model = model
        self.grid = problem.grid
        self.gradient_scheme = gradient_scheme
        self.hessian_scheme = hessian_scheme or gradient_scheme
        self.hessian_mode = hessian_mode
        self.weights = spectral_weights(self.grid, model.reg_norm)

    @property
    def incompressible(self) -> bool:
        return self.model.deformation == Deformation.INCOMPRESSIBLE

    @property
    def near_incompressible(self) -> bool:
        return self.model.deformation == Deformation.NEAR_INCOMPRESSIBLE

    def project(self, u: np.ndarray) -> np.ndarray:
        """incompressible 이면 Leray 투영, 아니면 그대로"""
        return project_div_free(u) if self.incompressible else u

    def _penalty_gradient(self, v: np.ndarray) -> np.ndarray | None:
        if not self.near_incompressible:
            return None
        return apply_div_penalty(v, self.model.beta_w or 0.0)

    # ============== objective / gradient ==============

    def evaluate_objective(self, v: np.ndarray) -> ObjectiveValue:
        transport = make_transport(v, self.gradient_scheme)
        state = transport.solve_state(self.problem.m_tmpl)
        residual = state[-1] - self.problem.m_ref
        mismatch = 0.5 * inner(residual, residual)
        reg_term = 0.5 * inner(apply_reg(v, self.weights, self.model.beta_v), v)
        penalty_grad = self._penalty_gradient(v)
        penalty = 0.5 * inner(penalty_grad, v) if penalty_grad is not None else 0.0
        return ObjectiveValue(
            objective=mismatch + reg_term + penalty,
            mismatch=mismatch,
            reg_term=reg_term,
            penalty=penalty,
            state_traj=state,
            transport=transport,
        )

    def evaluate_gradient(self, v: np.ndarray, value: ObjectiveValue | None = None) -> GradientResult:
        """value 가 같은 v 의 목적함수 결과면 state 궤적을 재사용한다"""
        value = value or self.evaluate_objective(v)
        transport = value.transport
        lam1 = -(value.state_traj[-1] - self.problem.m_ref)
        body_force, adjoint = transport.gradient_body_force(lam1, value.state_traj)
        g = apply_reg(v, self.weights, self.model.beta_v) + body_force
        penalty_grad = self._penalty_gradient(v)
        if penalty_grad is not None:
            g = g + penalty_grad
        g = self.project(g)
        return GradientResult(
            g=g,
            body_force=body_force,
            objective=value.objective,
            mismatch=value.mismatch,
            reg_term=value.reg_term,
            penalty=value.penalty,
            state_traj=value.state_traj,
            adjoint_traj=adjoint,
            transport=transport,
        )

    # ============== Hessian ==============

    def hessian_context(self, v: np.ndarray, grad: GradientResult | None = None) -> HessianContext:
        """Hessian 스킴이 gradient 스킴과 같으면 gradient 궤적을 그대로 쓴다

        FullNewton 인데 gradient 쪽에 adjoint 궤적이 없으면 (SL) 여기서 adjoint 를 푼다.
        """
        if grad is not None and self.hessian_scheme == self.gradient_scheme:
            transport, state, adjoint = grad.transport, grad.state_traj, grad.adjoint_traj
        else:
            transport = make_transport(v, self.hessian_scheme)
            state = transport.solve_state(self.problem.m_tmpl)
            adjoint = None
        if self.hessian_mode == HessianMode.FULL_NEWTON and adjoint is None:
            adjoint = transport.solve_adjoint(-(state[-1] - self.problem.m_ref))
        return HessianContext(transport, state, adjoint, self.hessian_mode)

    def data_matvec(self, vt: np.ndarray, ctx: HessianContext) -> np.ndarray:
        """𝒬ṽ = H ṽ − β_v𝒜ṽ (데이터항 + 페널티, 투영 포함). state + 증분 adjoint 두 번의 수송"""
        vt = self.project(vt)
        transport = ctx.transport
        mt = transport.solve_inc_state(vt, ctx.state_traj)
        lt = transport.solve_inc_adjoint(vt, -mt[-1], lam_traj=ctx.adjoint_traj, mode=ctx.mode)
        out = transport.body_force_integral(lt, ctx.state_traj)
        if ctx.mode == HessianMode.FULL_NEWTON and ctx.adjoint_traj is not None:
            out = out + transport.coupling_integral(ctx.adjoint_traj, mt)
        out = self.project(out)
        penalty = self._penalty_gradient(vt)
        if penalty is not None:
            out = out + penalty
        return out

    def hessian_matvec(self, vt: np.ndarray, ctx: HessianContext) -> np.ndarray:
        """H ṽ = β_v𝒜ṽ + 𝒬ṽ"""
        return apply_reg(vt, self.weights, self.model.beta_v) + self.data_matvec(vt, ctx)


# ============== functional API ==============


def evaluate_objective(v: np.ndarray, problem: RegistrationProblem, model: Model, cfg: SchemeConfig) -> ObjectiveValue:
    return ReducedSpace(problem, model, cfg).evaluate_objective(v)


def evaluate_gradient(v: np.ndarray, problem: RegistrationProblem, model: Model, cfg: SchemeConfig) -> GradientResult:
    return ReducedSpace(problem, model, cfg).evaluate_gradient(v)


def hessian_matvec(
    vt: np.ndarray,
    v: np.ndarray,
    problem: RegistrationProblem,
    model: Model,
    cfg: SchemeConfig,
    mode: HessianMode = HessianMode.GN,
    grad: GradientResult | None = None,
) -> np.ndarray:
    space = ReducedSpace(problem, model, cfg, hessian_mode=mode)
    return space.hessian_matvec(vt, space.hessian_context(v, grad))
