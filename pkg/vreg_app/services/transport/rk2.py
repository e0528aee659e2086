"""RK2 (Heun) 의사스펙트럴 수송 - plain / antisymmetric(RK2A)

한 스텝 S = I + hL + (h²/2)L². adjoint 는 Lᵀ 로 Heun 을 거꾸로 돌려서 정확히 Sᵀ 가 되고,
증분 state 는 S 의 v 에 대한 정확한 선형화다. 이 둘과 스테이지 짝 구적을 쓰면
이산 gradient 와 GN Hessian 이 이산 목적함수와 기계 정밀도로 일치한다.
"""

from __future__ import annotations

import logging

import numpy as np

from vreg_app.schemas.config import Scheme, SchemeConfig
from vreg_app.services.spectral.operators import divergence
from vreg_app.services.transport.advection import AdvectionOperator, AntisymmetricAdvection, PlainAdvection
from vreg_app.services.transport.base import TransportSolver
from vreg_app.services.transport.types import BlowUpGuard, TimeGrid, check_trajectory

logger = logging.getLogger(__name__)


class RungeKuttaTransport(TransportSolver):
    """RK2 / RK2A"""

    def __init__(self, v: np.ndarray, cfg: SchemeConfig, tg: TimeGrid | None = None):
        super().__init__(v, cfg, tg)
        self.op: AdvectionOperator = AntisymmetricAdvection(v) if cfg.scheme == Scheme.RK2A else PlainAdvection(v)

    def solve_state(self, m0: np.ndarray) -> np.ndarray:
        self._check_field(m0, "m0")
        h, L = self.ht, self.op.apply
        guard = BlowUpGuard(m0, f"{self.cfg.scheme.value} state")
        traj = self._new_trajectory()
        traj[0] = m0
        for j in range(self.nt):
            m = traj[j]
            k1 = L(m)
            traj[j + 1] = m + 0.5 * h * (k1 + L(m + h * k1))
            guard.check(traj[j + 1], j + 1)
        return traj

    def solve_adjoint(self, lam1: np.ndarray) -> np.ndarray:
        self._check_field(lam1, "lambda1")
        h, LT = self.ht, self.op.apply_transpose
        guard = BlowUpGuard(lam1, f"{self.cfg.scheme.value} adjoint")
        traj = self._new_trajectory()
        traj[self.nt] = lam1
        for j in range(self.nt - 1, -1, -1):
            lam = traj[j + 1]
            k1 = LT(lam)
            traj[j] = lam + 0.5 * h * (k1 + LT(lam + h * k1))
            guard.check(traj[j], j)
        return traj

    def solve_inc_state(self, vt: np.ndarray, m_traj: np.ndarray) -> np.ndarray:
        check_trajectory(m_traj, self.tg, self.grid, "state")
        h, L = self.ht, self.op.apply
        div_vt = divergence(vt)
        guard = BlowUpGuard(np.zeros(0), f"{self.cfg.scheme.value} inc-state")
        traj = self._new_trajectory()
        traj[0] = 0.0
        for j in range(self.nt):
            m = m_traj[j]
            # 2단계 source 는 state 예측값 m* = m + hLm 에서 평가
            source1 = self.op.perturbation(vt, div_vt, m)
            source2 = self.op.perturbation(vt, div_vt, m + h * L(m))
            mt = traj[j]
            k1 = L(mt) + source1
            k2 = L(mt + h * k1) + source2
            traj[j + 1] = mt + 0.5 * h * (k1 + k2)
            guard.check(traj[j + 1], j + 1)
        return traj

    def _solve_inc_adjoint_full(self, vt: np.ndarray, lam_t1: np.ndarray, lam_traj: np.ndarray) -> np.ndarray:
        h, LT = self.ht, self.op.apply_transpose
        div_vt = divergence(vt)
        guard = BlowUpGuard(np.zeros(0), f"{self.cfg.scheme.value} inc-adjoint")
        traj = self._new_trajectory()
        traj[self.nt] = lam_t1
        source_next = self.op.perturbation_transpose(vt, div_vt, lam_traj[self.nt])
        for j in range(self.nt - 1, -1, -1):
            source = self.op.perturbation_transpose(vt, div_vt, lam_traj[j])
            lt = traj[j + 1]
            k1 = LT(lt) + source_next
            k2 = LT(lt + h * k1) + source
            traj[j] = lt + 0.5 * h * (k1 + k2)
            guard.check(traj[j], j)
            source_next = source
        return traj

    def jacobian_det(self) -> np.ndarray:
        h = self.ht
        div_v = self.op.div_v

        def rhs(J: np.ndarray) -> np.ndarray:
            return self.op.apply(J) + J * div_v

        J = self.grid.zeros() + 1.0
        guard = BlowUpGuard(J, f"{self.cfg.scheme.value} jacobian")
        for j in range(self.nt):
            k1 = rhs(J)
            J = J + 0.5 * h * (k1 + rhs(J + h * k1))
            guard.check(J, j + 1)
        return J

    def body_force(self, lam: np.ndarray, m: np.ndarray) -> np.ndarray:
        return self.op.body_force(lam, m)

    def body_force_integral(self, lam_traj: np.ndarray, m_traj: np.ndarray) -> np.ndarray:
        """(h/2) Σ_j [B(λ_{j+1}, m*_j) + B(λ*_{j+1}, m_j)], m* = m + hLm, λ* = λ + hLᵀλ"""
        check_trajectory(lam_traj, self.tg, self.grid, "adjoint")
        check_trajectory(m_traj, self.tg, self.grid, "state")
        h, B = self.ht, self.op.body_force
        total = self.grid.zeros_vector()
        for j in range(self.nt):
            m, lam = m_traj[j], lam_traj[j + 1]
            total += B(lam, m + h * self.op.apply(m))
            total += B(lam + h * self.op.apply_transpose(lam), m)
        return 0.5 * h * total
