"""Semi-Lagrangian 수송

특성곡선은 속도당 한 번만 추적한다 (forward 계열 / backward 계열 각 1세트).
source 항은 특성곡선을 따라 Heun 으로 적분한다.
solve_adjoint 는 연속 adjoint 방정식의 이산화이고, 축소 gradient 는 state 스킴을 그대로 전치한
이산 adjoint 로 계산한다 (gradient_body_force).
"""

from __future__ import annotations

import logging
from functools import cached_property

import numpy as np

from vreg_app.services.interp.spline import evaluate_gradient, interpolate, interpolate_transpose, prefilter
from vreg_app.services.spectral.operators import divergence, gradient
from vreg_app.services.transport.base import TransportSolver
from vreg_app.services.transport.characteristics import trace_characteristics
from vreg_app.services.transport.types import BlowUpGuard, Characteristics, Direction, check_trajectory

logger = logging.getLogger(__name__)


class SemiLagrangianTransport(TransportSolver):
    """SL: m(x, t_{j+1}) = m(X_D, t_j)"""

    # ============== cached per velocity ==============

    @cached_property
    def forward_characteristics(self) -> Characteristics:
        return trace_characteristics(self.v, self.ht, Direction.FORWARD)

    @cached_property
    def backward_characteristics(self) -> Characteristics:
        return trace_characteristics(self.v, self.ht, Direction.BACKWARD)

    @cached_property
    def div_v(self) -> np.ndarray:
        return divergence(self.v)

    @cached_property
    def div_v_backward(self) -> np.ndarray:
        """backward 출발점에서의 ∇·v"""
        return interpolate(self.div_v, self.backward_characteristics.departure)

    @cached_property
    def div_v_forward(self) -> np.ndarray:
        return interpolate(self.div_v, self.forward_characteristics.departure)

    def _reaction_step(self, u_dep: np.ndarray, d_dep: np.ndarray, source_dep=0.0, source=0.0) -> np.ndarray:
        """du/dτ = u·d + s 를 특성곡선을 따라 Heun 한 스텝"""
        h = self.ht
        k1 = u_dep * d_dep + source_dep
        k2 = (u_dep + h * k1) * self.div_v + source
        return u_dep + 0.5 * h * (k1 + k2)

    # ============== solves ==============

    def solve_state(self, m0: np.ndarray) -> np.ndarray:
        self._check_field(m0, "m0")
        departure = self.forward_characteristics.departure
        guard = BlowUpGuard(m0, "sl state")
        traj = self._new_trajectory()
        traj[0] = m0
        for j in range(self.nt):
            traj[j + 1] = interpolate(traj[j], departure)
            guard.check(traj[j + 1], j + 1)
        return traj

    def solve_adjoint(self, lam1: np.ndarray) -> np.ndarray:
        self._check_field(lam1, "lambda1")
        departure = self.backward_characteristics.departure
        d_dep = self.div_v_backward
        guard = BlowUpGuard(lam1, "sl adjoint")
        traj = self._new_trajectory()
        traj[self.nt] = lam1
        for j in range(self.nt - 1, -1, -1):
            traj[j] = self._reaction_step(interpolate(traj[j + 1], departure), d_dep)
            guard.check(traj[j], j)
        return traj

    def solve_inc_state(self, vt: np.ndarray, m_traj: np.ndarray) -> np.ndarray:
        check_trajectory(m_traj, self.tg, self.grid, "state")
        h = self.ht
        departure = self.forward_characteristics.departure
        guard = BlowUpGuard(np.zeros(0), "sl inc-state")
        traj = self._new_trajectory()
        traj[0] = 0.0
        source = -np.sum(vt * gradient(m_traj[0]), axis=0)
        for j in range(self.nt):
            source_next = -np.sum(vt * gradient(m_traj[j + 1]), axis=0)
            traj[j + 1] = interpolate(traj[j] + 0.5 * h * source, departure) + 0.5 * h * source_next
            guard.check(traj[j + 1], j + 1)
            source = source_next
        return traj

    def _solve_inc_adjoint_full(self, vt: np.ndarray, lam_t1: np.ndarray, lam_traj: np.ndarray) -> np.ndarray:
        departure = self.backward_characteristics.departure
        d_dep = self.div_v_backward
        guard = BlowUpGuard(np.zeros(0), "sl inc-adjoint")
        traj = self._new_trajectory()
        traj[self.nt] = lam_t1
        source_next = divergence(vt * lam_traj[self.nt])
        for j in range(self.nt - 1, -1, -1):
            source = divergence(vt * lam_traj[j])
            traj[j] = self._reaction_step(
                interpolate(traj[j + 1], departure),
                d_dep,
                source_dep=interpolate(source_next, departure),
                source=source,
            )
            guard.check(traj[j], j)
            source_next = source
        return traj

    def jacobian_det(self) -> np.ndarray:
        departure = self.forward_characteristics.departure
        d_dep = self.div_v_forward
        J = self.grid.zeros() + 1.0
        guard = BlowUpGuard(J, "sl jacobian")
        for j in range(self.nt):
            J = self._reaction_step(interpolate(J, departure), d_dep)
            guard.check(J, j + 1)
        return J

    # ============== body force ==============

    def body_force(self, lam: np.ndarray, m: np.ndarray) -> np.ndarray:
        return lam * gradient(m)

    def body_force_integral(self, lam_traj: np.ndarray, m_traj: np.ndarray) -> np.ndarray:
        return self._midpoint_integral(lam_traj, m_traj, self.body_force)

    def gradient_body_force(self, lam1: np.ndarray, m_traj: np.ndarray) -> tuple[np.ndarray, None]:
        """state 스킴 m_{j+1} = I(m_j)(X_D[v]) 를 전치해서 구한 body force

        λ_nt = lam1, λ_j = Iᵀ(λ_{j+1}) 로 거꾸로 보내면서 w = Σ_j λ_{j+1}·∇I(m_j)(X_D) 를 모으고,
        X_D = x − (ht/2)(v + I(v)(x − ht·v)) 의 v 미분을 w 에 전치 적용한다.
        이산 목적함수의 정확한 gradient 이므로 adjoint 궤적은 만들지 않는다.
        """
        self._check_field(lam1, "lambda1")
        check_trajectory(m_traj, self.tg, self.grid, "state")
        h = self.ht
        departure = self.forward_characteristics.departure
        guard = BlowUpGuard(lam1, "sl discrete adjoint")
        lam = lam1
        w = self.grid.zeros_vector()
        for j in range(self.nt - 1, -1, -1):
            w += lam * evaluate_gradient(prefilter(m_traj[j]), departure)
            if j > 0:
                lam = interpolate_transpose(lam, departure, self.grid)
                guard.check(lam, j)

        predictor = self.grid.coords - h * self.v
        dv = np.stack([evaluate_gradient(prefilter(component), predictor) for component in self.v])
        dv_t_w = np.einsum("ab...,a...->b...", dv, w)
        w_back = np.stack([interpolate_transpose(component, predictor, self.grid) for component in w])
        return 0.5 * h * (w + w_back - h * dv_t_w), None
