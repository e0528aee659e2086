"""수송 솔버 인터페이스

하나의 솔버 인스턴스는 속도 v 하나에 묶인다. 특성곡선 등 v 에만 의존하는 값은 인스턴스에 캐시되고
state / adjoint / 증분 solve 가 공유한다. 입력 배열은 수정하지 않는다.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Callable

import numpy as np

from vreg_app.schemas.config import HessianMode, SchemeConfig
from vreg_app.services.errors import GridError, MissingAdjointError
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.transport.types import TimeGrid, check_trajectory, resolve_time_grid

logger = logging.getLogger(__name__)

BodyForceKernel = Callable[[np.ndarray, np.ndarray], np.ndarray]


class TransportSolver(ABC):
    """state / adjoint / 증분 state / 증분 adjoint 수송 + body force 시간 적분"""

    def __init__(self, v: np.ndarray, cfg: SchemeConfig, tg: TimeGrid | None = None):
        if v.ndim != 3 or v.shape[0] != 2:
            raise GridError(f"속도는 shape (2, n1, n2) 이어야 합니다: {v.shape}")
        self.v = v
        self.grid = Grid.of(v)
        self.cfg = cfg
        self.tg = tg or resolve_time_grid(v, cfg)

    @property
    def nt(self) -> int:
        return self.tg.nt

    @property
    def ht(self) -> float:
        return self.tg.ht

    def _new_trajectory(self) -> np.ndarray:
        return np.empty((self.nt + 1,) + self.grid.shape)

    def _check_field(self, u: np.ndarray, name: str) -> None:
        self.grid.check(u)
        if u.ndim != 2:
            raise GridError(f"{name} 은 스칼라 필드여야 합니다: {u.shape}")

    # ============== solves ==============

    @abstractmethod
    def solve_state(self, m0: np.ndarray) -> np.ndarray:
        """∂_t m + v·∇m = 0, m(0) = m0"""

    @abstractmethod
    def solve_adjoint(self, lam1: np.ndarray) -> np.ndarray:
        """−∂_t λ − ∇·(λv) = 0, λ(1) = lam1"""

    @abstractmethod
    def solve_inc_state(self, vt: np.ndarray, m_traj: np.ndarray) -> np.ndarray:
        """∂_t m̃ + v·∇m̃ = −ṽ·∇m, m̃(0) = 0"""

    def solve_inc_adjoint(
        self,
        vt: np.ndarray,
        lam_t1: np.ndarray,
        lam_traj: np.ndarray | None = None,
        mode: HessianMode = HessianMode.GN,
    ) -> np.ndarray:
        """GN: adjoint 와 같은 연산자. FullNewton: −∇·(λṽ) 결합항 추가"""
        if mode == HessianMode.GN:
            return self.solve_adjoint(lam_t1)
        if lam_traj is None:
            raise MissingAdjointError("FullNewton 증분 adjoint 에는 adjoint 궤적이 필요합니다")
        check_trajectory(lam_traj, self.tg, self.grid, "adjoint")
        return self._solve_inc_adjoint_full(vt, lam_t1, lam_traj)

    @abstractmethod
    def _solve_inc_adjoint_full(self, vt: np.ndarray, lam_t1: np.ndarray, lam_traj: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def jacobian_det(self) -> np.ndarray:
        """∂_t J + v·∇J = J∇·v, J(0) = 1 의 t=1 값"""

    # ============== body force ==============

    @abstractmethod
    def body_force(self, lam: np.ndarray, m: np.ndarray) -> np.ndarray:
        """시점별 body force 커널 B(λ, m)"""

    @abstractmethod
    def body_force_integral(self, lam_traj: np.ndarray, m_traj: np.ndarray) -> np.ndarray:
        """gradient / GN Hessian 데이터항 ∫ B(λ, m) dt"""

    def gradient_body_force(self, lam1: np.ndarray, m_traj: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
        """축소 gradient 의 데이터항 (body force, adjoint 궤적). 기본은 adjoint solve + 시간 적분"""
        adjoint = self.solve_adjoint(lam1)
        return self.body_force_integral(adjoint, m_traj), adjoint

    def coupling_integral(self, lam_traj: np.ndarray, mt_traj: np.ndarray) -> np.ndarray:
        """FullNewton 항 ∫ B(λ, m̃) dt (중점 규칙)"""
        return self._midpoint_integral(lam_traj, mt_traj, self.body_force)

    def _midpoint_integral(self, lam_traj: np.ndarray, m_traj: np.ndarray, kernel: BodyForceKernel) -> np.ndarray:
        """반 스텝 값을 인접 노드 평균으로 둔 중점 규칙"""
        check_trajectory(lam_traj, self.tg, self.grid, "adjoint")
        check_trajectory(m_traj, self.tg, self.grid, "state")
        total = self.grid.zeros_vector()
        for j in range(self.nt):
            lam_mid = 0.5 * (lam_traj[j] + lam_traj[j + 1])
            m_mid = 0.5 * (m_traj[j] + m_traj[j + 1])
            total += kernel(lam_mid, m_mid)
        return self.ht * total

    # ============== convenience ==============

    def state_final(self, m0: np.ndarray) -> np.ndarray:
        return self.solve_state(m0)[-1]

    def adjoint_initial(self, lam1: np.ndarray) -> np.ndarray:
        return self.solve_adjoint(lam1)[0]
