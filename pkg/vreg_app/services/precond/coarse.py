"""Two-level 전처리기의 coarse (n/2) 연산자

coarse 격자에서는 SL(coarse_cfl) GN Hessian 만 쓴다. fine 속도가 바뀔 때마다 update() 로 특성곡선을 다시 추적한다.
"""

from __future__ import annotations

import logging

import numpy as np

from vreg_app.schemas.config import HessianMode, Model, PrecondChoice, Scheme, SchemeConfig
from vreg_app.services.inverse.objective import HessianContext, ReducedSpace
from vreg_app.services.precond.regularization import SplitKKTOperator
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.spectral.operators import restrict

logger = logging.getLogger(__name__)


class CoarseOperator:
    """coarse split 연산자 s ↦ s + M^{-1/2}𝒬_c M^{-1/2}s"""

    def __init__(self, problem: RegistrationProblem, model: Model, choice: PrecondChoice):
        self.fine_grid = problem.grid
        self.problem = problem.coarse()
        self.grid: Grid = self.problem.grid
        self.model = model
        self.scheme = SchemeConfig(scheme=Scheme.SL, cfl=choice.coarse_cfl)
        self.space = ReducedSpace(self.problem, model, self.scheme, hessian_mode=HessianMode.GN)
        self.ctx: HessianContext | None = None
        self.split: SplitKKTOperator | None = None
        self.matvecs = 0

    def update(self, v_fine: np.ndarray) -> None:
        """fine 속도를 restrict 해서 coarse Hessian 궤적을 다시 만든다"""
        v_coarse = restrict(v_fine)
        self.ctx = self.space.hessian_context(v_coarse)
        self.split = SplitKKTOperator(
            lambda vt: self.space.data_matvec(vt, self.ctx),
            self.space.weights,
            self.model.beta_v,
            project=self.space.project if self.space.incompressible else None,
        )
        logger.debug(f"coarse 연산자 갱신: grid={self.grid.n}, nt={self.ctx.transport.nt}")

    def __call__(self, s: np.ndarray) -> np.ndarray:
        if self.split is None:
            raise RuntimeError("CoarseOperator.update() 를 먼저 호출해야 합니다")
        self.matvecs += 1
        return self.split(s)
