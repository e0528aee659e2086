"""Two-level KKT 전처리기

split 좌표에서 r ↦ low(prolong(C⁻¹ restrict(low r))) + high r.
coarse 역연산 C⁻¹ 는 PCG(eps_scale·kkt_tol) 또는 CHEB(k). 고대역은 그대로 통과한다 (split 좌표의 REG smoother 는 항등).
"""

from __future__ import annotations

import logging
import time

import numpy as np

from vreg_app.schemas.config import CoarseSolver, Model, PrecondChoice, PrecondKind
from vreg_app.services.inverse.krylov import pcg
from vreg_app.services.precond.chebyshev import chebyshev_solve
from vreg_app.services.precond.coarse import CoarseOperator
from vreg_app.services.precond.eigs import EigEstimate, estimate_eigs
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.operators import Band, cutoff_filter, prolong, restrict

logger = logging.getLogger(__name__)

# Chebyshev 구간 여유 (e_min 아래, e_max 위)
CHEB_LOWER_MARGIN = 0.9
CHEB_UPPER_MARGIN = 1.1
COARSE_MAXITER = 200


class TwoLevelPreconditioner:
    """split 좌표 KKT 용 two-level 전처리기 (PCG 의 precond 인자로 쓴다)"""

    def __init__(self, problem: RegistrationProblem, model: Model, choice: PrecondChoice, seed: int = 0):
        if choice.kind != PrecondKind.TWO_LEVEL:
            raise ValueError(f"two-level 전처리기가 아닙니다: {choice.kind.value}")
        self.problem = problem
        self.model = model
        self.choice = choice
        self.seed = seed
        self.coarse = CoarseOperator(problem, model, choice)
        self.kkt_tol = 1e-6
        self.eigs: EigEstimate | None = None
        self.applications = 0
        self.fallbacks = 0
        self.elapsed = 0.0
        if choice.coarse_solver == CoarseSolver.CHEB:
            self.eigs = self._initial_eigs()

    def _initial_eigs(self) -> EigEstimate:
        if self.choice.e_min is not None and self.choice.e_max is not None:
            return EigEstimate(e_min=self.choice.e_min, e_max=self.choice.e_max, beta_v=self.model.beta_v)
        return estimate_eigs(self.problem, self.model, self.choice, seed=self.seed, coarse=self.coarse)

    # ============== per outer iteration ==============

    def update(self, v: np.ndarray) -> None:
        """현재 fine 속도로 coarse 연산자를 갱신 (reestimate 면 고유값도 다시 추정)"""
        if self.choice.coarse_solver == CoarseSolver.CHEB and self.choice.reestimate:
            self.eigs = estimate_eigs(self.problem, self.model, self.choice, v=v, seed=self.seed, coarse=self.coarse)
        else:
            self.coarse.update(v)

    # ============== application ==============

    def _coarse_solve(self, rhs: np.ndarray) -> np.ndarray:
        if self.choice.coarse_solver == CoarseSolver.CHEB:
            if self.eigs is None:
                raise RuntimeError("Chebyshev 고유값 범위가 없습니다")
            return chebyshev_solve(
                self.coarse,
                rhs,
                self.choice.cheb_iters,
                CHEB_LOWER_MARGIN * self.eigs.e_min,
                CHEB_UPPER_MARGIN * self.eigs.e_max,
            )
        result = pcg(self.coarse, rhs, tol=self.choice.eps_scale * self.kkt_tol, maxiter=COARSE_MAXITER)
        if result.breakdown or result.negative_curvature:
            raise RuntimeError("coarse PCG 실패")
        return result.x

    def __call__(self, r: np.ndarray) -> np.ndarray:
        start = time.perf_counter()
        self.applications += 1
        try:
            coarse_rhs = restrict(cutoff_filter(r, Band.LOW))
            correction = cutoff_filter(prolong(self._coarse_solve(coarse_rhs)), Band.LOW)
            if not np.all(np.isfinite(correction)):
                raise RuntimeError("coarse 해가 유한하지 않음")
            out = correction + cutoff_filter(r, Band.HIGH)
        except RuntimeError as e:
            self.fallbacks += 1
            logger.warning(f"coarse solve 실패, REG 전처리로 대체: {e}")
            out = r.copy()
        self.elapsed += time.perf_counter() - start
        return out


def build_preconditioner(
    problem: RegistrationProblem, model: Model, choice: PrecondChoice, seed: int = 0
) -> TwoLevelPreconditioner | None:
    """REG 면 None (split 좌표에서 항등), TwoLevel 이면 전처리기 인스턴스"""
    if choice.kind == PrecondKind.REG:
        return None
    return TwoLevelPreconditioner(problem, model, choice, seed=seed)
