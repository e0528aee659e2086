"""행렬 없는 PCG

내적은 Euclidean (격자 구적 내적과 상수배 차이뿐이라 반복열이 같다).
β 는 flexible 형태 ⟨z_{k+1}, r_{k+1} − r_k⟩/⟨z_k, r_k⟩ 를 쓴다 (고정 선형 전처리기면 표준 PCG 와 동일).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)

LinearOperator = Callable[[np.ndarray], np.ndarray]


@dataclass
class KrylovResult:
    """PCG 결과"""

    x: np.ndarray
    iterations: int
    residual_norm: float
    rhs_norm: float
    converged: bool
    negative_curvature: bool = False
    breakdown: bool = False

    @property
    def relative_residual(self) -> float:
        return self.residual_norm / self.rhs_norm if self.rhs_norm > 0 else 0.0


def _dot(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.vdot(a, b).real)


def pcg(
    op: LinearOperator,
    rhs: np.ndarray,
    precond: LinearOperator | None = None,
    tol: float = 1e-6,
    maxiter: int = 500,
    callback: Callable[[np.ndarray], None] | None = None,
) -> KrylovResult:
    """op x = rhs, 초기값 0. ‖r‖ ≤ tol·‖rhs‖ 에서 종료

    음의 곡률 ⟨p, Ap⟩ ≤ 0 이면 직전 iterate 로 종료한다.
    """
    x = np.zeros_like(rhs)
    rhs_norm = float(np.sqrt(_dot(rhs, rhs)))
    if rhs_norm == 0.0:
        return KrylovResult(x=x, iterations=0, residual_norm=0.0, rhs_norm=0.0, converged=True)

    r = rhs.copy()
    z = precond(r) if precond else r.copy()
    rz = _dot(r, z)
    if not rz > 0:
        logger.warning(f"PCG: 전처리기가 양정치가 아님 (⟨r, Pr⟩={rz:.3e})")
        return KrylovResult(x, 0, rhs_norm, rhs_norm, converged=False, breakdown=True)
    p = z.copy()
    residual_norm = rhs_norm

    for it in range(1, maxiter + 1):
        q = op(p)
        curvature = _dot(p, q)
        if not curvature > 0:
            logger.warning(f"PCG: {it}번째 반복에서 음의 곡률 ({curvature:.3e}), 직전 iterate 로 종료")
            return KrylovResult(x, it - 1, residual_norm, rhs_norm, converged=False, negative_curvature=True)

        alpha = rz / curvature
        x = x + alpha * p
        r_new = r - alpha * q
        residual_norm = float(np.sqrt(_dot(r_new, r_new)))
        if callback is not None:
            callback(x)
        logger.debug(f"PCG iter {it}: ‖r‖/‖b‖={residual_norm / rhs_norm:.3e}")
        if residual_norm <= tol * rhs_norm:
            return KrylovResult(x, it, residual_norm, rhs_norm, converged=True)

        z = precond(r_new) if precond else r_new.copy()
        rz_new = _dot(r_new, z)
        if not np.isfinite(rz_new) or rz_new <= 0:
            logger.warning(f"PCG: {it}번째 반복에서 breakdown (⟨r, Pr⟩={rz_new:.3e})")
            return KrylovResult(x, it, residual_norm, rhs_norm, converged=False, breakdown=True)
        beta = _dot(z, r_new - r) / rz
        p = z + beta * p
        r, rz = r_new, rz_new

    return KrylovResult(x, maxiter, residual_norm, rhs_norm, converged=False)
