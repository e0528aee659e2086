"""coarse split Hessian 의 고유값 범위 추정과 β 재스케일"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from vreg_app.schemas.config import Model, PrecondChoice
from vreg_app.services.precond.coarse import CoarseOperator
from vreg_app.services.precond.lanczos import largest_eigenvalue
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.operators import band_limited_random

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigEstimate:
    """[e_min, e_max]. e_min 은 I + PSD 의 해석적 하한 1"""

    e_min: float
    e_max: float
    beta_v: float
    lanczos_steps: int = 0
    power_fallback: bool = False

    def rescaled(self, beta_v: float) -> EigEstimate:
        """e_max(β′) = 1 + (e_max(β) − 1)·β/β′"""
        if beta_v == self.beta_v:
            return self
        return replace(self, e_max=1.0 + (self.e_max - 1.0) * self.beta_v / beta_v, beta_v=beta_v)


def estimate_eigs(
    problem: RegistrationProblem,
    model: Model,
    choice: PrecondChoice,
    v: np.ndarray | None = None,
    seed: int = 0,
    coarse: CoarseOperator | None = None,
) -> EigEstimate:
    """coarse GN split 연산자의 최대 고유값을 Lanczos 로 추정 (기본 v=0)"""
    coarse = coarse or CoarseOperator(problem, model, choice)
    coarse.update(v if v is not None else problem.grid.zeros_vector())
    start = band_limited_random(coarse.grid, np.random.default_rng(seed), components=2)
    if coarse.space.incompressible:
        start = coarse.space.project(start)
    e_max, result, fallback = largest_eigenvalue(coarse, start, choice.lanczos_steps)
    e_max = max(e_max, 1.0)
    logger.info(f"고유값 추정: e_max={e_max:.4e} (β_v={model.beta_v:g}, Lanczos {result.steps} steps)")
    return EigEstimate(
        e_min=1.0,
        e_max=e_max,
        beta_v=model.beta_v,
        lanczos_steps=result.steps,
        power_fallback=fallback,
    )
