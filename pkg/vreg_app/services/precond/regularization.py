"""정규화 전처리기 (spectral) 와 split 전처리 KKT 연산자"""

from __future__ import annotations

from typing import Callable

import numpy as np

from vreg_app.schemas.config import Model
from vreg_app.services.spectral.operators import SpectralWeights, apply_inv_reg

Matvec = Callable[[np.ndarray], np.ndarray]


def apply_reg_precond(r: np.ndarray, model: Model, weights: SpectralWeights) -> np.ndarray:
    """(β_v·gamma_reg)⁻¹ r"""
    return apply_inv_reg(r, weights, model.beta_v, power=-1.0)


class SplitKKTOperator:
    """s ↦ s + M^{-1/2} 𝒬 M^{-1/2} s, M = β_v·Γ_reg

    s = M^{1/2}ṽ. 𝒬 = H − β_v𝒜 (데이터항, 투영, 페널티 포함). 0 모드는 M 쪽 가중치 β_v 로 정규화된다.
    """

    def __init__(self, data_matvec: Matvec, weights: SpectralWeights, beta_v: float, project: Matvec | None = None):
        self.data_matvec = data_matvec
        self.weights = weights
        self.beta_v = beta_v
        self.project = project
        self.matvecs = 0

    def scale(self, x: np.ndarray) -> np.ndarray:
        """M^{-1/2} x"""
        return apply_inv_reg(x, self.weights, self.beta_v, power=-0.5)

    def __call__(self, s: np.ndarray) -> np.ndarray:
        self.matvecs += 1
        return s + self.scale(self.data_matvec(self.scale(s)))

    def rhs(self, b: np.ndarray) -> np.ndarray:
        """원 좌표 우변 b → split 좌표 M^{-1/2} b"""
        out = self.scale(b)
        return self.project(out) if self.project else out

    def recover(self, y: np.ndarray) -> np.ndarray:
        """split 해 y → ṽ = M^{-1/2} y"""
        out = self.scale(y)
        return self.project(out) if self.project else out

    def to_split(self, vt: np.ndarray) -> np.ndarray:
        """ṽ → s = M^{1/2}ṽ"""
        return apply_inv_reg(vt, self.weights, self.beta_v, power=0.5)
