"""RK2 / RK2A 공간 연산자

L_v m 은 state 방정식 우변, L_vᵀ 는 이산 내적에 대한 전치 (adjoint 우변),
B(λ, m) 은 ⟨λ, L_ṽ m⟩ = −⟨ṽ, B(λ, m)⟩ 를 만족하는 body force 커널이다.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from vreg_app.services.spectral.operators import divergence, gradient


def _dot(w: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.sum(w * u, axis=0)


class AdvectionOperator(ABC):
    """고정 속도 v 에 묶인 수송 연산자"""

    def __init__(self, v: np.ndarray):
        self.v = v
        self.div_v = divergence(v)

    def apply(self, m: np.ndarray) -> np.ndarray:
        return self.forward_term(self.v, self.div_v, m)

    def apply_transpose(self, lam: np.ndarray) -> np.ndarray:
        return self.transpose_term(self.v, self.div_v, lam)

    def perturbation(self, vt: np.ndarray, div_vt: np.ndarray, m: np.ndarray) -> np.ndarray:
        """L_ṽ m"""
        return self.forward_term(vt, div_vt, m)

    def perturbation_transpose(self, vt: np.ndarray, div_vt: np.ndarray, lam: np.ndarray) -> np.ndarray:
        """L_ṽᵀ λ"""
        return self.transpose_term(vt, div_vt, lam)

    @staticmethod
    @abstractmethod
    def forward_term(w: np.ndarray, div_w: np.ndarray, m: np.ndarray) -> np.ndarray: ...

    @staticmethod
    @abstractmethod
    def transpose_term(w: np.ndarray, div_w: np.ndarray, lam: np.ndarray) -> np.ndarray: ...

    @staticmethod
    @abstractmethod
    def body_force(lam: np.ndarray, m: np.ndarray) -> np.ndarray: ...


class PlainAdvection(AdvectionOperator):
    """RK2: L m = −v·∇m"""

    @staticmethod
    def forward_term(w: np.ndarray, div_w: np.ndarray, m: np.ndarray) -> np.ndarray:
        return -_dot(w, gradient(m))

    @staticmethod
    def transpose_term(w: np.ndarray, div_w: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return divergence(w * lam)

    @staticmethod
    def body_force(lam: np.ndarray, m: np.ndarray) -> np.ndarray:
        return lam * gradient(m)


class AntisymmetricAdvection(AdvectionOperator):
    """RK2A: L m = −½(v·∇m + ∇·(mv) − m∇·v)"""

    @staticmethod
    def forward_term(w: np.ndarray, div_w: np.ndarray, m: np.ndarray) -> np.ndarray:
        return -0.5 * (_dot(w, gradient(m)) + divergence(m * w) - m * div_w)

    @staticmethod
    def transpose_term(w: np.ndarray, div_w: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return 0.5 * (divergence(w * lam) + _dot(w, gradient(lam)) + lam * div_w)

    @staticmethod
    def body_force(lam: np.ndarray, m: np.ndarray) -> np.ndarray:
        return 0.5 * (lam * gradient(m) - m * gradient(lam) + gradient(lam * m))
