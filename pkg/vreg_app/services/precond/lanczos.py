"""Lanczos (완전 재직교화) 최대 고유값 추정 + power iteration fallback"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

logger = logging.getLogger(__name__)

BREAKDOWN_TOL = 1e-12


@dataclass
class LanczosResult:
    """삼중대각 행렬의 Ritz 값"""

    ritz: np.ndarray
    steps: int
    breakdown: bool

    @property
    def largest(self) -> float:
        return float(self.ritz[-1])

    @property
    def smallest(self) -> float:
        return float(self.ritz[0])


def _dot(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.vdot(a, b).real)


def lanczos(op: Callable[[np.ndarray], np.ndarray], start: np.ndarray, steps: int) -> LanczosResult:
    """steps 번 Lanczos. breakdown 이면 그 시점까지의 Ritz 값과 breakdown=True"""
    q = start / np.sqrt(_dot(start, start))
    basis = [q]
    alphas: list[float] = []
    betas: list[float] = []
    breakdown = False
    for j in range(steps):
        w = op(basis[j])
        alpha = _dot(basis[j], w)
        alphas.append(alpha)
        if j == steps - 1:
            break
        for qi in basis:
            w = w - _dot(qi, w) * qi
        beta = float(np.sqrt(_dot(w, w)))
        if not np.isfinite(beta) or beta <= BREAKDOWN_TOL * max(abs(alpha), 1.0):
            breakdown = True
            break
        betas.append(beta)
        basis.append(w / beta)

    if len(alphas) == 1:
        ritz = np.array(alphas)
    else:
        ritz = eigh_tridiagonal(np.array(alphas), np.array(betas[: len(alphas) - 1]), eigvals_only=True)
    return LanczosResult(ritz=np.sort(ritz), steps=len(alphas), breakdown=breakdown)


def power_iteration(op: Callable[[np.ndarray], np.ndarray], start: np.ndarray, iterations: int = 50) -> float:
    """Rayleigh 몫으로 본 최대 고유값"""
    x = start / np.sqrt(_dot(start, start))
    estimate = 0.0
    for _ in range(iterations):
        y = op(x)
        estimate = _dot(x, y)
        y_norm = float(np.sqrt(_dot(y, y)))
        if y_norm == 0.0 or not np.isfinite(y_norm):
            break
        x = y / y_norm
    return estimate


def largest_eigenvalue(
    op: Callable[[np.ndarray], np.ndarray], start: np.ndarray, steps: int
) -> tuple[float, LanczosResult, bool]:
    """Lanczos 최대 Ritz 값. breakdown 이면 power iteration 과 비교해 큰 값을 쓴다"""
    result = lanczos(op, start, steps)
    if not result.breakdown:
        return result.largest, result, False
    logger.warning(f"Lanczos breakdown ({result.steps} steps), power iteration 으로 대체")
    estimate = max(result.largest, power_iteration(op, start))
    return estimate, result, True
