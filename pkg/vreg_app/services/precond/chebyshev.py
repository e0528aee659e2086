"""Chebyshev semi-iteration - 고정 반복 수 (고정 선형 연산자)"""

from __future__ import annotations

from typing import Callable

import numpy as np


def chebyshev_solve(
    op: Callable[[np.ndarray], np.ndarray],
    rhs: np.ndarray,
    k: int,
    e_min: float,
    e_max: float,
) -> np.ndarray:
    """[e_min, e_max] 로 스케일한 3항 점화식, 초기값 0, 정확히 k 번 op 적용"""
    if not e_max > e_min > 0:
        raise ValueError(f"e_max > e_min > 0 이어야 합니다: ({e_min}, {e_max})")
    x = np.zeros_like(rhs)
    if k <= 0:
        return x
    theta = 0.5 * (e_max + e_min)
    delta = 0.5 * (e_max - e_min)
    sigma = theta / delta
    rho = 1.0 / sigma
    r = rhs.copy()
    d = r / theta
    for _ in range(k):
        x = x + d
        r = r - op(d)
        rho_next = 1.0 / (2.0 * sigma - rho)
        d = rho_next * rho * d + (2.0 * rho_next / delta) * r
        rho = rho_next
    return x


def chebyshev_bound(k: int, e_min: float, e_max: float) -> float:
    """잔차 감소 상한 2·((√κ−1)/(√κ+1))^k"""
    sqrt_kappa = np.sqrt(e_max / e_min)
    return float(2.0 * ((sqrt_kappa - 1.0) / (sqrt_kappa + 1.0)) ** k)
