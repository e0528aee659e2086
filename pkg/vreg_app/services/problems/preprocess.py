"""이미지 전처리 - 스펙트럴 가우시안 smoothing, [0, 1] 정규화"""

from __future__ import annotations

import logging

import numpy as np

from vreg_app.services.errors import NonFiniteFieldError
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.spectral.operators import fft2, ifft2, wavenumbers

logger = logging.getLogger(__name__)


def gaussian_multiplier(grid: Grid, sigma: float) -> np.ndarray:
    """exp(−Σ_i k_i²(sigma·h_i)²/2), sigma 는 격자점 단위"""
    k1, k2 = wavenumbers(grid.shape)
    h1, h2 = grid.h
    return np.exp(-0.5 * sigma**2 * ((k1 * h1) ** 2 + (k2 * h2) ** 2))


def gaussian_smooth(image: np.ndarray, sigma: float) -> np.ndarray:
    if sigma <= 0:
        return image.copy()
    return ifft2(gaussian_multiplier(Grid.of(image), sigma) * fft2(image))


def normalize_intensity(image: np.ndarray) -> tuple[np.ndarray, tuple[float, float]]:
    """[min, max] → [0, 1]. 상수 이미지는 0"""
    lo, hi = float(np.min(image)), float(np.max(image))
    if hi <= lo:
        return np.zeros_like(image), (lo, hi)
    return (image - lo) / (hi - lo), (lo, hi)


def preprocess(image: np.ndarray, sigma: float = 1.0) -> np.ndarray:
    """가우시안 smoothing 후 [0, 1] 정규화"""
    if not np.all(np.isfinite(image)):
        raise NonFiniteFieldError("전처리 입력에 NaN/Inf 가 있습니다")
    normalized, _ = normalize_intensity(gaussian_smooth(image, sigma))
    return normalized
