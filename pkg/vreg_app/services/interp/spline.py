"""주기 3차 B-spline 보간

prefilter 는 circulant(grid-wrap) 경계로 계수를 구하고, evaluate 는 좌표를 2π 주기로 감아서
tensor-product 3차 B-spline 을 계산한다. padding 없음.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates, spline_filter

from vreg_app.metrics.op_counters import count_interp
from vreg_app.services.errors import GridError, NonFiniteFieldError
from vreg_app.services.spectral.grid import Grid

logger = logging.getLogger(__name__)

SPLINE_ORDER = 3
_MODE = "grid-wrap"


@dataclass(frozen=True)
class SplineCoefficients:
    """prefilter 된 B-spline 계수"""

    grid: Grid
    coeffs: np.ndarray


def prefilter(u: np.ndarray) -> SplineCoefficients:
    """노드 값 u 를 보간하는 주기 B-spline 계수"""
    if not np.all(np.isfinite(u)):
        raise NonFiniteFieldError("prefilter 입력에 NaN/Inf 가 있습니다")
    coeffs = spline_filter(np.asarray(u, dtype=np.float64), order=SPLINE_ORDER, output=np.float64, mode=_MODE)
    return SplineCoefficients(grid=Grid.of(u), coeffs=coeffs)


def to_index_coords(grid: Grid, points: np.ndarray) -> np.ndarray:
    """물리 좌표 (−π 기준) → 주기로 감은 인덱스 좌표"""
    out = np.empty_like(points, dtype=np.float64)
    for axis in range(2):
        out[axis] = np.mod((points[axis] + np.pi) / grid.h[axis], grid.n[axis])
    return out


def evaluate(c: SplineCoefficients, points: np.ndarray) -> np.ndarray:
    """계수 c 를 점 집합 points (shape (2, ...)) 에서 계산"""
    if points.shape[0] != 2:
        raise GridError(f"점 집합은 shape (2, ...) 이어야 합니다: {points.shape}")
    count_interp()
    return map_coordinates(
        c.coeffs,
        to_index_coords(c.grid, points),
        order=SPLINE_ORDER,
        mode=_MODE,
        prefilter=False,
    )


def interpolate(u: np.ndarray, points: np.ndarray) -> np.ndarray:
    """prefilter + evaluate"""
    return evaluate(prefilter(u), points)


def interpolate_vector(v: np.ndarray, points: np.ndarray) -> np.ndarray:
    """벡터 필드 성분별 보간 (성분당 1회 카운트)"""
    return np.stack([interpolate(component, points) for component in v])


# ============== 미분 / 전치 ==============


def _cubic_weights(t: np.ndarray) -> np.ndarray:
    """base = floor(p) − 1 부터 네 계수의 가중치, shape (4, ...)"""
    s = 1.0 - t
    return np.stack(
        [
            s**3 / 6.0,
            (3.0 * t**3 - 6.0 * t**2 + 4.0) / 6.0,
            (-3.0 * t**3 + 3.0 * t**2 + 3.0 * t + 1.0) / 6.0,
            t**3 / 6.0,
        ]
    )


def _cubic_weight_derivatives(t: np.ndarray) -> np.ndarray:
    return np.stack(
        [
            -0.5 * (1.0 - t) ** 2,
            0.5 * (3.0 * t**2 - 4.0 * t),
            0.5 * (-3.0 * t**2 + 2.0 * t + 1.0),
            0.5 * t**2,
        ]
    )


def _stencil(grid: Grid, points: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """축별 (시작 인덱스, 소수부)"""
    if points.shape[0] != 2:
        raise GridError(f"점 집합은 shape (2, ...) 이어야 합니다: {points.shape}")
    index = to_index_coords(grid, points)
    floor = np.floor(index)
    base = [floor[axis].astype(np.int64) - 1 for axis in range(2)]
    frac = [index[axis] - floor[axis] for axis in range(2)]
    return base, frac


def _flat_indices(grid: Grid, base: list[np.ndarray], o1: int, o2: int) -> np.ndarray:
    n1, n2 = grid.n
    return np.mod(base[0] + o1, n1) * n2 + np.mod(base[1] + o2, n2)


def evaluate_gradient(c: SplineCoefficients, points: np.ndarray) -> np.ndarray:
    """스플라인 보간 함수의 물리 좌표 gradient 를 points 에서 계산, shape (2, ...)"""
    grid = c.grid
    base, frac = _stencil(grid, points)
    w = [_cubic_weights(t) for t in frac]
    dw = [_cubic_weight_derivatives(t) for t in frac]
    flat = c.coeffs.ravel()
    out = np.zeros((2,) + points.shape[1:])
    for o1 in range(4):
        for o2 in range(4):
            values = flat[_flat_indices(grid, base, o1, o2)]
            out[0] += dw[0][o1] * w[1][o2] * values
            out[1] += w[0][o1] * dw[1][o2] * values
    count_interp()
    out[0] /= grid.h[0]
    out[1] /= grid.h[1]
    return out


def evaluate_transpose(values: np.ndarray, points: np.ndarray, grid: Grid) -> np.ndarray:
    """evaluate 의 전치. 점별 값을 같은 가중치로 계수 격자에 흩뿌린다"""
    base, frac = _stencil(grid, points)
    w = [_cubic_weights(t) for t in frac]
    out = np.zeros(grid.size)
    for o1 in range(4):
        for o2 in range(4):
            out += np.bincount(
                _flat_indices(grid, base, o1, o2).ravel(),
                weights=(w[0][o1] * w[1][o2] * values).ravel(),
                minlength=grid.size,
            )
    count_interp()
    return out.reshape(grid.shape)


def interpolate_transpose(values: np.ndarray, points: np.ndarray, grid: Grid) -> np.ndarray:
    """interpolate(·, points) 의 전치 (Euclid 내적 기준)

    grid-wrap prefilter 는 대칭 circulant 의 역이므로 prefilter 의 전치는 prefilter 자신이다.
    """
    if not np.all(np.isfinite(values)):
        raise NonFiniteFieldError("interpolate_transpose 입력에 NaN/Inf 가 있습니다")
    scattered = evaluate_transpose(values, points, grid)
    return spline_filter(scattered, order=SPLINE_ORDER, output=np.float64, mode=_MODE)
