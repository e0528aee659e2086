"""의사스펙트럴 연산자 - 미분, 정규화 연산자, Leray 투영, restriction/prolongation, cut-off 필터

변환 규약: forward 는 스케일 없음, inverse 가 1/N 을 가진다.
1계 미분 심볼은 Nyquist 모드를 0 으로 둔다 (∂_i 의 이산 반대칭 유지). 짝수 차수 심볼은 Nyquist 를 유지한다.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import fft as sp_fft

from vreg_app.metrics.op_counters import count_fft
from vreg_app.schemas.config import RegNorm
from vreg_app.services.errors import GridError, NonFiniteFieldError
from vreg_app.services.spectral.grid import DIM, Grid

logger = logging.getLogger(__name__)


class Band(str, Enum):
    LOW = "low"
    HIGH = "high"


# ============== Wavenumbers ==============


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _integer_frequencies(n: int) -> np.ndarray:
    """fft 순서의 정수 파수 (짝수 n 의 Nyquist 는 −n/2)"""
    return np.rint(sp_fft.fftfreq(n, 1.0 / n)).astype(np.int64)


@lru_cache(maxsize=32)
def wavenumbers(shape: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """정수 파수 (k1, k2), broadcast shape (n1,1), (1,n2)"""
    k1 = _integer_frequencies(shape[0]).astype(float)[:, None]
    k2 = _integer_frequencies(shape[1]).astype(float)[None, :]
    return _readonly(k1), _readonly(k2)


@lru_cache(maxsize=32)
def derivative_wavenumbers(shape: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """1계 미분용 파수 - Nyquist 모드 0"""
    out = []
    for axis, k in enumerate(wavenumbers(shape)):
        kd = k.copy()
        n = shape[axis]
        if n % 2 == 0:
            kd[kd == -(n // 2)] = 0.0
        out.append(_readonly(kd))
    return out[0], out[1]


@lru_cache(maxsize=32)
def wavenumber_squared(shape: tuple[int, int]) -> np.ndarray:
    k1, k2 = wavenumbers(shape)
    return _readonly(k1**2 + k2**2)


# ============== Transforms ==============


def _components(u: np.ndarray) -> int:
    return int(np.prod(u.shape[:-2])) if u.ndim > 2 else 1


def fft2(u: np.ndarray) -> np.ndarray:
    """마지막 두 축 2D FFT (스칼라 성분당 1회 카운트)"""
    count_fft(_components(u))
    return sp_fft.fft2(u)


def ifft2(uh: np.ndarray) -> np.ndarray:
    count_fft(_components(uh))
    return sp_fft.ifft2(uh).real


def _check_finite(u: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(u)):
        raise NonFiniteFieldError(f"{name} 에 NaN/Inf 가 있습니다")


# ============== Differential operators ==============


def gradient(u: np.ndarray) -> np.ndarray:
    """∇u, shape (2, n1, n2)"""
    _check_finite(u, "gradient 입력")
    kd1, kd2 = derivative_wavenumbers(u.shape)
    uh = fft2(u)
    return ifft2(1j * np.stack([kd1 * uh, kd2 * uh]))


def divergence(v: np.ndarray) -> np.ndarray:
    """Σ_i ∂_i v^i"""
    if v.ndim != 3 or v.shape[0] != DIM:
        raise GridError(f"벡터 필드는 shape (2, n1, n2) 이어야 합니다: {v.shape}")
    _check_finite(v, "divergence 입력")
    kd1, kd2 = derivative_wavenumbers(v.shape[-2:])
    vh = fft2(v)
    return ifft2(1j * (kd1 * vh[0] + kd2 * vh[1]))


# ============== Regularization ==============


@dataclass(frozen=True)
class SpectralWeights:
    """정규화 연산자 심볼 gamma 와 0 모드를 1로 바꾼 gamma_reg"""

    norm: RegNorm
    gamma: np.ndarray
    gamma_reg: np.ndarray


@lru_cache(maxsize=32)
def spectral_weights(grid: Grid, norm: RegNorm) -> SpectralWeights:
    """H1/H2/H3 seminorm 심볼 |k|², |k|⁴, |k|⁶"""
    gamma = wavenumber_squared(grid.shape) ** norm.order
    gamma_reg = np.where(gamma == 0.0, 1.0, gamma)
    return SpectralWeights(norm=norm, gamma=_readonly(gamma), gamma_reg=_readonly(gamma_reg))


def apply_symbol(v: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    """모드별 실수 심볼 곱 (성분별)"""
    return ifft2(symbol * fft2(v))


def apply_reg(v: np.ndarray, weights: SpectralWeights, beta: float) -> np.ndarray:
    """β𝒜[v]"""
    return apply_symbol(v, beta * weights.gamma)


def apply_inv_reg(v: np.ndarray, weights: SpectralWeights, beta: float, power: float = -1.0) -> np.ndarray:
    """(β·gamma_reg)^power, power ∈ {−1, −1/2}"""
    return apply_symbol(v, (beta * weights.gamma_reg) ** power)


def reg_energy(v: np.ndarray, weights: SpectralWeights, beta: float) -> float:
    """(β/2)⟨𝒜v, v⟩"""
    return 0.5 * inner(apply_reg(v, weights, beta), v)


# ============== Projections ==============


def project_div_free(b: np.ndarray) -> np.ndarray:
    """Leray 투영 𝒦[b] = b − ∇Δ⁻¹∇·b (모드별 I − kkᵀ/|k|², 0 모드 유지)"""
    _check_finite(b, "project_div_free 입력")
    kd1, kd2 = derivative_wavenumbers(b.shape[-2:])
    bh = fft2(b)
    ksq = kd1**2 + kd2**2
    dot = np.divide(kd1 * bh[0] + kd2 * bh[1], ksq, out=np.zeros_like(bh[0]), where=ksq > 0)
    return ifft2(np.stack([bh[0] - kd1 * dot, bh[1] - kd2 * dot]))


def apply_div_penalty(v: np.ndarray, beta_w: float) -> np.ndarray:
    """β_w·∇ᵀ(I − Δ)∇· 의 작용 - (β_w/2)‖∇·v‖²_H¹ 의 gradient"""
    kd1, kd2 = derivative_wavenumbers(v.shape[-2:])
    vh = fft2(v)
    weighted = beta_w * (1.0 + wavenumber_squared(v.shape[-2:])) * (kd1 * vh[0] + kd2 * vh[1])
    return ifft2(np.stack([kd1 * weighted, kd2 * weighted]))


# ============== Restriction / prolongation ==============


def _axis_map(n_src: int, n_tgt: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """한 축의 (source index, target index, weight). 잘린 Nyquist 는 ±를 합치고, 늘릴 때는 반씩 나눈다"""
    if n_tgt % 2:
        raise GridError(f"resample 대상 크기는 짝수여야 합니다: {n_tgt}")
    half_t = n_tgt // 2
    entries: list[tuple[int, int, float]] = []
    for i, k in enumerate(_integer_frequencies(n_src)):
        if n_tgt < n_src:
            if abs(k) < half_t:
                entries.append((i, k % n_tgt, 1.0))
            elif abs(k) == half_t:
                entries.append((i, half_t, 1.0))
        elif n_src % 2 == 0 and k == -(n_src // 2):
            entries.append((i, k % n_tgt, 0.5))
            entries.append((i, -k % n_tgt, 0.5))
        else:
            entries.append((i, k % n_tgt, 1.0))
    src, tgt, wts = (np.asarray(col) for col in zip(*entries))
    return src, tgt, wts * (n_tgt / n_src)


def _resample_axis(uh: np.ndarray, n_tgt: int, axis: int) -> np.ndarray:
    n_src = uh.shape[axis]
    if n_src == n_tgt:
        return uh
    src, tgt, wts = _axis_map(n_src, n_tgt)
    moved = np.moveaxis(uh, axis, 0)
    out = np.zeros((n_tgt,) + moved.shape[1:], dtype=complex)
    np.add.at(out, tgt, moved[src] * wts.reshape((-1,) + (1,) * (moved.ndim - 1)))
    return np.moveaxis(out, 0, axis)


def resample(u: np.ndarray, target: Grid) -> np.ndarray:
    """스펙트럴 restriction (절단) / prolongation (zero-padding). 원본 크기는 홀수도 허용"""
    uh = fft2(u)
    for axis, n_tgt in zip((-2, -1), target.n):
        uh = _resample_axis(uh, n_tgt, axis)
    return ifft2(uh)


def restrict(u: np.ndarray) -> np.ndarray:
    return resample(u, Grid.of(u).coarse())


def prolong(u: np.ndarray) -> np.ndarray:
    return resample(u, Grid.of(u).fine())


@lru_cache(maxsize=32)
def _low_band_mask(shape: tuple[int, int]) -> np.ndarray:
    k1, k2 = wavenumbers(shape)
    return _readonly((np.abs(k1) < shape[0] / 4) & (np.abs(k2) < shape[1] / 4))


def cutoff_filter(u: np.ndarray, kind: Band | str) -> np.ndarray:
    """이상적 low/high-pass. low 대역은 축마다 |k_i| < n_i/4"""
    mask = _low_band_mask(u.shape[-2:])
    if Band(kind) == Band.HIGH:
        mask = ~mask
    return ifft2(mask * fft2(u))


# ============== Inner products / random directions ==============


def inner(u: np.ndarray, w: np.ndarray) -> float:
    """중점 구적 내적 h1·h2·Σ u w (벡터 필드는 성분 합)"""
    h1, h2 = Grid.of(u).h
    return float(h1 * h2 * np.sum(u * w))


def norm(u: np.ndarray) -> float:
    return float(np.sqrt(max(inner(u, u), 0.0)))


def fourier_relative_error(u: np.ndarray, reference: np.ndarray) -> float:
    """u 를 reference 격자로 resample 한 뒤 Fourier 영역 상대 ℓ² 오차"""
    target = Grid.of(reference)
    diff_hat = sp_fft.fft2(resample(u, target) - reference)
    ref_hat = sp_fft.fft2(reference)
    denom = float(np.linalg.norm(ref_hat))
    return float(np.linalg.norm(diff_hat)) / denom if denom > 0 else float(np.linalg.norm(diff_hat))


def band_limited_random(grid: Grid, rng: np.random.Generator, components: int | None = None) -> np.ndarray:
    """상위 1/3 모드를 0으로 둔 랜덤 필드 (max-norm 1)"""
    shape = grid.shape if components is None else (components,) + grid.shape
    k1, k2 = wavenumbers(grid.shape)
    mask = (np.abs(k1) < grid.n[0] / 3) & (np.abs(k2) < grid.n[1] / 3)
    field = sp_fft.ifft2(mask * sp_fft.fft2(rng.standard_normal(shape))).real
    return field / np.max(np.abs(field))
