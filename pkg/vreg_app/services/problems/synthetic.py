"""합성 정합 문제 SMOOTH A / B

template 은 해석적 이미지, reference 는 template 을 v* 로 정방향 수송한 결과다.
따라서 v* 는 (수송 이산화 범위 안에서) 이 쌍을 정확히 정합한다.
"""

from __future__ import annotations

import logging

import numpy as np

from vreg_app.schemas.config import Scheme, SchemeConfig, SmoothVariant
from vreg_app.services.problems.types import Provenance, RegistrationProblem
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.transport.solver import solve_state

logger = logging.getLogger(__name__)

# 합성 쌍 생성용 정방향 수송
PAIR_SCHEME = SchemeConfig(scheme=Scheme.SL, cfl=0.2)


def smooth_velocity(variant: SmoothVariant, grid: Grid) -> np.ndarray:
    """A: 0.5·(sin x² cos x¹, sin x¹ cos x²), B: 주파수 2배, 진폭 1"""
    x1, x2 = grid.coords
    if SmoothVariant(variant) == SmoothVariant.A:
        return 0.5 * np.stack([np.sin(x2) * np.cos(x1), np.sin(x1) * np.cos(x2)])
    return np.stack([np.sin(2 * x2) * np.cos(2 * x1), np.sin(2 * x1) * np.cos(2 * x2)])


def smooth_image(variant: SmoothVariant, grid: Grid) -> np.ndarray:
    """A: 단일 bump ¼(1+cos x¹)(1+cos x²), B: x¹ 방향 두 bump ¼(1−cos 2x¹)(1+cos x²)"""
    x1, x2 = grid.coords
    if SmoothVariant(variant) == SmoothVariant.A:
        return 0.25 * (1 + np.cos(x1)) * (1 + np.cos(x2))
    return 0.25 * (1 - np.cos(2 * x1)) * (1 + np.cos(x2))


def make_synthetic_pair(
    v_star: np.ndarray,
    m_source: np.ndarray,
    cfg: SchemeConfig = PAIR_SCHEME,
) -> RegistrationProblem:
    """합성 쌍 (방향 주의: template 이 입력 이미지, reference 가 수송 결과)

    m_T = m_source, m_R = solve_state(v*, m_T) 의 t=1 값 (기본 SL(0.2)).
    v* 로 m_T 를 수송하면 m_R 이 되므로 v* 는 이 쌍의 참 속도다.
    """
    m_ref = solve_state(v_star, m_source, cfg)[-1]
    return RegistrationProblem(
        m_ref=m_ref,
        m_tmpl=m_source.copy(),
        provenance=Provenance.SYNTHETIC,
        v_star=v_star.copy(),
    )


def make_smooth_problem(
    variant: SmoothVariant, grid: Grid, cfg: SchemeConfig = PAIR_SCHEME
) -> tuple[RegistrationProblem, np.ndarray]:
    """SMOOTH A/B 합성 문제와 참 속도 v*

    template 은 해석적 이미지 smooth_image(variant), reference 는 template 을 v* 로 수송한 결과.
    """
    v_star = smooth_velocity(variant, grid)
    problem = make_synthetic_pair(v_star, smooth_image(variant, grid), cfg)
    logger.info(
        f"SMOOTH-{SmoothVariant(variant).value.upper()} 생성: grid={grid.n}, "
        f"max|v*|={np.max(np.abs(v_star)):.3f}, ‖m_T − m_R‖={problem.initial_residual:.3e}"
    )
    return problem, v_star
