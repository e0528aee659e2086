"""수송 솔버 팩토리 + 함수형 API"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from vreg_app.schemas.config import HessianMode, Scheme, SchemeConfig
from vreg_app.services.transport.base import TransportSolver
from vreg_app.services.transport.rk2 import RungeKuttaTransport
from vreg_app.services.transport.semi_lagrangian import SemiLagrangianTransport
from vreg_app.services.transport.types import TimeGrid

logger = logging.getLogger(__name__)


def make_transport(v: np.ndarray, cfg: SchemeConfig, tg: TimeGrid | None = None) -> TransportSolver:
    """스킴에 맞는 솔버 (v 에 묶임)"""
    if cfg.scheme == Scheme.SL:
        return SemiLagrangianTransport(v, cfg, tg)
    return RungeKuttaTransport(v, cfg, tg)


def solve_state(v: np.ndarray, m0: np.ndarray, cfg: SchemeConfig, tg: TimeGrid | None = None) -> np.ndarray:
    return make_transport(v, cfg, tg).solve_state(m0)


def solve_adjoint(v: np.ndarray, lam1: np.ndarray, cfg: SchemeConfig, tg: TimeGrid | None = None) -> np.ndarray:
    return make_transport(v, cfg, tg).solve_adjoint(lam1)


def solve_inc_state(
    v: np.ndarray, vt: np.ndarray, m_traj: np.ndarray, cfg: SchemeConfig, tg: TimeGrid | None = None
) -> np.ndarray:
    tg = tg or TimeGrid(m_traj.shape[0] - 1)
    return make_transport(v, cfg, tg).solve_inc_state(vt, m_traj)


def solve_inc_adjoint(
    v: np.ndarray,
    vt: np.ndarray,
    lam_t1: np.ndarray,
    cfg: SchemeConfig,
    tg: TimeGrid | None = None,
    lam_traj: np.ndarray | None = None,
    mode: HessianMode = HessianMode.GN,
) -> np.ndarray:
    return make_transport(v, cfg, tg).solve_inc_adjoint(vt, lam_t1, lam_traj=lam_traj, mode=mode)


def jacobian_det(v: np.ndarray, cfg: SchemeConfig, tg: TimeGrid | None = None) -> np.ndarray:
    return make_transport(v, cfg, tg).jacobian_det()


@dataclass
class JacobianSummary:
    """det∇y 요약 - min > 0 이면 diffeomorphic"""

    min: float
    max: float
    max_deviation: float

    @property
    def diffeomorphic(self) -> bool:
        return self.min > 0.0


def summarize_jacobian(J: np.ndarray) -> JacobianSummary:
    summary = JacobianSummary(
        min=float(np.min(J)),
        max=float(np.max(J)),
        max_deviation=float(np.max(np.abs(J - 1.0))),
    )
    if not summary.diffeomorphic:
        logger.warning(f"Jacobian determinant 가 양수가 아님: min={summary.min:.3e}")
    return summary
