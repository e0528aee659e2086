"""수송 솔버 공통 타입 - 시간 격자, 특성곡선, 궤적 검사"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from vreg_app.schemas.config import SchemeConfig
from vreg_app.services.errors import TrajectoryError, TransportBlowUpError
from vreg_app.services.spectral.grid import Grid

logger = logging.getLogger(__name__)

# max|m| > BLOWUP_FACTOR * max|m0| 이면 발산으로 판정
BLOWUP_FACTOR = 1e3

MIN_STEPS = 2


class Direction(str, Enum):
    """forward: 전진 시간 방정식 (state, 증분 state, J). backward: adjoint 계열 (−v 로 추적)"""

    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class TimeGrid:
    """[0,1] 을 nt 등분"""

    nt: int

    def __post_init__(self) -> None:
        if self.nt < 1:
            raise ValueError(f"nt >= 1 이어야 합니다: {self.nt}")

    @property
    def ht(self) -> float:
        return 1.0 / self.nt


@dataclass(frozen=True)
class Characteristics:
    """한 스텝 (ht) 의 출발점 X_D, shape (2, n1, n2)"""

    departure: np.ndarray
    direction: Direction
    ht: float


def resolve_time_grid(v: np.ndarray, cfg: SchemeConfig) -> TimeGrid:
    """nt = max(2, ceil(max_i max|v^i| / (cfl·h^i))). cfg.nt 가 있으면 그대로 사용"""
    if cfg.nt is not None:
        return TimeGrid(cfg.nt)
    grid = Grid.of(v)
    speed = max(float(np.max(np.abs(v[i]))) / grid.h[i] for i in range(v.shape[0]))
    nt = max(MIN_STEPS, math.ceil(speed / cfg.cfl - 1e-12))
    return TimeGrid(nt)


def check_trajectory(traj: np.ndarray, tg: TimeGrid, grid: Grid, name: str) -> None:
    if traj.ndim != 3 or traj.shape[0] != tg.nt + 1:
        got = traj.shape[0] if traj.ndim == 3 else traj.shape
        raise TrajectoryError(f"{name} 궤적 길이 불일치: {got} vs nt+1={tg.nt + 1}")
    if tuple(traj.shape[1:]) != grid.shape:
        raise TrajectoryError(f"{name} 궤적 격자 불일치: {traj.shape[1:]} vs {grid.shape}")


class BlowUpGuard:
    """스텝마다 non-finite / 증폭을 검사"""

    def __init__(self, initial: np.ndarray, name: str):
        self.name = name
        scale = float(np.max(np.abs(initial))) if initial.size else 0.0
        self.limit = BLOWUP_FACTOR * scale if scale > 0 else None

    def check(self, u: np.ndarray, step: int) -> None:
        if not np.all(np.isfinite(u)):
            raise TransportBlowUpError(f"{self.name}: step {step} 에서 non-finite 값 발생")
        if self.limit is not None:
            peak = float(np.max(np.abs(u)))
            if peak > self.limit:
                raise TransportBlowUpError(f"{self.name}: step {step} 에서 max|u|={peak:.3e} > {self.limit:.3e}")
