"""정합 문제 타입"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from vreg_app.services.errors import GridError
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.spectral.operators import norm, resample


class Provenance(str, Enum):
    SYNTHETIC = "synthetic"
    FILE = "file"


@dataclass(frozen=True)
class Preprocessing:
    """전처리 기록"""

    sigma: float | None = None
    intensity_bounds: tuple[float, float] | None = None


@dataclass(frozen=True)
class RegistrationProblem:
    """reference m_R, template m_T (같은 격자)"""

    m_ref: np.ndarray
    m_tmpl: np.ndarray
    provenance: Provenance = Provenance.SYNTHETIC
    v_star: np.ndarray | None = None
    preprocessing: Preprocessing = field(default_factory=Preprocessing)

    def __post_init__(self) -> None:
        if self.m_ref.shape != self.m_tmpl.shape:
            raise GridError(f"m_R {self.m_ref.shape} 와 m_T {self.m_tmpl.shape} 격자가 다릅니다")
        Grid.of(self.m_ref)

    @property
    def grid(self) -> Grid:
        return Grid.of(self.m_ref)

    @property
    def initial_residual(self) -> float:
        """‖m_T − m_R‖"""
        return norm(self.m_tmpl - self.m_ref)

    def resampled(self, target: Grid) -> RegistrationProblem:
        v_star = resample(self.v_star, target) if self.v_star is not None else None
        return replace(
            self,
            m_ref=resample(self.m_ref, target),
            m_tmpl=resample(self.m_tmpl, target),
            v_star=v_star,
        )

    def coarse(self) -> RegistrationProblem:
        return self.resampled(self.grid.coarse())
