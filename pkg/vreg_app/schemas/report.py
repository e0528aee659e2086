"""리포트 스키마 - Newton 반복 기록, 솔버 리포트, 진단 리포트"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

from vreg_app.schemas.common import SolverStatus

# ============== Newton ==============


class IterationRecord(BaseModel):
    """외부 반복 1회 기록"""

    iteration: int = Field(..., ge=0, description="외부 반복 번호")
    grad_inf: float = Field(..., ge=0, description="‖g‖∞")
    grad_rel: float = Field(..., ge=0, description="‖g‖∞ / ‖g0‖∞")
    objective: float = Field(..., description="목적함수 J")
    mismatch: float = Field(..., ge=0, description="½‖m1 - mR‖²")
    inner_iters: int = Field(default=0, ge=0, description="PCG 반복 수")
    matvecs: int = Field(default=0, ge=0, description="Hessian matvec 수")
    line_search_steps: int = Field(default=0, ge=0, description="backtracking 횟수")
    step_length: float = Field(default=0.0, ge=0, description="채택된 step 길이")
    forcing: float = Field(default=0.0, ge=0, description="forcing 허용오차 η")
    div_ratio: float | None = Field(default=None, description="max|∇·δv| / max|δv| (incompressible)")
    fallback_step: bool = Field(default=False, description="Sobolev gradient fallback 사용 여부")
    precond_time: float = Field(default=0.0, ge=0, description="전처리기 적용 시간 (초)")
    wall_time: float = Field(default=0.0, ge=0, description="반복 소요 시간 (초)")
    fft_count: int = Field(default=0, ge=0, description="반복 중 FFT 수")
    interp_count: int = Field(default=0, ge=0, description="반복 중 보간 수")


class SolverReport(BaseModel):
    """newton_solve 결과 리포트"""

    status: SolverStatus = Field(..., description="종료 상태")
    reason: str = Field(default="", description="종료 사유")
    iterations: list[IterationRecord] = Field(default_factory=list)
    residual_rel: float = Field(default=0.0, ge=0, description="‖m1 - mR‖ / ‖mT - mR‖")
    jacobian_min: float | None = Field(default=None, description="min det∇y")
    jacobian_max: float | None = Field(default=None, description="max det∇y")
    jacobian_max_deviation: float | None = Field(default=None, description="max|det∇y − 1|")
    div_ratio: float | None = Field(default=None, description="최종 v 의 max|∇·v| / max|v| (incompressible)")
    fft_total: int = Field(default=0, ge=0)
    interp_total: int = Field(default=0, ge=0)
    wall_time: float = Field(default=0.0, ge=0)

    @property
    def final(self) -> IterationRecord | None:
        return self.iterations[-1] if self.iterations else None

    @property
    def outer_iterations(self) -> int:
        return max(len(self.iterations) - 1, 0)


# ============== Diagnostics ==============


class ErrorReport(BaseModel):
    """진단 프로토콜 결과 (CSV 한 행 = 측정 1건)"""

    protocol: str = Field(..., description="프로토콜 id")
    grid_sizes: list[list[int]] = Field(default_factory=list, description="사용한 격자 크기")
    scheme: str | None = Field(default=None, description="스킴 (여러 개면 rows 에 기록)")
    cfl: float | None = Field(default=None)
    seed: int | None = Field(default=None, description="랜덤 방향 seed")
    rows: list[dict[str, Any]] = Field(default_factory=list, description="측정 행")
    summary: dict[str, Any] = Field(default_factory=dict, description="요약 값")
    wall_time: float = Field(default=0.0, ge=0)
    fft_count: int = Field(default=0, ge=0)
    interp_count: int = Field(default=0, ge=0)

    def column(self, key: str, **filters: Any) -> list[Any]:
        """rows 에서 filters 를 만족하는 행의 key 값 목록"""
        return [row[key] for row in self.rows if all(row.get(k) == v for k, v in filters.items())]
