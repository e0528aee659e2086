"""설정 스키마 - 모델 / 수송 스킴 / Newton / 전처리기 / 실행 설정"""

from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

logger = logging.getLogger(__name__)


# ============== Enums ==============


class RegNorm(str, Enum):
    """정규화 seminorm (심볼 |k|², |k|⁴, |k|⁶)"""

    H1 = "h1"
    H2 = "h2"
    H3 = "h3"

    @property
    def order(self) -> int:
        return {"h1": 1, "h2": 2, "h3": 3}[self.value]


class Deformation(str, Enum):
    """변형 모델"""

    COMPRESSIBLE = "comp"
    INCOMPRESSIBLE = "incomp"
    NEAR_INCOMPRESSIBLE = "nearincomp"


class Scheme(str, Enum):
    """수송 방정식 시간 적분기"""

    RK2 = "rk2"
    RK2A = "rk2a"
    SL = "sl"


class HessianMode(str, Enum):
    """Hessian 근사"""

    GN = "gn"
    FULL_NEWTON = "fn"


class PrecondKind(str, Enum):
    """KKT 전처리기 종류"""

    REG = "reg"
    TWO_LEVEL = "two_level"


class CoarseSolver(str, Enum):
    """Two-level coarse 역연산 방식"""

    PCG = "pcg"
    CHEB = "cheb"


class Subcommand(str, Enum):
    REGISTER = "register"
    DIAG = "diag"
    SYNTH = "synth"


class SmoothVariant(str, Enum):
    """합성 문제 SMOOTH A / B"""

    A = "a"
    B = "b"


# ============== Model ==============


class Model(BaseModel):
    """정규화 norm, 가중치, 변형 모델"""

    model_config = ConfigDict(frozen=True)

    reg_norm: RegNorm = Field(default=RegNorm.H2, description="정규화 seminorm")
    beta_v: float = Field(default=1e-2, gt=0, description="속도 정규화 가중치")
    deformation: Deformation = Field(default=Deformation.COMPRESSIBLE, description="변형 모델")
    beta_w: float | None = Field(default=None, gt=0, description="near-incompressible 발산 페널티 가중치")

    @model_validator(mode="after")
    def _check_beta_w(self) -> Model:
        if self.deformation == Deformation.NEAR_INCOMPRESSIBLE and self.beta_w is None:
            raise ValueError("nearincomp 모델에는 beta_w > 0 가 필요합니다")
        return self

    def with_beta(self, beta_v: float) -> Model:
        """beta_v만 바꾼 사본"""
        return self.model_copy(update={"beta_v": beta_v})


# ============== Transport ==============


class SchemeConfig(BaseModel):
    """수송 스킴 + CFL (nt가 주어지면 CFL 규칙보다 우선)"""

    model_config = ConfigDict(frozen=True)

    scheme: Scheme = Field(default=Scheme.SL, description="시간 적분기")
    cfl: float = Field(default=1.0, gt=0, le=20, description="CFL 수")
    nt: int | None = Field(default=None, ge=1, description="고정 시간 스텝 수")

    @model_validator(mode="after")
    def _warn_explicit_cfl(self) -> SchemeConfig:
        if self.scheme in (Scheme.RK2, Scheme.RK2A) and self.cfl > 0.5:
            logger.warning(f"{self.scheme.value} 스킴에 CFL {self.cfl} > 0.5: 불안정할 수 있음")
        return self

    def with_nt(self, nt: int | None) -> SchemeConfig:
        return self.model_copy(update={"nt": nt})


# ============== Newton ==============


class NewtonConfig(BaseModel):
    """Gauss-Newton-Krylov 외부 반복 설정"""

    model_config = ConfigDict(frozen=True)

    max_outer_iter: int = Field(default=50, ge=0, description="최대 Newton 반복")
    tol_rel: float = Field(default=1e-2, gt=0, lt=1, description="‖g‖∞/‖g0‖∞ 종료 기준")
    tol_abs: float = Field(default=1e-5, gt=0, lt=1, description="‖g‖∞ 종료 기준")
    max_inner_iter: int = Field(default=500, ge=1, description="PCG 반복 상한")
    forcing_max: float = Field(default=0.5, gt=0, lt=1, description="forcing 상한 η_max")
    c1: float = Field(default=1e-4, gt=0, lt=0.5, description="Armijo 상수")
    shrink: float = Field(default=0.5, gt=0, lt=1, description="backtracking 축소 비율")
    max_backtracks: int = Field(default=20, ge=1, description="line search 최대 축소 횟수")
    hessian_mode: HessianMode = Field(default=HessianMode.GN, description="Hessian 근사")
    gradient_scheme: SchemeConfig = Field(default_factory=SchemeConfig, description="gradient 수송 스킴")
    hessian_scheme: SchemeConfig | None = Field(default=None, description="Hessian 수송 스킴 (없으면 gradient와 동일)")

    @property
    def resolved_hessian_scheme(self) -> SchemeConfig:
        return self.hessian_scheme or self.gradient_scheme


# ============== Preconditioner ==============


class PrecondChoice(BaseModel):
    """KKT 전처리기 선택"""

    model_config = ConfigDict(frozen=True)

    kind: PrecondKind = Field(default=PrecondKind.REG, description="REG | TwoLevel")
    coarse_solver: CoarseSolver = Field(default=CoarseSolver.CHEB, description="coarse 역연산")
    eps_scale: float = Field(default=1e-1, gt=0, lt=1, description="PCG(ε) coarse 허용오차 배율")
    cheb_iters: int = Field(default=10, ge=1, description="CHEB(k) 반복 수")
    e_min: float | None = Field(default=None, gt=0, description="고유값 하한 (없으면 추정)")
    e_max: float | None = Field(default=None, gt=0, description="고유값 상한 (없으면 v=0 에서 추정)")
    reestimate: bool = Field(default=False, description="매 외부 반복마다 고유값 재추정")
    lanczos_steps: int = Field(default=30, ge=2, description="Lanczos 스텝 수")
    coarse_cfl: float = Field(default=5.0, gt=0, le=20, description="coarse SL CFL")

    @model_validator(mode="after")
    def _check_bounds(self) -> PrecondChoice:
        if (self.e_min is None) != (self.e_max is None):
            raise ValueError("e_min, e_max 는 함께 지정해야 합니다")
        if self.e_min is not None and self.e_max is not None and not self.e_max > self.e_min:
            raise ValueError(f"e_max({self.e_max}) > e_min({self.e_min}) 이어야 합니다")
        return self


# ============== Run ==============


class RunConfig(BaseModel):
    """CLI 실행 설정 (summary JSON 에 그대로 기록)"""

    subcommand: Subcommand = Field(..., description="register | diag | synth")
    reference: Path | None = Field(default=None, description="reference 이미지 경로 (.vrf | .pgm)")
    template: Path | None = Field(default=None, description="template 이미지 경로 (.vrf | .pgm)")
    synthetic: SmoothVariant | None = Field(default=None, description="입력 대신 합성 문제 사용")
    variant: SmoothVariant = Field(default=SmoothVariant.A, description="synth/diag 합성 문제")
    protocol: str | None = Field(default=None, description="diag 프로토콜 이름")
    grid: tuple[int, int] = Field(default=(64, 64), description="격자 크기 (n1, n2)")
    sigma: float = Field(default=1.0, ge=0, description="전처리 가우시안 sigma (격자점 단위)")
    model: Model = Field(default_factory=Model)
    newton: NewtonConfig = Field(default_factory=NewtonConfig)
    precond: PrecondChoice = Field(default_factory=PrecondChoice)
    out: Path = Field(default=Path("out"), description="출력 디렉터리")
    seed: int = Field(default=0, ge=0, description="랜덤 방향 seed")
    kkt_at_v_star: bool = Field(default=True, description="kkt-bench 선형화 지점 (True: v*, False: v = 0)")

    @field_validator("grid")
    @classmethod
    def _check_grid(cls, value: tuple[int, int]) -> tuple[int, int]:
        for n in value:
            if n < 4 or n % 2:
                raise ValueError(f"격자 크기는 4 이상 짝수여야 합니다: {value}")
        return value

    @model_validator(mode="after")
    def _check_inputs(self) -> RunConfig:
        if self.subcommand == Subcommand.REGISTER and self.synthetic is None:
            if self.reference is None or self.template is None:
                raise ValueError("register 에는 --reference/--template 또는 --synthetic 이 필요합니다")
        return self
