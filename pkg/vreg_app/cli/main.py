"""vreg CLI - register / diag / synth

종료 코드: 0 수렴(또는 정상 종료), 1 입력/설정 오류, 2 최대 반복 도달, 3 line search 실패.
"""

import logging
from pathlib import Path
from typing import Annotated, Any, Optional

import typer
from pydantic import ValidationError

from vreg_app.cli.settings import build_run_config, merge_settings
from vreg_app.controllers.diag_controller import get_diag_controller
from vreg_app.controllers.register_controller import get_register_controller
from vreg_app.controllers.synth_controller import get_synth_controller
from vreg_app.schemas.common import ExitCode
from vreg_app.schemas.config import RunConfig, Subcommand

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="vreg",
    help="2D diffeomorphic image registration (Gauss-Newton-Krylov, SL/RK2 transport)",
    no_args_is_help=True,
    add_completion=False,
)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# ============== 공통 옵션 ==============

GridOpt = Annotated[Optional[str], typer.Option("--grid", help="격자 크기: 64 또는 64x128")]
NormOpt = Annotated[Optional[str], typer.Option("--norm", help="정규화 norm: h1 | h2 | h3")]
BetaVOpt = Annotated[Optional[float], typer.Option("--betav", help="속도 정규화 가중치 β_v")]
ModelOpt = Annotated[Optional[str], typer.Option("--model", help="변형 모델: comp | incomp | nearincomp")]
BetaWOpt = Annotated[Optional[float], typer.Option("--betaw", help="near-incompressible 페널티 β_w")]
SchemeOpt = Annotated[Optional[str], typer.Option("--scheme", help="수송 스킴: rk2 | rk2a | sl")]
CflOpt = Annotated[Optional[float], typer.Option("--cfl", help="CFL 수")]
HessianModeOpt = Annotated[Optional[str], typer.Option("--hessian-mode", help="Hessian: gn | fn")]
PcOpt = Annotated[Optional[str], typer.Option("--pc", help="전처리기: reg | 2l-pcg | 2l-cheb")]
ChebItersOpt = Annotated[Optional[int], typer.Option("--cheb-iters", help="CHEB(k) 반복 수")]
EpsOpt = Annotated[Optional[float], typer.Option("--eps", help="2l-pcg coarse 허용오차 배율")]
ReestimateOpt = Annotated[
    Optional[bool], typer.Option("--reestimate-eigs/--no-reestimate-eigs", help="매 반복 고유값 재추정")
]
TolRelOpt = Annotated[Optional[float], typer.Option("--tol-rel", help="‖g‖rel 종료 기준")]
TolAbsOpt = Annotated[Optional[float], typer.Option("--tol-abs", help="‖g‖∞ 종료 기준")]
MaxitOpt = Annotated[Optional[int], typer.Option("--maxit", help="최대 Newton 반복")]
VariantOpt = Annotated[Optional[str], typer.Option("--variant", help="합성 문제: a | b")]
SigmaOpt = Annotated[Optional[float], typer.Option("--sigma", help="가우시안 smoothing (격자점 단위)")]
OutOpt = Annotated[Optional[Path], typer.Option("--out", help="출력 디렉터리")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="랜덤 방향 seed")]
ConfigOpt = Annotated[Optional[Path], typer.Option("--config", help="flat key=value 설정 파일")]
LogLevelOpt = Annotated[Optional[str], typer.Option("--log-level", help="DEBUG | INFO | WARNING")]


def _given(params: dict[str, Any]) -> dict[str, Any]:
    return {key: value for key, value in params.items() if value is not None}


def _resolve(subcommand: Subcommand, params: dict[str, Any]) -> RunConfig:
    """설정 병합 → 로깅 설정 → RunConfig 검증. 실패하면 exit 1"""
    config_path = params.pop("config", None)
    try:
        settings = merge_settings(_given(params), config_path)
    except (ValueError, OSError) as e:
        typer.echo(f"설정 오류: {e}", err=True)
        raise typer.Exit(int(ExitCode.INVALID_INPUT))

    level = str(settings.pop("log_level", "INFO")).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT)

    try:
        return build_run_config(subcommand, settings)
    except (ValidationError, ValueError) as e:
        typer.echo(f"설정 오류: {e}", err=True)
        raise typer.Exit(int(ExitCode.INVALID_INPUT))


@app.command()
def register(
    reference: Annotated[Optional[Path], typer.Option("--reference", help="reference 이미지 (.vrf | .pgm)")] = None,
    template: Annotated[Optional[Path], typer.Option("--template", help="template 이미지 (.vrf | .pgm)")] = None,
    synthetic: Annotated[Optional[str], typer.Option("--synthetic", help="입력 대신 합성 문제: a | b")] = None,
    grid: GridOpt = None,
    norm: NormOpt = None,
    betav: BetaVOpt = None,
    model: ModelOpt = None,
    betaw: BetaWOpt = None,
    scheme: SchemeOpt = None,
    cfl: CflOpt = None,
    hessian_mode: HessianModeOpt = None,
    pc: PcOpt = None,
    cheb_iters: ChebItersOpt = None,
    eps: EpsOpt = None,
    reestimate_eigs: ReestimateOpt = None,
    tol_rel: TolRelOpt = None,
    tol_abs: TolAbsOpt = None,
    maxit: MaxitOpt = None,
    sigma: SigmaOpt = None,
    out: OutOpt = None,
    seed: SeedOpt = None,
    config: ConfigOpt = None,
    log_level: LogLevelOpt = None,
) -> None:
    """정합 실행: m1, 잔차, 속도, det∇y, convergence.csv, summary.json 을 기록"""
    cfg = _resolve(Subcommand.REGISTER, dict(locals()))
    try:
        result = get_register_controller().run(cfg)
    except (ValueError, OSError) as e:
        typer.echo(f"입력 오류: {e}", err=True)
        raise typer.Exit(int(ExitCode.INVALID_INPUT))
    final = result.report.final
    typer.echo(
        f"{result.report.status.value}: 반복 {result.report.outer_iterations}, "
        f"‖g‖rel={final.grad_rel if final else 0.0:.3e}, ‖r‖rel={result.report.residual_rel:.3e}"
    )
    raise typer.Exit(int(result.exit_code))


@app.command()
def diag(
    protocol: Annotated[str, typer.Argument(help="프로토콜 이름 (예: adjoint-error, kkt-bench)")],
    variant: VariantOpt = None,
    grid: GridOpt = None,
    norm: NormOpt = None,
    betav: BetaVOpt = None,
    model: ModelOpt = None,
    betaw: BetaWOpt = None,
    scheme: SchemeOpt = None,
    cfl: CflOpt = None,
    hessian_mode: HessianModeOpt = None,
    pc: PcOpt = None,
    cheb_iters: ChebItersOpt = None,
    eps: EpsOpt = None,
    maxit: MaxitOpt = None,
    kkt_at_v_star: Annotated[
        Optional[bool], typer.Option("--kkt-at-v-star/--kkt-at-zero", help="kkt-bench 선형화 지점: v* 또는 v = 0")
    ] = None,
    out: OutOpt = None,
    seed: SeedOpt = None,
    config: ConfigOpt = None,
    log_level: LogLevelOpt = None,
) -> None:
    """진단 프로토콜 실행: <out>/<protocol>.csv, <out>/<protocol>.json"""
    cfg = _resolve(Subcommand.DIAG, dict(locals()))
    controller = get_diag_controller()
    if cfg.protocol not in controller.available():
        typer.echo(f"알 수 없는 프로토콜 '{cfg.protocol}'. 사용 가능: {', '.join(controller.available())}", err=True)
        raise typer.Exit(int(ExitCode.INVALID_INPUT))
    try:
        result = controller.run(cfg)
    except (ValueError, OSError) as e:
        typer.echo(f"입력 오류: {e}", err=True)
        raise typer.Exit(int(ExitCode.INVALID_INPUT))
    typer.echo(f"{cfg.protocol}: {len(result.report.rows)}행 → {result.csv_path}")


@app.command()
def synth(
    variant: Annotated[Optional[str], typer.Argument(help="smooth-a | smooth-b")] = None,
    grid: GridOpt = None,
    out: OutOpt = None,
    config: ConfigOpt = None,
    log_level: LogLevelOpt = None,
) -> None:
    """합성 문제 기록: reference.vrf, template.vrf, velocity.vrf"""
    cfg = _resolve(Subcommand.SYNTH, dict(locals()))
    try:
        result = get_synth_controller().run(cfg)
    except (ValueError, OSError) as e:
        typer.echo(f"입력 오류: {e}", err=True)
        raise typer.Exit(int(ExitCode.INVALID_INPUT))
    typer.echo(f"synth: {', '.join(str(p) for p in result.files.values())}")


if __name__ == "__main__":
    app()
