"""CLI 설정 병합

우선순위: CLI 플래그 > --config 파일 (flat key=value) > VREG_* 환경변수 (.env 포함) > 기본값.
키는 긴 플래그 이름과 같고 '-' 와 '_' 를 구분하지 않는다.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Mapping

from dotenv import dotenv_values, load_dotenv

from vreg_app.schemas.config import (
    CoarseSolver,
    Model,
    NewtonConfig,
    PrecondChoice,
    PrecondKind,
    RunConfig,
    SchemeConfig,
    Subcommand,
)

logger = logging.getLogger(__name__)

ENV_PREFIX = "VREG_"

SETTING_KEYS = frozenset(
    {
        "grid",
        "norm",
        "betav",
        "model",
        "betaw",
        "scheme",
        "cfl",
        "hessian_scheme",
        "hessian_cfl",
        "hessian_mode",
        "pc",
        "cheb_iters",
        "eps",
        "reestimate_eigs",
        "tol_rel",
        "tol_abs",
        "maxit",
        "out",
        "seed",
        "variant",
        "sigma",
        "reference",
        "template",
        "synthetic",
        "protocol",
        "log_level",
        "kkt_at_v_star",
    }
)

PC_CHOICES = {
    "reg": (PrecondKind.REG, None),
    "2l-pcg": (PrecondKind.TWO_LEVEL, CoarseSolver.PCG),
    "2l-cheb": (PrecondKind.TWO_LEVEL, CoarseSolver.CHEB),
}


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").lower().replace("-", "_")


def _checked(values: Mapping[str, Any], source: str) -> dict[str, Any]:
    out = {}
    for key, value in values.items():
        name = normalize_key(key)
        if name not in SETTING_KEYS:
            raise ValueError(f"{source}: 알 수 없는 설정 키 '{key}'")
        if value is not None and value != "":
            out[name] = value
    return out


def env_settings(environ: Mapping[str, str] | None = None) -> dict[str, Any]:
    """VREG_* 환경변수. environ 이 없으면 .env 를 읽은 뒤 os.environ 을 쓴다"""
    if environ is None:
        load_dotenv()
        environ = os.environ
    values = {
        key[len(ENV_PREFIX) :]: value
        for key, value in environ.items()
        if key.startswith(ENV_PREFIX) and normalize_key(key[len(ENV_PREFIX) :]) in SETTING_KEYS
    }
    return _checked(values, "환경변수")


def file_settings(path: str | Path | None) -> dict[str, Any]:
    if path is None:
        return {}
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"설정 파일이 없습니다: {path}")
    return _checked(dotenv_values(path), f"설정 파일 {path}")


def merge_settings(
    cli: Mapping[str, Any],
    config_path: str | Path | None = None,
    environ: Mapping[str, str] | None = None,
) -> dict[str, Any]:
    """env < file < cli"""
    merged = env_settings(environ)
    merged.update(file_settings(config_path))
    merged.update(_checked(cli, "CLI"))
    return merged


def parse_grid(text: str | int | tuple[int, int]) -> tuple[int, int]:
    """"64" → (64, 64), "64x128" → (64, 128)"""
    if isinstance(text, tuple):
        return text
    parts = str(text).lower().split("x")
    if len(parts) == 1:
        return (int(parts[0]), int(parts[0]))
    if len(parts) == 2:
        return (int(parts[0]), int(parts[1]))
    raise ValueError(f"격자 형식은 N 또는 N1xN2 입니다: {text}")


def parse_variant(text: str) -> str:
    """"smooth-a" / "a" → "a" """
    value = str(text).lower()
    return value.removeprefix("smooth-").removeprefix("smooth_")


def build_run_config(subcommand: Subcommand, settings: Mapping[str, Any]) -> RunConfig:
    """병합된 flat 설정 → RunConfig (pydantic 검증)"""
    s = dict(settings)

    model_fields = {
        "reg_norm": s.get("norm"),
        "beta_v": s.get("betav"),
        "deformation": s.get("model"),
        "beta_w": s.get("betaw"),
    }
    model = Model(**{k: v for k, v in model_fields.items() if v is not None})

    gradient_scheme = SchemeConfig(**{k: s[f] for k, f in (("scheme", "scheme"), ("cfl", "cfl")) if f in s})
    hessian_scheme = None
    if "hessian_scheme" in s or "hessian_cfl" in s:
        hessian_scheme = SchemeConfig(
            scheme=s.get("hessian_scheme", gradient_scheme.scheme),
            cfl=s.get("hessian_cfl", gradient_scheme.cfl),
        )
    newton_fields = {
        "tol_rel": s.get("tol_rel"),
        "tol_abs": s.get("tol_abs"),
        "max_outer_iter": s.get("maxit"),
        "hessian_mode": s.get("hessian_mode"),
    }
    newton = NewtonConfig(
        gradient_scheme=gradient_scheme,
        hessian_scheme=hessian_scheme,
        **{k: v for k, v in newton_fields.items() if v is not None},
    )

    precond_fields: dict[str, Any] = {
        "cheb_iters": s.get("cheb_iters"),
        "eps_scale": s.get("eps"),
        "reestimate": s.get("reestimate_eigs"),
    }
    if "pc" in s:
        pc = str(s["pc"]).lower()
        if pc not in PC_CHOICES:
            raise ValueError(f"--pc 는 {', '.join(PC_CHOICES)} 중 하나여야 합니다: {s['pc']}")
        kind, coarse = PC_CHOICES[pc]
        precond_fields.update(kind=kind, coarse_solver=coarse)
    precond = PrecondChoice(**{k: v for k, v in precond_fields.items() if v is not None})

    run_fields = {
        "reference": s.get("reference"),
        "template": s.get("template"),
        "synthetic": parse_variant(s["synthetic"]) if "synthetic" in s else None,
        "variant": parse_variant(s["variant"]) if "variant" in s else None,
        "protocol": s.get("protocol"),
        "grid": parse_grid(s["grid"]) if "grid" in s else None,
        "sigma": s.get("sigma"),
        "out": s.get("out"),
        "seed": s.get("seed"),
        "kkt_at_v_star": s.get("kkt_at_v_star"),
    }
    return RunConfig(
        subcommand=subcommand,
        model=model,
        newton=newton,
        precond=precond,
        **{k: v for k, v in run_fields.items() if v is not None},
    )
