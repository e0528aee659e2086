"""gradient 유한차분 검사와 Hessian 대칭성 검사"""

from __future__ import annotations

import logging
import time

import numpy as np

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.config import HessianMode, Model, SchemeConfig
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.inverse.objective import ReducedSpace
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.operators import band_limited_random, inner, norm
from vreg_app.services.transport.types import resolve_time_grid

logger = logging.getLogger(__name__)

DEFAULT_STEPS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)


def random_direction(space: ReducedSpace, rng: np.random.Generator) -> np.ndarray:
    """band-limited 랜덤 방향 (incompressible 이면 투영)"""
    return space.project(band_limited_random(space.grid, rng, components=2))


def base_velocity(problem: RegistrationProblem, space: ReducedSpace, rng: np.random.Generator) -> np.ndarray:
    """검사 기준점: v* 가 있으면 ½v*, 없으면 진폭 0.1 랜덤 필드"""
    if problem.v_star is not None:
        return space.project(0.5 * problem.v_star)
    return 0.1 * random_direction(space, rng)


def fixed_step_scheme(v: np.ndarray, cfg: SchemeConfig) -> SchemeConfig:
    """섭동해도 nt 가 바뀌지 않도록 기준점의 nt 로 고정"""
    return cfg.with_nt(resolve_time_grid(v, cfg).nt)


def gradient_check(
    problem: RegistrationProblem,
    model: Model,
    cfg: SchemeConfig,
    seed: int = 0,
    steps: tuple[float, ...] = DEFAULT_STEPS,
    v: np.ndarray | None = None,
) -> ErrorReport:
    """중심 차분 (J(v+εṽ) − J(v−εṽ))/2ε 과 ⟨g, ṽ⟩ 비교"""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    base_space = ReducedSpace(problem, model, cfg)
    v = base_velocity(problem, base_space, rng) if v is None else v
    fixed = fixed_step_scheme(v, cfg)
    space = ReducedSpace(problem, model, fixed)
    direction = random_direction(space, rng)

    with tracked_ops() as ops:
        directional = inner(space.evaluate_gradient(v).g, direction)
        rows = []
        for eps in steps:
            plus = space.evaluate_objective(v + eps * direction).objective
            minus = space.evaluate_objective(v - eps * direction).objective
            fd = (plus - minus) / (2.0 * eps)
            error = abs(fd - directional) / abs(directional) if directional != 0 else abs(fd)
            rows.append({"step": eps, "fd": fd, "directional": directional, "error": error})
            logger.debug(f"gradient-check ε={eps:.1e}: error={error:.3e}")

    errors = [row["error"] for row in rows]
    order = None
    if len(rows) >= 2 and errors[0] > 0 and errors[1] > 0:
        order = float(np.log(errors[0] / errors[1]) / np.log(steps[0] / steps[1]))
    summary = {
        "min_error": min(errors),
        "observed_order": order,
        "reg_norm": model.reg_norm.value,
        "deformation": model.deformation.value,
        "nt": fixed.nt,
    }
    logger.info(f"gradient-check {cfg.scheme.value}(cfl={cfg.cfl}): min error={summary['min_error']:.3e}")
    return ErrorReport(
        protocol="gradient-check",
        grid_sizes=[list(problem.grid.n)],
        scheme=cfg.scheme.value,
        cfl=cfg.cfl,
        seed=seed,
        rows=rows,
        summary=summary,
        wall_time=time.perf_counter() - start,
        fft_count=ops.fft,
        interp_count=ops.interp,
    )


def hessian_symmetry_check(
    problem: RegistrationProblem,
    model: Model,
    cfg: SchemeConfig,
    seed: int = 0,
    directions: int = 10,
    mode: HessianMode = HessianMode.GN,
    v: np.ndarray | None = None,
) -> ErrorReport:
    """|⟨Hu, w⟩ − ⟨u, Hw⟩| / (‖Hu‖‖w‖) 와 ⟨Hu, u⟩/‖u‖² (PSD 확인)"""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    space = ReducedSpace(problem, model, cfg, hessian_mode=mode)
    v = base_velocity(problem, space, rng) if v is None else v

    with tracked_ops() as ops:
        grad = space.evaluate_gradient(v)
        ctx = space.hessian_context(v, grad)
        rows = []
        for i in range(directions):
            u, w = random_direction(space, rng), random_direction(space, rng)
            hu, hw = space.hessian_matvec(u, ctx), space.hessian_matvec(w, ctx)
            scale = norm(hu) * norm(w)
            defect = abs(inner(hu, w) - inner(u, hw)) / scale if scale > 0 else 0.0
            rows.append({"direction": i, "defect": defect, "rayleigh": inner(hu, u) / inner(u, u)})

    summary = {
        "max_defect": max(row["defect"] for row in rows),
        "min_rayleigh": min(row["rayleigh"] for row in rows),
        "mode": mode.value,
    }
    logger.info(f"hessian-symmetry {cfg.scheme.value}(cfl={cfg.cfl}): max defect={summary['max_defect']:.3e}")
    return ErrorReport(
        protocol="hessian-symmetry",
        grid_sizes=[list(problem.grid.n)],
        scheme=cfg.scheme.value,
        cfl=cfg.cfl,
        seed=seed,
        rows=rows,
        summary=summary,
        wall_time=time.perf_counter() - start,
        fft_count=ops.fft,
        interp_count=ops.interp,
    )
