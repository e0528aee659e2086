"""자기 수렴 (n → 2n) 과 참조 해 수렴 (SL vs RK2A(0.2)) 프로토콜"""

from __future__ import annotations

import logging
import time

import numpy as np

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.common import UNSTABLE_SENTINEL
from vreg_app.schemas.config import Scheme, SchemeConfig, SmoothVariant
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.errors import TransportBlowUpError
from vreg_app.services.problems.synthetic import smooth_image, smooth_velocity
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.spectral.operators import fourier_relative_error
from vreg_app.services.transport.solver import make_transport

logger = logging.getLogger(__name__)

REFERENCE_SCHEME = SchemeConfig(scheme=Scheme.RK2A, cfl=0.2)


def _solve_pair(variant: SmoothVariant, grid: Grid, cfg: SchemeConfig) -> tuple[np.ndarray, np.ndarray] | None:
    """(m(1), λ(0)) - state 는 template, adjoint 종료조건도 template 이미지. 발산하면 None"""
    v = smooth_velocity(variant, grid)
    image = smooth_image(variant, grid)
    transport = make_transport(v, cfg)
    try:
        return transport.state_final(image), transport.adjoint_initial(image)
    except TransportBlowUpError as e:
        logger.warning(f"{cfg.scheme.value}(cfl={cfg.cfl}) grid={grid.n}: {e}")
        return None


def self_convergence(variant: SmoothVariant, cfg: SchemeConfig, grids: list[Grid]) -> ErrorReport:
    """격자 n 의 해를 2n 으로 prolongation 해서 Fourier 영역 상대 ℓ² 오차"""
    if len(grids) < 2:
        raise ValueError("self-convergence 에는 격자가 2개 이상 필요합니다")
    for coarse, fine in zip(grids, grids[1:]):
        if fine.n != coarse.fine().n:
            raise ValueError(f"격자는 두 배씩 커져야 합니다: {coarse.n} → {fine.n}")

    start = time.perf_counter()
    with tracked_ops() as ops:
        solutions = [_solve_pair(variant, grid, cfg) for grid in grids]
        rows = []
        for (coarse, fine), (sol_c, sol_f) in zip(zip(grids, grids[1:]), zip(solutions, solutions[1:])):
            row: dict = {"n": coarse.n[0], "n_fine": fine.n[0], "scheme": cfg.scheme.value, "cfl": cfg.cfl}
            if sol_c is None or sol_f is None:
                row.update(state_error=UNSTABLE_SENTINEL, adjoint_error=UNSTABLE_SENTINEL)
            else:
                row.update(
                    state_error=fourier_relative_error(sol_c[0], sol_f[0]),
                    adjoint_error=fourier_relative_error(sol_c[1], sol_f[1]),
                )
            logger.info(f"self-convergence {row}")
            rows.append(row)

    return ErrorReport(
        protocol="self-convergence",
        grid_sizes=[list(g.n) for g in grids],
        scheme=cfg.scheme.value,
        cfl=cfg.cfl,
        rows=rows,
        summary={"variant": SmoothVariant(variant).value, "unstable": any(s is None for s in solutions)},
        wall_time=time.perf_counter() - start,
        fft_count=ops.fft,
        interp_count=ops.interp,
    )


def reference_convergence(variant: SmoothVariant, cfls: list[float], grid: Grid) -> ErrorReport:
    """같은 격자에서 SL(cfl) 해와 RK2A(0.2) 참조 해의 상대 ℓ² 오차"""
    start = time.perf_counter()
    with tracked_ops() as ops:
        reference = _solve_pair(variant, grid, REFERENCE_SCHEME)
        if reference is None:
            raise TransportBlowUpError("RK2A(0.2) 참조 해가 발산했습니다")
        rows = []
        for cfl in cfls:
            cfg = SchemeConfig(scheme=Scheme.SL, cfl=cfl)
            solution = _solve_pair(variant, grid, cfg)
            row: dict = {"n": grid.n[0], "scheme": Scheme.SL.value, "cfl": cfl}
            if solution is None:
                row.update(state_error=UNSTABLE_SENTINEL, adjoint_error=UNSTABLE_SENTINEL)
            else:
                row.update(
                    state_error=fourier_relative_error(solution[0], reference[0]),
                    adjoint_error=fourier_relative_error(solution[1], reference[1]),
                )
            rows.append(row)

    return ErrorReport(
        protocol="reference-convergence",
        grid_sizes=[list(grid.n)],
        scheme=Scheme.SL.value,
        rows=rows,
        summary={"variant": SmoothVariant(variant).value, "reference": "rk2a(0.2)"},
        wall_time=time.perf_counter() - start,
        fft_count=ops.fft,
        interp_count=ops.interp,
    )
