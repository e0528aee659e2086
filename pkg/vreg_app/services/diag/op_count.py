"""solve 종류별 FFT / 보간 횟수 측정과 SL 닫힌 식 비교

SL: state = d + nt, adjoint = d + nt + 1 (특성곡선 d, 출발점 ∇·v 1, 스텝당 1).
"""

from __future__ import annotations

import logging
import time
from typing import Callable

import numpy as np

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.config import HessianMode, Scheme, SchemeConfig
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.spectral.grid import DIM, Grid
from vreg_app.services.transport.base import TransportSolver
from vreg_app.services.transport.solver import make_transport

logger = logging.getLogger(__name__)

COUNT_SLACK = 2


def expected_interp(solve: str, scheme: Scheme, nt: int) -> int | None:
    if scheme != Scheme.SL:
        return 0
    return {"state": DIM + nt, "adjoint": DIM + nt + 1}.get(solve)


def op_count_check(v: np.ndarray, m0: np.ndarray, cfg: SchemeConfig) -> ErrorReport:
    """solve 마다 새 솔버 인스턴스로 측정 (특성곡선 추적 비용 포함)"""
    start = time.perf_counter()
    vt = 0.5 * v

    def state(t: TransportSolver) -> None:
        t.solve_state(m0)

    def adjoint(t: TransportSolver) -> None:
        t.solve_adjoint(m0)

    def inc_state(t: TransportSolver) -> None:
        t.solve_inc_state(vt, t.solve_state(m0))

    def inc_adjoint(t: TransportSolver) -> None:
        t.solve_inc_adjoint(vt, m0, mode=HessianMode.GN)

    def jacobian(t: TransportSolver) -> None:
        t.jacobian_det()

    solves: dict[str, Callable[[TransportSolver], None]] = {
        "state": state,
        "adjoint": adjoint,
        "inc_state": inc_state,
        "inc_adjoint": inc_adjoint,
        "jacobian": jacobian,
    }
    rows = []
    with tracked_ops() as total:
        for name, run in solves.items():
            transport = make_transport(v, cfg)
            with tracked_ops() as ops:
                run(transport)
            expected = expected_interp(name, cfg.scheme, transport.nt)
            rows.append(
                {
                    "solve": name,
                    "scheme": cfg.scheme.value,
                    "nt": transport.nt,
                    "fft": ops.fft,
                    "interp": ops.interp,
                    "expected_interp": expected,
                    "within_slack": None if expected is None else abs(ops.interp - expected) <= COUNT_SLACK,
                }
            )
            logger.info(f"op-count {name}: fft={ops.fft}, interp={ops.interp} (기대 {expected})")

    return ErrorReport(
        protocol="op-count",
        grid_sizes=[list(Grid.of(m0).n)],
        scheme=cfg.scheme.value,
        cfl=cfg.cfl,
        rows=rows,
        summary={"all_within_slack": all(r["within_slack"] is not False for r in rows)},
        wall_time=time.perf_counter() - start,
        fft_count=total.fft,
        interp_count=total.interp,
    )
