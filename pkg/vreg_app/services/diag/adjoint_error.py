"""이산 adjoint 일관성 δ_ADJ = |⟨Cm₀, Cm₀⟩ − ⟨CᵀCm₀, m₀⟩| / |⟨Cm₀, Cm₀⟩|"""

from __future__ import annotations

import logging
import time

import numpy as np

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.common import UNSTABLE_SENTINEL
from vreg_app.schemas.config import Scheme, SchemeConfig
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.errors import TransportBlowUpError
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.spectral.operators import inner
from vreg_app.services.transport.solver import make_transport

logger = logging.getLogger(__name__)

DEFAULT_NT = (3, 5, 11, 21, 102)


def relative_adjoint_error(v: np.ndarray, m0: np.ndarray, cfg: SchemeConfig) -> tuple[float, int]:
    """(δ_ADJ, nt). C 는 state solve, Cᵀ 는 adjoint solve"""
    transport = make_transport(v, cfg)
    cm = transport.state_final(m0)
    ctcm = transport.adjoint_initial(cm)
    forward = inner(cm, cm)
    if forward == 0.0:
        return 0.0, transport.nt
    return abs(forward - inner(ctcm, m0)) / abs(forward), transport.nt


def _worst(rows: list[dict], scheme: Scheme) -> float | str | None:
    """스킴별 최대 δ_ADJ (발산한 행이 있으면 sentinel)"""
    values = [row["delta_adj"] for row in rows if row["scheme"] == scheme.value]
    if UNSTABLE_SENTINEL in values:
        return UNSTABLE_SENTINEL
    return max(values, default=None)


def adjoint_error(
    v: np.ndarray,
    m0: np.ndarray,
    nt_list: list[int] | tuple[int, ...] = DEFAULT_NT,
    schemes: tuple[Scheme, ...] = (Scheme.RK2A, Scheme.SL),
    cfl: float = 0.2,
) -> ErrorReport:
    """스킴별로 nt 목록 + cfl 규칙 (nt=None) 각각의 δ_ADJ"""
    start = time.perf_counter()
    rows = []
    with tracked_ops() as ops:
        for scheme in schemes:
            for nt in [*nt_list, None]:
                cfg = SchemeConfig(scheme=scheme, cfl=cfl, nt=nt)
                delta: float | str
                used_nt: int | None
                try:
                    delta, used_nt = relative_adjoint_error(v, m0, cfg)
                except TransportBlowUpError as e:
                    logger.warning(f"adjoint-error {scheme.value} nt={nt}: {e}")
                    delta, used_nt = UNSTABLE_SENTINEL, nt
                rows.append(
                    {"scheme": scheme.value, "nt": used_nt, "cfl": cfl if nt is None else None, "delta_adj": delta}
                )
                logger.info(f"adjoint-error {scheme.value} nt={used_nt}: δ_ADJ={delta}")

    return ErrorReport(
        protocol="adjoint-error",
        grid_sizes=[list(Grid.of(m0).n)],
        cfl=cfl,
        rows=rows,
        summary={scheme.value: _worst(rows, scheme) for scheme in schemes},
        wall_time=time.perf_counter() - start,
        fft_count=ops.fft,
        interp_count=ops.interp,
    )
