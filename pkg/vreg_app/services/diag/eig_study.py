"""β 별 coarse split Hessian 고유값 추정과 재스케일 예측 오차"""

from __future__ import annotations

import logging
import time

from vreg_app.metrics.op_counters import tracked_ops
from vreg_app.schemas.config import Model, PrecondChoice
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.precond.eigs import EigEstimate, estimate_eigs
from vreg_app.services.problems.types import RegistrationProblem

logger = logging.getLogger(__name__)


def eig_study(
    problem: RegistrationProblem,
    model: Model,
    betas: list[float],
    choice: PrecondChoice | None = None,
    seed: int = 0,
) -> ErrorReport:
    """v=0 에서 β 마다 e_max 를 추정하고, 첫 β 의 추정을 재스케일한 예측과 비교"""
    choice = choice or PrecondChoice()
    start = time.perf_counter()
    rows = []
    first: EigEstimate | None = None
    with tracked_ops() as ops:
        for beta in betas:
            estimate = estimate_eigs(problem, model.with_beta(beta), choice, seed=seed)
            first = first or estimate
            predicted = first.rescaled(beta).e_max
            rows.append(
                {
                    "beta_v": beta,
                    "e_min": estimate.e_min,
                    "e_max": estimate.e_max,
                    "scaled_spread": (estimate.e_max - 1.0) * beta,
                    "predicted_e_max": predicted,
                    "prediction_error": abs(predicted - estimate.e_max) / estimate.e_max,
                    "lanczos_steps": estimate.lanczos_steps,
                    "power_fallback": estimate.power_fallback,
                }
            )

    spreads = [row["scaled_spread"] for row in rows]
    summary = {
        "scaled_spread_variation": (max(spreads) - min(spreads)) / max(spreads) if max(spreads) > 0 else 0.0,
        "max_prediction_error": max(row["prediction_error"] for row in rows),
    }
    logger.info(f"eig-study: (e_max − 1)·β 변동 {summary['scaled_spread_variation']:.3e}")
    return ErrorReport(
        protocol="eig-study",
        grid_sizes=[list(problem.grid.n)],
        seed=seed,
        rows=rows,
        summary=summary,
        wall_time=time.perf_counter() - start,
        fft_count=ops.fft,
        interp_count=ops.interp,
    )
