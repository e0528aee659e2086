"""register 컨트롤러 - 입력 준비, Newton-Krylov 실행, 결과 파일 기록"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from vreg_app.adapters.field_io import write_field
from vreg_app.adapters.pgm_io import write_pgm
from vreg_app.adapters.report_writer import write_convergence, write_json
from vreg_app.schemas.common import ExitCode
from vreg_app.schemas.config import RunConfig
from vreg_app.schemas.report import SolverReport
from vreg_app.services.inverse.newton import newton_solve
from vreg_app.services.problems.ingest import load_problem
from vreg_app.services.problems.synthetic import make_smooth_problem
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.transport.solver import jacobian_det, solve_state

logger = logging.getLogger(__name__)


@dataclass
class RegisterResult:
    """register 실행 결과"""

    exit_code: ExitCode
    report: SolverReport
    velocity: np.ndarray
    artifacts: dict[str, Path] = field(default_factory=dict)


class RegisterController:
    """정합 실행 조율"""

    def load(self, cfg: RunConfig) -> RegistrationProblem:
        grid = Grid(cfg.grid)
        if cfg.synthetic is not None:
            problem, _ = make_smooth_problem(cfg.synthetic, grid)
            return problem
        if cfg.reference is None or cfg.template is None:
            raise ValueError("--reference 와 --template 이 필요합니다")
        return load_problem(cfg.reference, cfg.template, grid, sigma=cfg.sigma)

    def run(self, cfg: RunConfig) -> RegisterResult:
        problem = self.load(cfg)
        v, report = newton_solve(problem, cfg.model, cfg.newton, cfg.precond, seed=cfg.seed)
        artifacts = self.write_artifacts(cfg, problem, v, report)
        exit_code = report.status.exit_code
        logger.info(f"register 완료: status={report.status.value}, exit={int(exit_code)}")
        return RegisterResult(exit_code=exit_code, report=report, velocity=v, artifacts=artifacts)

    def write_artifacts(
        self, cfg: RunConfig, problem: RegistrationProblem, v: np.ndarray, report: SolverReport
    ) -> dict[str, Path]:
        """m1, 잔차, 속도, det∇y, 수렴 CSV, summary JSON"""
        out = Path(cfg.out)
        scheme = cfg.newton.gradient_scheme
        m1 = solve_state(v, problem.m_tmpl, scheme)[-1]
        residual = m1 - problem.m_ref
        artifacts = {
            "deformed_template": write_field(out / "m1.vrf", m1),
            "deformed_template_pgm": write_pgm(out / "m1.pgm", m1),
            "residual": write_field(out / "residual.vrf", residual),
            "residual_pgm": write_pgm(out / "residual.pgm", np.abs(residual)),
            "velocity": write_field(out / "velocity.vrf", v),
            "jacobian": write_field(out / "jacobian.vrf", jacobian_det(v, scheme)),
            "convergence": write_convergence(out / "convergence.csv", report),
        }
        summary = {
            "status": report.status.value,
            "exit_code": int(report.status.exit_code),
            "reason": report.reason,
            "outer_iterations": report.outer_iterations,
            "residual_rel": report.residual_rel,
            "grad_rel": report.final.grad_rel if report.final else None,
            "jacobian_min": report.jacobian_min,
            "jacobian_max": report.jacobian_max,
            "jacobian_max_deviation": report.jacobian_max_deviation,
            "div_ratio": report.div_ratio,
            "fft_total": report.fft_total,
            "interp_total": report.interp_total,
            "wall_time": report.wall_time,
            "config": cfg.model_dump(mode="json"),
        }
        artifacts["summary"] = write_json(out / "summary.json", summary)
        return artifacts


@lru_cache(maxsize=1)
def get_register_controller() -> RegisterController:
    return RegisterController()
