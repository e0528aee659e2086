"""synth 컨트롤러 - SMOOTH A/B 합성 문제를 VRF1 파일로 기록"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from vreg_app.adapters.field_io import write_field
from vreg_app.schemas.config import RunConfig
from vreg_app.services.problems.synthetic import make_smooth_problem
from vreg_app.services.problems.types import RegistrationProblem
from vreg_app.services.spectral.grid import Grid

logger = logging.getLogger(__name__)


@dataclass
class SynthResult:
    problem: RegistrationProblem
    files: dict[str, Path] = field(default_factory=dict)


class SynthController:
    """합성 문제 생성 조율"""

    def run(self, cfg: RunConfig) -> SynthResult:
        problem, v_star = make_smooth_problem(cfg.variant, Grid(cfg.grid))
        out = Path(cfg.out)
        files = {
            "reference": write_field(out / "reference.vrf", problem.m_ref),
            "template": write_field(out / "template.vrf", problem.m_tmpl),
            "velocity": write_field(out / "velocity.vrf", v_star),
        }
        logger.info(f"synth 완료: {out} ({len(files)}개 파일)")
        return SynthResult(problem=problem, files=files)


@lru_cache(maxsize=1)
def get_synth_controller() -> SynthController:
    return SynthController()
