"""diag 컨트롤러 - 이름으로 프로토콜 실행 후 CSV / JSON 기록"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from vreg_app.adapters.report_writer import write_error_report
from vreg_app.schemas.config import RunConfig
from vreg_app.schemas.report import ErrorReport
from vreg_app.services.diag.registry import PROTOCOLS, run_protocol
from vreg_app.services.errors import UnknownProtocolError

logger = logging.getLogger(__name__)


@dataclass
class DiagResult:
    report: ErrorReport
    csv_path: Path
    json_path: Path


class DiagController:
    """진단 프로토콜 실행 조율"""

    @staticmethod
    def available() -> list[str]:
        return list(PROTOCOLS)

    def run(self, cfg: RunConfig) -> DiagResult:
        if cfg.protocol is None:
            raise UnknownProtocolError(f"프로토콜 이름이 필요합니다. 사용 가능: {', '.join(PROTOCOLS)}")
        report = run_protocol(cfg.protocol, cfg)
        report = report.model_copy(update={"summary": {**report.summary, "config": cfg.model_dump(mode="json")}})
        csv_path, json_path = write_error_report(cfg.out, report)
        return DiagResult(report=report, csv_path=csv_path, json_path=json_path)


@lru_cache(maxsize=1)
def get_diag_controller() -> DiagController:
    return DiagController()
