"""CSV / JSON report writers"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable

from vreg_app.schemas.report import ErrorReport, SolverReport

logger = logging.getLogger(__name__)


def _fieldnames(rows: Iterable[dict[str, Any]]) -> list[str]:
    """등장 순서대로 모든 키"""
    names: dict[str, None] = {}
    for row in rows:
        names.update(dict.fromkeys(row))
    return list(names)


def write_csv(path: str | Path, rows: list[dict[str, Any]]) -> Path:
    """한 행 = 측정 1건. 없는 값은 빈 칸"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=_fieldnames(rows), restval="")
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"CSV 저장: {path} ({len(rows)}행)")
    return path


def write_json(path: str | Path, payload: dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, default=str)
    logger.info(f"JSON 저장: {path}")
    return path


def read_json(path: str | Path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def write_convergence(path: str | Path, report: SolverReport) -> Path:
    """Newton 반복 기록 CSV"""
    return write_csv(path, [record.model_dump(mode="json") for record in report.iterations])


def write_error_report(out_dir: str | Path, report: ErrorReport) -> tuple[Path, Path]:
    """<protocol>.csv (rows) + <protocol>.json (rows 제외 전체)"""
    out_dir = Path(out_dir)
    csv_path = write_csv(out_dir / f"{report.protocol}.csv", report.rows)
    json_path = write_json(out_dir / f"{report.protocol}.json", report.model_dump(mode="json", exclude={"rows"}))
    return csv_path, json_path
