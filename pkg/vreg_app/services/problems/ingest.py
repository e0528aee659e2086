"""파일 입력 → 정합 문제

.vrf (VRF1 스칼라 필드) 와 .pgm (P5) 을 읽고, 요청 격자로 spectral resample 한 뒤 전처리한다.
비주기 이미지는 그대로 주기 확장되므로 경계에서 Gibbs 진동이 생길 수 있다.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from vreg_app.adapters.field_io import read_field
from vreg_app.adapters.pgm_io import read_pgm
from vreg_app.services.errors import FieldFormatError
from vreg_app.services.problems.preprocess import gaussian_smooth, normalize_intensity
from vreg_app.services.problems.types import Preprocessing, Provenance, RegistrationProblem
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.spectral.operators import resample

logger = logging.getLogger(__name__)


def load_image(path: str | Path) -> np.ndarray:
    """확장자로 포맷을 고른다 (.vrf | .pgm)"""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".vrf":
        image = read_field(path)
        if image.ndim != 2:
            raise FieldFormatError(f"이미지는 스칼라 필드여야 합니다: {path} shape={image.shape}")
        return image
    if suffix == ".pgm":
        return read_pgm(path)
    raise FieldFormatError(f"지원하지 않는 이미지 포맷: {path.name} (.vrf | .pgm)")


def _prepare(image: np.ndarray, grid: Grid, sigma: float) -> tuple[np.ndarray, tuple[float, float]]:
    if image.shape != grid.shape:
        logger.info(f"resample {image.shape} → {grid.shape}")
        image = resample(image, grid)
    return normalize_intensity(gaussian_smooth(image, sigma))


def load_problem(reference: str | Path, template: str | Path, grid: Grid, sigma: float = 1.0) -> RegistrationProblem:
    """reference / template 파일을 읽어 smoothing + [0, 1] 정규화한 문제"""
    m_ref, ref_bounds = _prepare(load_image(reference), grid, sigma)
    m_tmpl, _ = _prepare(load_image(template), grid, sigma)
    logger.info(f"입력 로드: reference={reference}, template={template}, grid={grid.n}, sigma={sigma}")
    return RegistrationProblem(
        m_ref=m_ref,
        m_tmpl=m_tmpl,
        provenance=Provenance.FILE,
        preprocessing=Preprocessing(sigma=sigma, intensity_bounds=ref_bounds),
    )
