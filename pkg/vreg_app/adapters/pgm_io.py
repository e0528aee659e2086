"""Binary portable graymap (P5) adapter.

Reads 8-bit and 16-bit (big-endian) samples scaled to [0, 1]; writes 16-bit.
Array axis 0 is the image row.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path

import numpy as np

from vreg_app.services.errors import FieldFormatError

logger = logging.getLogger(__name__)

# magic, width, height, maxval (주석 허용) 뒤에 공백 한 글자
_HEADER = re.compile(rb"^P5(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)\s")
EXPORT_MAXVAL = 65535


def decode_pgm(data: bytes) -> np.ndarray:
    match = _HEADER.match(data)
    if match is None:
        raise FieldFormatError("P5 PGM 헤더를 해석할 수 없습니다")
    width, height, maxval = (int(g) for g in match.groups())
    if not 0 < maxval < 65536 or width <= 0 or height <= 0:
        raise FieldFormatError(f"잘못된 PGM 헤더: {width}x{height}, maxval={maxval}")
    dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
    body = data[match.end() :]
    expected = width * height * dtype.itemsize
    if len(body) < expected:
        raise FieldFormatError(f"PGM 데이터가 부족합니다: {len(body)} bytes (기대값 {expected})")
    samples = np.frombuffer(body[:expected], dtype=dtype).reshape(height, width)
    return samples.astype(np.float64) / maxval


def encode_pgm(image: np.ndarray) -> bytes:
    """[0, 1] 밖의 값은 잘라서 16-bit 로 저장"""
    if image.ndim != 2:
        raise FieldFormatError(f"PGM 은 2D 스칼라 이미지만 저장합니다: shape={image.shape}")
    height, width = image.shape
    samples = np.rint(np.clip(image, 0.0, 1.0) * EXPORT_MAXVAL).astype(">u2")
    return f"P5\n{width} {height}\n{EXPORT_MAXVAL}\n".encode("ascii") + samples.tobytes()


def read_pgm(path: str | Path) -> np.ndarray:
    return decode_pgm(Path(path).read_bytes())


def write_pgm(path: str | Path, image: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_pgm(image))
    logger.info(f"PGM 저장: {path} ({image.shape[1]}x{image.shape[0]})")
    return path
