"""VRF1 field file adapter.

Layout: b"VRF1", little-endian uint32 n1, n2, ncomp, then ncomp·n1·n2 little-endian float64 samples
(C order, component-major). A scalar field is stored with ncomp = 1.
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np

from vreg_app.services.errors import FieldFormatError

logger = logging.getLogger(__name__)

MAGIC = b"VRF1"
_HEADER = struct.Struct("<4sIII")
_SAMPLE = np.dtype("<f8")


def encode_field(u: np.ndarray) -> bytes:
    """(n1, n2) 또는 (ncomp, n1, n2) 배열을 VRF1 바이트로"""
    if u.ndim == 2:
        ncomp, (n1, n2) = 1, u.shape
    elif u.ndim == 3:
        ncomp, n1, n2 = u.shape
    else:
        raise FieldFormatError(f"2D 스칼라 또는 벡터 필드만 저장할 수 있습니다: shape={u.shape}")
    return _HEADER.pack(MAGIC, n1, n2, ncomp) + np.ascontiguousarray(u, dtype=_SAMPLE).tobytes()


def decode_field(data: bytes) -> np.ndarray:
    """VRF1 바이트 → 배열. ncomp == 1 이면 (n1, n2)"""
    if len(data) < _HEADER.size:
        raise FieldFormatError(f"VRF1 헤더가 잘렸습니다 ({len(data)} bytes)")
    magic, n1, n2, ncomp = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FieldFormatError(f"VRF1 magic 이 아닙니다: {magic!r}")
    expected = _HEADER.size + ncomp * n1 * n2 * _SAMPLE.itemsize
    if len(data) != expected:
        raise FieldFormatError(f"VRF1 크기 불일치: {len(data)} bytes (기대값 {expected})")
    samples = np.frombuffer(data, dtype=_SAMPLE, offset=_HEADER.size).astype(np.float64)
    return samples.reshape((n1, n2) if ncomp == 1 else (ncomp, n1, n2))


def write_field(path: str | Path, u: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_field(u))
    logger.info(f"field 저장: {path} shape={u.shape}")
    return path


def read_field(path: str | Path) -> np.ndarray:
    return decode_field(Path(path).read_bytes())
