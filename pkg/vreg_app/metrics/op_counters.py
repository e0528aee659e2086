"""FFT / 스플라인 보간 연산 카운터.

전역 registry 대신 전용 CollectorRegistry에 등록해서 리포트용 스냅샷만 읽는다.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

from prometheus_client import CollectorRegistry, Counter

OPS_REGISTRY = CollectorRegistry(auto_describe=True)

FFT_TOTAL = Counter(
    "vreg_fft",
    "Number of 2D FFTs (forward or inverse, per scalar component).",
    registry=OPS_REGISTRY,
)

INTERP_TOTAL = Counter(
    "vreg_interp",
    "Number of scalar cubic-spline evaluations at a full point set.",
    registry=OPS_REGISTRY,
)


@dataclass
class OpCount:
    """카운터 스냅샷 / 구간 차이"""

    fft: int = 0
    interp: int = 0

    def __sub__(self, other: OpCount) -> OpCount:
        return OpCount(fft=self.fft - other.fft, interp=self.interp - other.interp)

    def __add__(self, other: OpCount) -> OpCount:
        return OpCount(fft=self.fft + other.fft, interp=self.interp + other.interp)


def count_fft(amount: int = 1) -> None:
    FFT_TOTAL.inc(amount)


def count_interp(amount: int = 1) -> None:
    INTERP_TOTAL.inc(amount)


def snapshot() -> OpCount:
    """현재 누적 카운트"""
    fft = OPS_REGISTRY.get_sample_value("vreg_fft_total") or 0.0
    interp = OPS_REGISTRY.get_sample_value("vreg_interp_total") or 0.0
    return OpCount(fft=int(fft), interp=int(interp))


@contextmanager
def tracked_ops() -> Iterator[OpCount]:
    """블록 안에서 발생한 연산 수를 yield된 OpCount에 채운다.

    Usage:
        with tracked_ops() as ops:
            solver.solve_state(m0)
        ops.interp  # 블록 내부 보간 횟수
    """
    start = snapshot()
    delta = OpCount()
    try:
        yield delta
    finally:
        diff = snapshot() - start
        delta.fft = diff.fft
        delta.interp = diff.interp
