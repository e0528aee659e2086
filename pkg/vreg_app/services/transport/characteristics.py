"""특성곡선 추적 (Heun)"""

from __future__ import annotations

import logging

import numpy as np

from vreg_app.services.errors import NonFiniteFieldError
from vreg_app.services.interp.spline import interpolate_vector
from vreg_app.services.spectral.grid import Grid
from vreg_app.services.transport.types import Characteristics, Direction

logger = logging.getLogger(__name__)


def trace_characteristics(v: np.ndarray, ht: float, direction: Direction = Direction.FORWARD) -> Characteristics:
    """격자점에서 한 스텝 거꾸로 추적한 출발점 X_D

    x* = x − ht·v(x), X_D = x − (ht/2)(v(x) + v(x*)). backward 계열은 −v 로 추적한다.
    """
    if ht <= 0:
        raise ValueError(f"ht > 0 이어야 합니다: {ht}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteFieldError("특성곡선 추적: 속도에 NaN/Inf 가 있습니다")
    velocity = v if Direction(direction) == Direction.FORWARD else -v
    nodes = Grid.of(v).coords
    predictor = nodes - ht * velocity
    departure = nodes - 0.5 * ht * (velocity + interpolate_vector(velocity, predictor))
    logger.debug(f"특성곡선 추적 ({direction}): max|X_D - x|={np.max(np.abs(departure - nodes)):.3e}")
    return Characteristics(departure=departure, direction=Direction(direction), ht=ht)
