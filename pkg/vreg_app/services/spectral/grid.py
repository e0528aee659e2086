"""주기 정규 격자 (−π, π)²"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from vreg_app.services.errors import GridError

DIM = 2


@dataclass(frozen=True)
class Grid:
    """n = (n1, n2) 격자점, h = 2π/n. 배열은 (n1, n2), axis 0 = x¹"""

    n: tuple[int, int]

    def __post_init__(self) -> None:
        if len(self.n) != DIM:
            raise GridError(f"2D 격자만 지원합니다: n={self.n}")
        for size in self.n:
            if int(size) != size or size < 4 or size % 2:
                raise GridError(f"격자 크기는 4 이상 짝수여야 합니다: n={self.n}")
        object.__setattr__(self, "n", (int(self.n[0]), int(self.n[1])))

    @classmethod
    def square(cls, n: int) -> Grid:
        return cls((n, n))

    @classmethod
    def of(cls, u: np.ndarray) -> Grid:
        """필드 배열의 마지막 두 축에서 격자를 얻는다"""
        return cls((u.shape[-2], u.shape[-1]))

    @property
    def shape(self) -> tuple[int, int]:
        return self.n

    @property
    def vector_shape(self) -> tuple[int, int, int]:
        return (DIM, self.n[0], self.n[1])

    @property
    def size(self) -> int:
        return self.n[0] * self.n[1]

    @property
    def h(self) -> tuple[float, float]:
        return (2.0 * np.pi / self.n[0], 2.0 * np.pi / self.n[1])

    @property
    def cell_volume(self) -> float:
        return self.h[0] * self.h[1]

    def coarse(self) -> Grid:
        """축마다 절반 크기 격자"""
        return Grid((self.n[0] // 2, self.n[1] // 2))

    def fine(self) -> Grid:
        return Grid((self.n[0] * 2, self.n[1] * 2))

    @cached_property
    def coords(self) -> np.ndarray:
        """격자점 좌표, shape (2, n1, n2). x_j = −π + j·h"""
        axes = [-np.pi + np.arange(size) * step for size, step in zip(self.n, self.h)]
        points = np.stack(np.meshgrid(*axes, indexing="ij"))
        points.flags.writeable = False
        return points

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape)

    def zeros_vector(self) -> np.ndarray:
        return np.zeros(self.vector_shape)

    def check(self, u: np.ndarray) -> None:
        """u 의 마지막 두 축이 이 격자와 같은지 확인"""
        if tuple(u.shape[-2:]) != self.n:
            raise GridError(f"격자 불일치: field {u.shape[-2:]} vs grid {self.n}")
