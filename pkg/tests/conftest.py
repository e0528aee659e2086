"""공통 fixture - 격자, 합성 문제, 시드 고정 랜덤 필드"""

import numpy as np
import pytest

from vreg_app.schemas.config import Scheme, SchemeConfig, SmoothVariant
from vreg_app.services.problems.synthetic import make_smooth_problem
from vreg_app.services.spectral.grid import Grid


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def grid32():
    return Grid.square(32)


@pytest.fixture(scope="session")
def grid64():
    return Grid.square(64)


@pytest.fixture(scope="session")
def rk2a_cfg():
    return SchemeConfig(scheme=Scheme.RK2A, cfl=0.2)


@pytest.fixture(scope="session")
def sl_cfg():
    return SchemeConfig(scheme=Scheme.SL, cfl=1.0)


@pytest.fixture(scope="session")
def smooth_a_32(grid32):
    problem, _ = make_smooth_problem(SmoothVariant.A, grid32)
    return problem


@pytest.fixture(scope="session")
def smooth_a_64(grid64):
    problem, _ = make_smooth_problem(SmoothVariant.A, grid64)
    return problem
