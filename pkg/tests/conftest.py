import math

import numba
import numpy as np
import pytest

from pagani.models.integration_models import IntegratorConfig

@numba.njit
def constantOne(x):
    return 1.0


@numba.njit
def firstAxisSeventh(x):
    return x[0] ** 7


@numba.njit
def firstAxisNinth(x):
    return x[0] ** 9


@numba.njit
def quarticOnSecondAxis(x):
    return (x[1] - 0.5) ** 4 + 0.1 * (x[0] - 0.5) ** 2


@numba.njit
def infiniteNearCorner(x):
    if x[0] > 0.9:
        return math.inf
    return 1.0


class ShiftedQuadratic:
    """Plain callable object; numba cannot compile it."""

    def __init__(self, shift: float):
        self.shift = shift

    def __call__(self, x):
        return float(np.sum((x - self.shift) ** 2))


def smallConfig(tauRel: float = 1e-3, **overrides) -> IntegratorConfig:
    settings = {"initTarget": 64, "maxRegions": 2**16}
    settings.update(overrides)
    return IntegratorConfig.fromSettings(tauRel, **settings)


@pytest.fixture
def restoreThreads():
    threads = numba.get_num_threads()
    yield numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(threads)
