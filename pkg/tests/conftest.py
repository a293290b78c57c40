import numpy as np
import pytest

import pmnet.kernels as kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    kernels.warmup()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
