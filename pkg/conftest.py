import math

import numpy as np
import pytest

# closed-form constants C_2, C_3, C_4
REFERENCE_CONSTANTS = {
    2: 2 / math.pi,
    3: math.sqrt(2) - 1,
    4: (4 - math.pi) / math.pi,
}

@pytest.fixture
def reference_constants():
    return dict(REFERENCE_CONSTANTS)

@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240607))

@pytest.fixture(autouse=True)
def worker_threads(monkeypatch):
    monkeypatch.setenv("HEINZ_THREADS", "2")
