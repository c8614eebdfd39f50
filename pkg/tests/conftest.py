import numpy as np
import pytest

from config import load_settings
from models import PeriodicFunction


@pytest.fixture
def settings(monkeypatch):
    for name in ("ZQ_CONFIG", "ZQ_THREADS", "ZQ_SEED", "ZQ_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    return load_settings()


@pytest.fixture
def cosine():
    return PeriodicFunction.from_callable(np.cos, 64)


@pytest.fixture
def sine():
    return PeriodicFunction.from_callable(np.sin, 64)
