import numpy as np
import pytest

from spherestab.config import Config


@pytest.fixture(scope="session")
def cfg():
    return Config()


@pytest.fixture(scope="session")
def grid3(cfg):
    return cfg.grid(3)


@pytest.fixture(scope="session")
def grid4(cfg):
    return cfg.grid(4)


@pytest.fixture()
def rng():
    return np.random.default_rng(2024)


@pytest.fixture(scope="session")
def sphere_points():
    r = np.random.default_rng(99)
    X = r.normal(size=(40, 3))
    return X / np.linalg.norm(X, axis=1, keepdims=True)
