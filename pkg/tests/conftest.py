"""Shared fixtures for the debias-ate test suite."""
import os

import numpy as np
import pytest

from config import settings
from database import RunRegistry
from design import PotentialOutcomeTable


def pytest_collection_modifyitems(config, items):
    if os.environ.get("DEBIAS_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set DEBIAS_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Keep outputs and the run registry out of the working tree."""
    monkeypatch.setattr(settings, "OUTPUT_DIR", str(tmp_path / "output"))
    monkeypatch.setattr(settings, "DATABASE_PATH", str(tmp_path / "runs.db"))
    monkeypatch.setattr(settings, "RECORD_RUNS", False)
    return settings


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def _make_table(rng, n, k=2):
    z = rng.standard_normal((n, k))
    a = rng.exponential(size=n) + z[:, 0] ** 2
    b = rng.standard_normal(n) + z[:, 0] * z[:, -1]
    return PotentialOutcomeTable(a=a, b=b, z=z)


@pytest.fixture
def small_table(rng):
    """n=8, K=2 population with skewed outcomes."""
    return _make_table(rng, 8)


@pytest.fixture
def constant_table(rng):
    z = rng.standard_normal((8, 2))
    ones = np.ones(8)
    return PotentialOutcomeTable(a=ones, b=ones, z=z)


@pytest.fixture
def tmp_registry(tmp_path):
    return RunRegistry(str(tmp_path / "registry.db"))


@pytest.fixture
def table_factory(rng):
    """Random populations of any size from the shared generator."""
    def factory(n, k=2):
        return _make_table(rng, n, k)
    return factory
