"""Shared test fixtures for the surfrig test suite."""

import json
import os
import random

import pytest

from surfrig.config import get_settings, reset_settings
from surfrig.services.graphs import complete_graph, k4_union_k4, k5_minus_edge


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Clear SURFRIG_* variables and the settings singleton per test."""
    for name in list(os.environ):
        if name.startswith("SURFRIG_"):
            monkeypatch.delenv(name)
    monkeypatch.setenv("SURFRIG_SAMPLE_HEIGHT", "1000")
    reset_settings()
    yield
    reset_settings()


@pytest.fixture()
def settings():
    """Settings with a small sample height for fast exact arithmetic."""
    return get_settings()


@pytest.fixture()
def rng():
    """A seeded random generator."""
    return random.Random(12345)


@pytest.fixture()
def k5e():
    """K5 minus the edge (3, 4)."""
    return k5_minus_edge()


@pytest.fixture()
def k4k4():
    """Two copies of K4 sharing the edge (0, 1)."""
    return k4_union_k4()


@pytest.fixture()
def k4():
    return complete_graph(4)


@pytest.fixture()
def write_json(tmp_path):
    """Write an object as JSON under tmp_path and return the path."""
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return _write
