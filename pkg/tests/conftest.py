"""Pytest configuration and shared fixtures."""

import os
from pathlib import Path

import numpy as np
import pytest
from dotenv import load_dotenv

from common.context import ENV_PREFIX, Context
from common.utils import make_rng
from tests.test_data import TestSeeds


@pytest.fixture(scope="session", autouse=True)
def load_env():
    """Load environment variables from .env file for all tests."""
    project_root = Path(__file__).parent.parent
    env_file = project_root / ".env"

    if env_file.exists():
        load_dotenv(env_file)


@pytest.fixture
def clean_env(monkeypatch):
    """Remove every GRASSVOL_* variable so defaults apply."""
    for key in list(os.environ):
        if key.startswith(ENV_PREFIX):
            monkeypatch.delenv(key)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator shared by randomized tests."""
    return make_rng(TestSeeds.DEFAULT)


@pytest.fixture
def small_context(clean_env) -> Context:
    """Context sized for fast suite runs."""
    return Context(
        seed=TestSeeds.DEFAULT,
        trials=5,
        mc_samples=20_000,
        mc_chunk=4_096,
        holonomy_steps=512,
        suite_qubits=3,
        max_pauli_dim=5,
    )
