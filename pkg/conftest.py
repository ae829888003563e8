"""
Shared pytest fixtures: fixture file paths and the small states used across suites
"""

import os
import sys

import numpy as np
import pytest

# Add the project root to the path so the package and main import cleanly
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from quantum_stein.hermitian import State, maximally_mixed

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'fixtures')


@pytest.fixture
def fixture_path():
    def resolve(name: str) -> str:
        return os.path.join(FIXTURE_DIR, name)
    return resolve


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def pure_zero():
    return State.diagonal([1.0, 0.0])


@pytest.fixture
def pure_one():
    return State.diagonal([0.0, 1.0])


@pytest.fixture
def half():
    return maximally_mixed(2)
