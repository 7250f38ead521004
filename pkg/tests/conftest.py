from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qwalk.coin import Family
from qwalk.evolve import InitialCoinState

settings.register_profile("qwalk", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qwalk")

SQRT3 = math.sqrt(3.0)

families = st.sampled_from([Family.X, Family.Y])
thetas = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)


@st.composite
def coin_states(draw):
    parts = draw(st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=6, max_size=6))
    v = np.array(parts[:3]) + 1j * np.array(parts[3:])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([1.0, 0.0, 0.0])
    return InitialCoinState.normalized(v)


def generic_theta(theta: float, family: Family) -> bool:
    """True when theta is at least 1e-3 away from the permutation angles."""
    c = math.cos(theta)
    if family is Family.X:
        return abs(c - 1.0) > 1e-6 and abs(1.0 + 2.0 * c) > 1e-3
    return abs(c + 1.0) > 1e-6 and abs(2.0 * c - 1.0) > 1e-3


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def sym():
    return InitialCoinState.symmetric()


@pytest.fixture
def lr():
    return InitialCoinState.left_right()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
