from __future__ import annotations

import numpy as np
import pytest

from gclab.distributions import Distribution


@pytest.fixture(scope="session")
def mixture():
    """Half degree-1, half degree-3; the workhorse supercritical law."""
    return Distribution([(1, 0.5), (3, 0.5)])


@pytest.fixture(scope="session")
def regular3():
    return Distribution([(3, 1.0)])


@pytest.fixture(scope="session")
def critical_mix():
    """E(D(D-2)) = 0 exactly: the critical boundary case."""
    return Distribution([(1, 0.75), (3, 0.25)])


@pytest.fixture(scope="session")
def matching_law():
    return Distribution([(1, 1.0)])


@pytest.fixture(scope="session")
def all_twos():
    return Distribution([(2, 1.0)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
