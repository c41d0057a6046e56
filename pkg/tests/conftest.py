import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("dev", max_examples=50, deadline=None)
settings.register_profile(
    "ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


def pytest_collection_modifyitems(config, items):
    if os.getenv("ORL_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set ORL_RUN_SLOW=1 to run long reproductions")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def nontransitive():
    """Three tier distributions with a cyclic preference."""
    return [
        np.array([0.1, 0.4, 0.1, 0.4]),
        np.array([0.4, 0.0, 0.1, 0.5]),
        np.array([0.0, 0.0, 1.0, 0.0]),
    ]
