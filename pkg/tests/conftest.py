import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# derandomized so the suite is reproducible run to run
settings.register_profile(
    "calgrass",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("calgrass")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
