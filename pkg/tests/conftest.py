import os

import pytest
from hypothesis import HealthCheck, settings

from chernoff import ChernoffDist

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def dist1():
    return ChernoffDist(1.0)
