import os

import pytest
from hypothesis import HealthCheck, settings

import stratos

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def load_fixture():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = stratos.fixture(name)
        return cache[name]
    return get
