import os

import pytest
from hypothesis import HealthCheck, settings

from kronred.samples import integer_corpus, rational_corpus

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def q_corpus():
    return rational_corpus(50, seed=1)


@pytest.fixture(scope="session")
def z_corpus():
    return integer_corpus(50, seed=2)
