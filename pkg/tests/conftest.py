import pytest
from hypothesis import HealthCheck, settings

from bgnlab.algebra import gen_params, toy_params

settings.register_profile(
    "ci",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def toy():
    """p_sub=5, q_sub=7, field_mod=139: small enough for exhaustive oracles."""
    return toy_params()


@pytest.fixture(scope="session")
def std():
    """32-bit subgroup primes, the default desk scale."""
    return gen_params(32, 32, b"test-fixture")
