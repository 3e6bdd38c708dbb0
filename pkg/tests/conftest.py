import pytest

from psmod1.sieve import sieve_range


@pytest.fixture(scope="session")
def tables20k():
    return sieve_range(20_000)


@pytest.fixture(scope="session")
def tables1m():
    return sieve_range(1_000_000)


@pytest.fixture(scope="session")
def tables10m():
    return sieve_range(10_000_000)
