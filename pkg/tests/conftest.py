import pytest

from cuspzeros import LFunction


@pytest.fixture(scope="session")
def lf12():
    return LFunction(12, 10_000)


@pytest.fixture(scope="session")
def lf18():
    return LFunction(18, 2_000)
