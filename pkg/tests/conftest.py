import pytest

from k3gw.engine import Engine


@pytest.fixture(scope="session")
def engine():
    return Engine()
