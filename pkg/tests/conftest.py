import pytest

from sturmdyn import RotationNumber


@pytest.fixture(scope="session")
def golden():
    return RotationNumber.golden()


@pytest.fixture(scope="session")
def silver():
    return RotationNumber.periodic([2])
