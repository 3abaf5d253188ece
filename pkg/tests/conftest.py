import pathlib

import pytest

from tljones.fusion import FusionContext


@pytest.fixture(scope="session")
def fixture_dir():
    return pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def ctx5():
    return FusionContext(r=5)


@pytest.fixture(scope="session")
def ctx7():
    return FusionContext(r=7)
