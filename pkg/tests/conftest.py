import random

import pytest

from defectforms import fixtures
from defectforms.field import ZeroTestConfig

SUITE_SEED = 20230901


@pytest.fixture(scope="session")
def zero_cfg():
    return ZeroTestConfig(seed=SUITE_SEED)


@pytest.fixture
def rng():
    return random.Random(SUITE_SEED)


@pytest.fixture(scope="session")
def geom_g0():
    return fixtures.g0()


@pytest.fixture(scope="session")
def geom_g1():
    return fixtures.g1()


@pytest.fixture(scope="session")
def geom_g2():
    return fixtures.g2()


@pytest.fixture(scope="session")
def geom_g3():
    return fixtures.g3()


@pytest.fixture(scope="session")
def geom_g4():
    return fixtures.g4()


@pytest.fixture(scope="session")
def geom_g5():
    return fixtures.g5()
