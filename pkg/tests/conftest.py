import random

import pytest

from assockv.associators import Associator, element_between, solve_associator


@pytest.fixture(scope="session")
def phi4() -> Associator:
    return solve_associator(4, even=True)


@pytest.fixture(scope="session")
def phi5() -> Associator:
    return solve_associator(5, even=True)


@pytest.fixture(scope="session")
def phi6() -> Associator:
    return solve_associator(6, even=True)


@pytest.fixture(scope="session")
def phi5_ones() -> Associator:
    # a second, distinct associator: odd degrees filled by the "ones" tiebreak
    return solve_associator(5, even=False, tiebreak="ones")


@pytest.fixture(scope="session")
def gt5(phi5, phi5_ones):
    return element_between(phi5, phi5_ones, "gt")


@pytest.fixture(scope="session")
def grt5(phi5, phi5_ones):
    return element_between(phi5, phi5_ones, "grt")


@pytest.fixture()
def rng() -> random.Random:
    return random.Random(20240817)
