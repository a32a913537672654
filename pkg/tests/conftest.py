import pytest

from sigmacodes import codes

QUARTIC_Q5 = "y2=3*(x^4+2)"
QUARTIC_Q9 = "y2=x^4+1"


@pytest.fixture(scope="session")
def code_1026():
    return codes.construct(QUARTIC_Q5, 5, 2, 1, keep_functions=True)


@pytest.fixture(scope="session")
def code_25626():
    return codes.construct(QUARTIC_Q5, 5, 4, 1)


@pytest.fixture(scope="session")
def code_10450():
    return codes.construct(QUARTIC_Q9, 9, 2, 1)


@pytest.fixture(scope="session")
def code_126():
    return codes.construct("rational", 5, 0, 1)
