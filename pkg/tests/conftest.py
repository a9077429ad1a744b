import os
import sys
import warnings

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gcx import pairing  # noqa: E402

warnings.filterwarnings("ignore", message="d <= 2")


@pytest.fixture(scope="session")
def s2():
    return pairing.load_builtin("s2")


@pytest.fixture(scope="session")
def s3():
    return pairing.load_builtin("s3")


@pytest.fixture(scope="session")
def s4():
    return pairing.load_builtin("s4")


@pytest.fixture(scope="session")
def t2():
    return pairing.load_builtin("t2")


@pytest.fixture(scope="session")
def s1xs2():
    return pairing.load_builtin("s1xs2")


@pytest.fixture(scope="session")
def all_spaces(s2, s3, s4, t2):
    return {"s2": s2, "s3": s3, "s4": s4, "t2": t2}
