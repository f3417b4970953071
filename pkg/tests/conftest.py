from fractions import Fraction

import pytest

from wmt.mellin import SpectralParams
from wmt.root_data import build_root_datum


@pytest.fixture(scope="session")
def a1():
    return SpectralParams(build_root_datum("A", 1))


@pytest.fixture(scope="session")
def a2():
    return SpectralParams(build_root_datum("A", 2))


@pytest.fixture(scope="session")
def a3():
    return SpectralParams(build_root_datum("A", 3))


@pytest.fixture(scope="session")
def a1_eps():
    return SpectralParams(build_root_datum("A", 1, [1]))


SPOT = {"q": Fraction(2), "y1": Fraction(1, 2), "x1": Fraction(1, 8)}
