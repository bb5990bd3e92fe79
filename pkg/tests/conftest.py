"""Shared groups for the test suite, built once per module."""

import numpy as np
import pytest

from hypermaps.app.families import build_model
from hypermaps.app.services.autgrp import aut_bruteforce, aut_constructed
from hypermaps.app.services.permgrp import close_permutations


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running group computations")


@pytest.fixture(scope="module")
def alt5():
    return build_model("ALT", 5)


@pytest.fixture(scope="module")
def alt5_aut(alt5):
    return aut_constructed(alt5, validate=True)


@pytest.fixture(scope="module")
def psl27():
    return build_model("PSL", 2, 7)


@pytest.fixture(scope="module")
def psl27_aut(psl27):
    return aut_constructed(psl27, validate=False)


@pytest.fixture(scope="module")
def sym3():
    return close_permutations([[1, 0, 2], [1, 2, 0]], name="Sym(3)")


@pytest.fixture(scope="module")
def dihedral8():
    """The dihedral group of order 8 on the vertices of a square, generated by two reflections."""
    return close_permutations([[0, 3, 2, 1], [1, 0, 3, 2]], name="D8")


@pytest.fixture(scope="module")
def dihedral8_aut(dihedral8):
    return aut_bruteforce(dihedral8)


@pytest.fixture
def rng():
    return np.random.default_rng(20170401)
