from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import pytest

from polytile.log import disableLogging
from polytile.reduction import reduce
from polytile.utils import sample_path
from polytile.wang import parse_torus
from polytile.wang import parse_wang_set

disableLogging()


def _sample_set(name):
    return parse_wang_set(Path(sample_path(name)).read_text())


@pytest.fixture(scope="session")
def uniform():
    return _sample_set("uniform.txt")


@pytest.fixture(scope="session")
def two_tile():
    return _sample_set("two_tile.txt")


@pytest.fixture(scope="session")
def three_tile():
    return _sample_set("three_tile.txt")


@pytest.fixture(scope="session")
def uniform_torus():
    return parse_torus(Path(sample_path("uniform_torus.txt")).read_text())


@pytest.fixture(scope="session")
def uniform_reduction(uniform):
    return reduce(uniform)


@pytest.fixture(scope="session")
def uniform_assembly(uniform, uniform_torus, uniform_reduction):
    from polytile.assembler import assemble_and_verify

    return assemble_and_verify(uniform, uniform_torus, reduction=uniform_reduction)
