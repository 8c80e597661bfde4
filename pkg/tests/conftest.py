import os

import pytest

from spineforms import parse_graph

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def load_fixture(name):
    with open(os.path.join(FIXTURES, name + ".graph"), encoding="utf-8") as fh:
        return parse_graph(fh.read())


def fixture_text(name):
    with open(os.path.join(FIXTURES, name + ".graph"), encoding="utf-8") as fh:
        return fh.read()


ALL_FIXTURES = ("t3", "sigma_0_2_1", "sigma_0_3_1", "sigma_0_1_4", "sigma_0_5_1")


@pytest.fixture
def t3():
    return load_fixture("t3")


@pytest.fixture
def four_cusps():
    return load_fixture("sigma_0_1_4")


@pytest.fixture
def one_loop():
    return load_fixture("sigma_0_2_1")


@pytest.fixture
def two_loops():
    return load_fixture("sigma_0_3_1")


@pytest.fixture
def five_holes():
    return load_fixture("sigma_0_5_1")
