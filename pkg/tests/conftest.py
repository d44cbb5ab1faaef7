import random
import sys

import pytest

from idealforge.poset import antichain, chain, ordinal_sum, point


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def vee():
    """Two minimal elements under one top."""
    return ordinal_sum(antichain(2), point())


@pytest.fixture
def two_chain():
    return chain(2)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.result_lines():
        terminalreporter.write_line(line)
