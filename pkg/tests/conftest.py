from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from zmeasures.partitions import Partition
from zmeasures.zmeasure import ZParams

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def partitions(draw, max_size=10):
    n = draw(st.integers(0, max_size))
    parts = []
    left = n
    while left:
        k = draw(st.integers(1, min(left, parts[-1] if parts else left)))
        parts.append(k)
        left -= k
    return Partition(tuple(parts))


@pytest.fixture
def half():
    return ZParams(Fraction(1, 2), Fraction(1, 2))


@pytest.fixture
def half_seven_tenths():
    return ZParams(Fraction(1, 2), Fraction(7, 10))


@pytest.fixture
def principal():
    return ZParams(1 + 1j, 1 - 1j)


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = []


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE_LINES]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
