import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings
import hypothesis.strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from poscomm.counterexamples import non_positive_a_pair, non_positive_b_pair
from poscomm.ratmat import RationalMatrix

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def small_rationals(bound=3):
    return st.builds(Fraction, st.integers(-bound, bound), st.sampled_from([1, 2, 3]))


@st.composite
def square_matrices(draw, n=None, min_n=1, max_n=4, elements=None):
    n = draw(st.integers(min_n, max_n)) if n is None else n
    elements = small_rationals() if elements is None else elements
    rows = draw(st.lists(st.lists(elements, min_size=n, max_size=n), min_size=n, max_size=n))
    return RationalMatrix(rows)


@pytest.fixture
def example1():
    return non_positive_a_pair()


@pytest.fixture
def example2():
    return non_positive_b_pair()


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
