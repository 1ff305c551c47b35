from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from dpphard.linalg import VectorSet, gram_from_vectors

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def vector_sets(draw, max_n=6, max_d=6):
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(1, max_d))
    rows = draw(st.lists(st.lists(rationals, min_size=d, max_size=d), min_size=n, max_size=n))
    return VectorSet.from_rows(rows)


@st.composite
def psd_matrices(draw, max_n=6):
    return gram_from_vectors(draw(vector_sets(max_n=max_n, max_d=max_n + 1)))


@st.composite
def subsets_of(draw, n):
    return tuple(sorted(draw(st.sets(st.integers(0, n - 1), max_size=n)))) if n else ()


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
