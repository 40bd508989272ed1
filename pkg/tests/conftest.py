import os

import hypothesis
import hypothesis.strategies as st
import pytest

from cfiforge.f2 import F2Matrix, F2Subspace

hypothesis.settings.register_profile("default", deadline=None, max_examples=60)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.register_profile("thorough", deadline=None, max_examples=400)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def bit_rows(nrows: int, ncols: int):
    return st.lists(st.integers(0, (1 << ncols) - 1), min_size=nrows, max_size=nrows)


@st.composite
def matrices(draw, max_rows=5, max_cols=6):
    ncols = draw(st.integers(1, max_cols))
    nrows = draw(st.integers(0, max_rows))
    rows = draw(bit_rows(nrows, ncols))
    return F2Matrix(tuple(range(nrows)), tuple(f"c{i}" for i in range(ncols)), tuple(rows))


@st.composite
def subspace_pairs(draw, max_dim=6):
    n = draw(st.integers(1, max_dim))
    amb = tuple(f"x{i}" for i in range(n))
    a = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n))
    b = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n))
    return F2Subspace.from_bits(amb, a), F2Subspace.from_bits(amb, b)


def span_bruteforce(vectors, n):
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


@pytest.fixture
def span():
    return span_bruteforce


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
