import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.stats import unitary_group

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
complex_entry = st.builds(complex, finite, finite)


def vectors(m):
    return st.lists(complex_entry, min_size=m, max_size=m).map(np.array)


@st.composite
def vector_pairs(draw, max_m=8):
    m = draw(st.integers(1, max_m))
    return draw(vectors(m)), draw(vectors(m))


def haar_unitary(m, seed):
    """Unitary from scipy, independent of the package's own sampler."""
    return unitary_group.rvs(m, random_state=seed) if m > 1 else np.array([[np.exp(2j * np.pi * np.random.default_rng(seed).random())]])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
