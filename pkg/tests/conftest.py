import numpy as np
import pytest
from hypothesis import settings, strategies as st

from gwtoll.oracle import iter_trees
from gwtoll.trees import build_tree

# single-core CI boxes are slow and timing noise is not a failure
settings.register_profile("default", deadline=None)
settings.load_profile("default")


def _close(draws, max_extra=None):
    """Turn arbitrary outdegree draws into a valid preorder sequence."""
    seq, slots = [], 1
    for x in draws:
        if slots == 0:
            break
        seq.append(x)
        slots += x - 1
    seq.extend([0] * slots)
    return seq


@st.composite
def trees(draw, max_degree=4, max_len=40):
    draws = draw(st.lists(st.integers(0, max_degree), min_size=0, max_size=max_len))
    return build_tree(_close(draws))


@pytest.fixture(scope="session")
def small_trees():
    """Every ordered tree with at most 9 nodes (2056 trees)."""
    return [build_tree(s) for n in range(1, 10) for s in iter_trees(n)]


@pytest.fixture(scope="session")
def trees_upto_10():
    return [build_tree(s) for n in range(1, 11) for s in iter_trees(n)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance verdict lines, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")
    config.addinivalue_line("markers", "slow: long-running statistical checks")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
