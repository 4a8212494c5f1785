import hypothesis
import numpy as np
import pytest

from hgpopt.hgp import build_hgp
from hgpopt.tanner import binary_matrix, random_full_rank_regular

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

REP3 = [[1, 1, 0], [0, 1, 1]]


@pytest.fixture(scope="session")
def code5():
    """[[5,1]] from the length-2 repetition code."""
    return build_hgp(np.array([[1, 1]]))


@pytest.fixture(scope="session")
def code13():
    """[[13,1]] from the length-3 repetition code, distance 3."""
    return build_hgp(np.array(REP3))


@pytest.fixture(scope="session")
def state625():
    """Random (3,4)-regular [20,5] code; the first simple full-rank draw of seed 0."""
    return random_full_rank_regular(15, 20, 3, 4, 0)


@pytest.fixture(scope="session")
def code625(state625):
    return build_hgp(binary_matrix(state625))
