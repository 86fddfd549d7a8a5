"""
Shared fixtures: the three worked systems and a small instance with S = M.
"""

import pytest

from src.exact_matrix import RingMatrix
from tests.helpers import COMPOSITE_SYSTEM, ONE_EQUATION_PAIR, SATURATED_SYSTEM, VANDERMONDE_SYSTEM


@pytest.fixture
def pair_matrix():
    return RingMatrix(ONE_EQUATION_PAIR)


@pytest.fixture
def vandermonde_matrix():
    return RingMatrix(VANDERMONDE_SYSTEM)


@pytest.fixture
def composite_matrix():
    return RingMatrix(COMPOSITE_SYSTEM)


@pytest.fixture
def saturated_matrix():
    return RingMatrix(SATURATED_SYSTEM)

