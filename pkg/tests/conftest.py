from fractions import Fraction

import pytest
from hypothesis import strategies as st

from homcantor.core import EventuallyPeriodicCoding, params_new


@pytest.fixture
def p2():
    return params_new(2, Fraction(1, 4))


@pytest.fixture
def p3():
    return params_new(3, Fraction(1, 9))


def table_params(N):
    return params_new(N, Fraction(1, N * N))


def words(N, min_size=0, max_size=8):
    return st.lists(st.integers(0, N - 1), min_size=min_size, max_size=max_size).map(tuple)


@st.composite
def codings(draw, N=None, max_pre=3, max_per=6):
    if N is None:
        N = draw(st.integers(2, 5))
    pre = draw(words(N, 0, max_pre))
    per = draw(words(N, 1, max_per))
    return EventuallyPeriodicCoding(pre, per, N)


@st.composite
def instance_and_coding(draw, max_N=5, max_pre=3, max_per=6):
    N = draw(st.integers(2, max_N))
    return table_params(N), draw(codings(N, max_pre, max_per))
