from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from homcantor.core import (
    EventuallyPeriodicCoding,
    Order,
    coding,
    format_coding,
    lex_compare,
    params_new,
    parse_coding,
    reflect,
    shift,
    word_compare,
    word_minus,
    word_plus,
)
from homcantor.errors import BadAlphabet, OutOfRange, WordOverflow, WordUnderflow

from conftest import codings, words


def test_params_examples():
    p = params_new(2, Fraction(1, 4), 128)
    assert p.R == Fraction(3, 4)
    assert abs(p.s - Fraction(1, 2)) < 1e-30
    # the figure instance N=4, rho=1/10 sits outside rho <= 1/N^2 and is rejected
    with pytest.raises(OutOfRange):
        params_new(4, "1/10")
    assert params_new(4, "1/16").R == Fraction(5, 16)
    with pytest.raises(OutOfRange):
        params_new(2, Fraction(1, 3))
    with pytest.raises(BadAlphabet):
        params_new(1, Fraction(1, 4))
    with pytest.raises(OutOfRange):
        params_new(2, 0)


@given(st.integers(2, 12), st.integers(1, 400))
def test_params_invariants(N, k):
    rho = Fraction(1, N * N + k - 1)
    p = params_new(N, rho)
    assert (N - 1) * p.R + p.rho == 1
    assert p.rho / p.R <= Fraction(1, N + 1)
    assert 0 < p.s <= 0.5


def test_reflect_and_plus_minus():
    assert reflect((1, 0, 3), 4) == (2, 3, 0)
    assert reflect((1, 1, 0, 1), 2) == (0, 0, 1, 0)
    assert reflect((), 3) == ()
    assert word_plus((0, 0), 2) == (0, 1)
    assert word_minus((1, 3)) == (1, 2)
    with pytest.raises(WordOverflow):
        word_plus((0, 1), 2)
    with pytest.raises(WordUnderflow):
        word_minus((1, 0))


@given(words(6, 0, 12))
def test_reflect_involution(w):
    assert reflect(reflect(w, 6), 6) == w


@given(words(5, 1, 10))
def test_plus_minus_inverse(w):
    if w[-1] > 0:
        assert word_plus(word_minus(w), 5) == w
    if w[-1] < 4:
        assert word_minus(word_plus(w, 5)) == w


def test_lex_compare_examples():
    assert lex_compare(coding(per=(1, 0)), coding(per=(1,))) is Order.LT
    assert lex_compare(coding((1,), (1, 0)), coding(per=(1, 1))) is Order.LT
    assert lex_compare(coding(per=(0, 1)), coding((0,), (1, 0))) is Order.EQ
    assert word_compare((1,), (1, 0, 0)) is Order.EQ


def test_canonical_form():
    c = coding((0,), (1, 0))
    assert c.pre == () and c.per == (0, 1)
    assert coding((2, 2), (1, 2, 1, 2)) == coding((2,), (2, 1))
    assert coding(per=(1, 1, 1)).per == (1,)


def test_shift_examples():
    assert shift(coding(per=(1, 0)), 1) == coding(per=(0, 1))
    assert shift(coding((1, 2, 0), (1,)), 3) == coding(per=(1,))
    c = coding((2,), (0, 1))
    assert shift(c, 0) == c


@given(codings(), st.integers(0, 20), st.integers(0, 20))
def test_shift_composes(c, m, n):
    assert shift(c, m + n) == shift(shift(c, m), n)
    assert shift(c, m).prefix(5) == tuple(c[m + i] for i in range(5))


@given(codings(N=3), codings(N=3), codings(N=3))
def test_lex_total_order(a, b, c):
    ab, ba = lex_compare(a, b), lex_compare(b, a)
    assert ab == -ba
    assert (ab is Order.EQ) == (a == b)
    if ab is not Order.GT and lex_compare(b, c) is not Order.GT:
        assert lex_compare(a, c) is not Order.GT
    assert lex_compare(a, a) is Order.EQ


@given(codings())
def test_canonicalisation_idempotent(c):
    again = EventuallyPeriodicCoding(c.pre, c.per, c.N)
    assert again == c and again.pre == c.pre and again.per == c.per
    # a longer presentation of the same sequence canonicalises to the same fields
    longer = EventuallyPeriodicCoding(c.pre + c.per, c.per * 2, c.N)
    assert longer.pre == c.pre and longer.per == c.per


@given(codings(N=4))
def test_coding_literal_roundtrip(c):
    assert parse_coding(format_coding(c, 4), 4) == c


def test_coding_literal_large_alphabet():
    c = parse_coding("pre=11,0;per=3,10", 12)
    assert c.pre == (11, 0) and c.per == (3, 10)
    with pytest.raises(OutOfRange):
        parse_coding("per=5", 4)
