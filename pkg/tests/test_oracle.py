import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homcantor.core import coding
from homcantor.densities import lower_density, typical_values, upper_density
from homcantor.errors import BudgetExceeded, OutOfRange
from homcantor.measure import ball_measure, project
from homcantor.oracle import (
    oracle_ball_measure,
    oracle_lower_density,
    oracle_upper_density,
    random_eventually_periodic,
    sample_typical,
)

from conftest import table_params

TOL = 5e-3


def test_ball_examples(p2):
    cover = oracle_ball_measure(0, Fraction(3, 4), 6, p2)
    assert cover.lo <= Fraction(1, 2) <= cover.hi
    full = oracle_ball_measure(Fraction(1, 2), 2, 6, p2)
    assert full.inside_count == 2**6 and full.boundary_count == 0
    gap = oracle_ball_measure(Fraction(1, 2), Fraction(1, 16), 6, p2)
    assert (gap.inside_count, gap.boundary_count) == (0, 0)
    with pytest.raises(OutOfRange):
        oracle_ball_measure(0, 1, 0, p2)
    with pytest.raises(BudgetExceeded):
        oracle_ball_measure(Fraction(1, 3), Fraction(1, 7), 40, p2, budget=10)


@settings(max_examples=60)
@given(st.integers(2, 5), st.fractions(0, 1), st.fractions(0, 1).filter(lambda r: r > 0), st.integers(1, 12))
def test_agrees_with_cdf_difference(N, x, r, k):
    p = table_params(N)
    cover = oracle_ball_measure(x, r, k, p).enclosure()
    assert cover.overlaps(ball_measure(x, r, p))


@settings(max_examples=40)
@given(st.integers(2, 4), st.fractions(0, 1), st.fractions(0, 1).filter(lambda r: r > 0))
def test_width_shrinks_with_depth(N, x, r):
    p = table_params(N)
    widths = [oracle_ball_measure(x, r, k, p).width for k in range(1, 10)]
    assert all(a >= b for a, b in zip(widths, widths[1:]))


@pytest.mark.parametrize("per,lower,upper", [((0,), 0.408248, 0.707107), ((1, 0), 0.476731, 0.790569)])
def test_scan_examples(p2, per, lower, upper):
    c = coding(per=per)
    assert abs(oracle_lower_density(c, p2, 2, 8).lo - lower) < TOL
    assert abs(oracle_upper_density(c, p2).hi - upper) < TOL


@pytest.mark.parametrize("N", [2, 3])
def test_scans_bracket_formulas(N):
    p = table_params(N)
    rng = random.Random(N)
    for _ in range(4):
        c = random_eventually_periodic(rng, p)
        lo = oracle_lower_density(c, p, grid=8)
        up = oracle_upper_density(c, p, grid=8)
        # a scan over finitely many radii can only overshoot the liminf and undershoot the limsup
        assert lo.hi >= lower_density(c, p) - lo.slack - 1e-12
        assert up.lo <= upper_density(c, p) + up.slack + 1e-12
        assert up.hi <= 1 + 1e-12
        assert abs(lo.lo - lower_density(c, p)) < TOL
        assert abs(up.hi - upper_density(c, p)) < TOL


def test_sample_typical(p2, p3):
    a = sample_typical(p2, 40, 64, seed=7)
    assert a == sample_typical(p2, 40, 64, seed=7)
    assert abs(a.median_lower - float(typical_values(p2).lower)) < 0.02
    b = sample_typical(p3, 40, 64, seed=7)
    assert abs(b.median_upper - 1) < 0.05
    with pytest.raises(OutOfRange):
        sample_typical(p2, 0, 8, 1)


def test_random_points_are_valid(p3):
    rng = random.Random(0)
    for _ in range(20):
        c = random_eventually_periodic(rng, p3)
        assert len(c.pre) <= 3 and 1 <= len(c.per) <= 6
        assert 0 <= project(c, p3) <= 1
