"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` to see the report lines.
"""
import math
import random
import time
from fractions import Fraction

import pytest

from homcantor.core import coding, params_new
from homcantor.critical import (
    a_critical,
    a_from_t_gamma,
    admissible_eta,
    admissible_gamma,
    b_critical,
    b_from_t_eta,
    critical_table,
    s_gamma_alpha,
    sft_allowed_pairs,
    sft_pair_sequence,
    sft_sequences,
    spectral_radius_A,
    t_eta,
    t_gamma,
    theta_block_alpha,
    theta_block_sequences,
)
from homcantor.densities import density_bounds, lower_density, upper_density
from homcantor.measure import ball_measure, cdf, check_cdf_bounds, check_self_similarity, random_point_of_E
from homcantor.oracle import oracle_lower_density, oracle_upper_density, random_eventually_periodic, sample_typical
from homcantor.thue_morse import (
    check_lambda_order,
    check_lambda_successor,
    check_theta_order,
    classical_tau_prefix,
    lambda_prefix,
    theta_prefix,
)

TABLE = {
    2: (0.408248, 0.422744, 0.5, 0.707107, 0.809703),
    3: (0.353553, 0.38039, 0.408248, 0.707107, 0.749479),
    4: (0.316228, 0.340358, 0.353553, 0.707107, 0.730207),
    5: (0.288675, 0.308856, 0.316228, 0.707107, 0.721665),
    6: (0.267261, 0.284091, 0.288675, 0.707107, 0.717129),
    7: (0.25, 0.26419, 0.267261, 0.707107, 0.714431),
    8: (0.235702, 0.247828, 0.25, 0.707107, 0.712695),
}


def P(N):
    return params_new(N, Fraction(1, N * N))


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


def test_01_table(report):
    start = time.perf_counter()
    rows = critical_table([P(N) for N in range(2, 9)])
    worst = max(abs(a - b) for row in rows for a, b in zip(row.values(), TABLE[row.N]))
    elapsed = time.perf_counter() - start
    report(1, worst <= 5e-6 and elapsed < 1.0, f"table worst |diff| = {worst:.2e} (<= 5e-6), {elapsed:.2f}s (< 1s)")


def test_02_cross_identities(report):
    worst = 0.0
    for N in range(2, 9):
        p = P(N)
        with p.workprec():
            worst = max(worst,
                        float(abs(a_critical(p).value - a_from_t_gamma(t_gamma(p), p).value)),
                        float(abs(b_critical(p).value - b_from_t_eta(t_eta(p), p).value)))
    report(2, worst <= 1e-10, f"worst cross-identity gap = {worst:.2e} (<= 1e-10)")


def test_03_sequences(report):
    ok = True
    for N in range(2, 11):
        top = N - 1
        ok &= lambda_prefix(N, 8) == (top, 1, 0, top, 0, N - 2, top, 1)
        ok &= theta_prefix(N, 8) == (top, 0, 0, top, 0, top, top, 0)
    tau = classical_tau_prefix(4097)
    ok &= lambda_prefix(2, 4096) == tau[1:4097]
    ok &= all(t == 1 - u for t, u in zip(theta_prefix(2, 4096), tau))
    report(3, ok, "8-term general prefixes, binary lambda = shifted tau and theta = 1 - tau for i <= 4096")


def test_04_word_orders(report):
    start = time.perf_counter()
    ok = all(
        check_lambda_order(N, n) and check_lambda_successor(N, n) and check_theta_order(N, n)
        for N in range(2, 9)
        for n in range(1, 11)
    )
    elapsed = time.perf_counter() - start
    report(4, ok and elapsed < 10, f"order/successor/theta checks for n <= 10, N = 2..8 in {elapsed:.2f}s (< 10s)")


def test_05_measure(report):
    ok = True
    for N in range(2, 9):
        p = P(N)
        ok &= check_cdf_bounds(p, 10_000, seed=N)
        ok &= check_self_similarity(p, 500, seed=N, tol=Fraction(1, 10**12))
        ok &= cdf((N - 1) * p.R, p).exact == Fraction(N - 1, N)
    sym_ok = 0
    rng = random.Random(5)
    for i in range(1000):
        p = P(2 + i % 4)
        x = random_point_of_E(rng, p, 16) if i % 2 else Fraction(rng.getrandbits(32), 1 << 32)
        r = Fraction(rng.randint(1, 1 << 30), 1 << 30) * p.rho ** rng.randint(0, 6)
        sym_ok += ball_measure(x, r, p).overlaps(ball_measure(1 - x, r, p))
    ok &= sym_ok == 1000
    report(5, ok, f"cdf bounds (10^4 t per N), self-similarity (width <= 1e-12), cdf((N-1)R) exact, symmetry {sym_ok}/1000")


def _pool(N):
    """Twenty-odd eventually periodic points: a few hand-picked and the rest random."""
    p = P(N)
    top = N - 1
    fixed = [coding(per=(0,)), coding(per=(top,)), coding(per=(top, 0)), coding((1,), (0, top)),
             coding(per=(N // 2,)), coding((top, 0), (1, 0, top))]
    rng = random.Random(100 + N)
    return p, fixed + [random_eventually_periodic(rng, p, 3, 6) for _ in range(18)]


@pytest.mark.slow
def test_06_oracle_equivalence(report):
    start = time.perf_counter()
    worst_lo = worst_up = 0.0
    count = 0
    for N in (2, 3, 4, 5):
        p, pool = _pool(N)
        for c in pool:
            lo = oracle_lower_density(c, p, 4, 12, grid=32, depth=18)
            up = oracle_upper_density(c, p, 4, 12, grid=32, depth=18)
            worst_lo = max(worst_lo, float(abs(lo.lo - lower_density(c, p))))
            worst_up = max(worst_up, float(abs(up.hi - upper_density(c, p))))
            count += 1
    elapsed = time.perf_counter() - start
    ok = worst_lo <= 5e-3 and worst_up <= 5e-3 and elapsed < 120
    report(6, ok, f"{count} points: worst lower gap {worst_lo:.2e}, worst upper gap {worst_up:.2e} (<= 5e-3), {elapsed:.1f}s (< 120s)")


def test_07_special_points(report):
    worst = 0.0
    for N in range(2, 9):
        p = P(N)
        b = density_bounds(p)
        worst = max(worst, float(abs(lower_density(coding(per=(0,)), p) - b.lo_min)),
                    float(abs(upper_density(coding(per=(0,)), p) - 2 ** -p.s)))
    worst = max(worst, float(abs(upper_density(coding(per=(1,)), P(3)) - 1)))
    report(7, worst <= 1e-12, f"endpoint densities and N=3 middle fixed point, worst error {worst:.2e} (<= 1e-12)")


def test_08_global_bounds(report):
    bad = []
    for N in (2, 3, 4, 5):
        p, pool = _pool(N)
        b = density_bounds(p)
        eps = 1e-12
        for c in pool:
            lo, up = lower_density(c, p), upper_density(c, p)
            ok = b.lo_min - eps <= lo <= b.lo_max + eps < b.up_min <= up + eps and up <= b.up_max + eps and lo < up
            if N % 2 == 0:
                ok &= up <= p.power_s(N * p.R, -1) + eps
            if not ok:
                bad.append((N, str(c)))
    report(8, not bad, f"bounds chain on the criterion-6 pool, violations: {bad or 'none'}")


def test_09_sft(report):
    r = spectral_radius_A()
    ok = abs(r - (1 + math.sqrt(5)) / 2) <= 1e-12
    for N in (2, 3, 4, 5):
        p = P(N)
        for n in range(1, 5):
            alpha = s_gamma_alpha(n, p)
            ok &= all(admissible_gamma(sft_pair_sequence(pair, n, p), alpha, p) for pair in sft_allowed_pairs())
            ok &= all(admissible_gamma(d, alpha, p) for d in sft_sequences(n, p, max_cycle=4, max_prefix=1))
            beta = theta_block_alpha(n, p)
            ok &= all(admissible_eta(d, beta, p) for d in theta_block_sequences(n, p, max_blocks=3, max_prefix=1))
    report(9, ok, f"spectral radius {r:.15f}; SFT words admissible (gamma) and theta blocks admissible (eta) for n <= 4")


def test_10_typical(report):
    # statistical smoke test of the almost-everywhere value, not a proof
    fracs = {}
    for N in (2, 3):
        stats = sample_typical(P(N), 200, 64, seed=1)
        fracs[N] = stats.frac_lower_within
    ok = all(f >= 0.8 for f in fracs.values())
    report(10, ok, f"fraction of lower densities within 0.02 of the typical value: {fracs} (>= 0.8)")
