"""Critical values a_c and b_c, level-set classification and symbolic admissibility.

The thresholds are series in rho with Thue-Morse type digit sequences:

    t_gamma = 1 - R * sum_{i>=1} lambda_{i+1} rho^(i-1),   a_c = (2 (R/rho - t_gamma))^(-s)
    t_eta   =     R * sum_{i>=1} theta_i     rho^(i-1),   b_c = (2 t_eta)^(-s)

Partial sums are exact rationals; the tail after K terms is at most
``(N-1) R rho^K / (1 - rho)``.  Both ends of the resulting rational bracket
are pushed through the monotone power map, so every returned
:class:`Estimate` carries a certified error.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np
from mpmath import mp, mpf

from .core import (
    Estimate,
    EventuallyPeriodicCoding,
    Order,
    Params,
    Word,
    as_fraction,
    lex_compare,
    reflect,
    shift,
)
from .densities import density_bounds
from .errors import ToleranceAmbiguous
from .thue_morse import lambda_prefix, theta_prefix

DEFAULT_TOL = Fraction(1, 10**20)


def _terms_for_tol(p: Params, tol) -> int:
    """Smallest K with (N-1) R rho^K / (1 - rho) < tol."""
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    K, tail = 0, (p.N - 1) * p.R / (1 - p.rho)
    while tail >= tol:
        K += 1
        tail *= p.rho
    return max(K, 1)


def _series(digits: Word, rho: Fraction) -> Fraction:
    acc = Fraction(0)
    for d in reversed(digits):
        acc = acc * rho + d
    return acc


def _tail(p: Params, K: int) -> Fraction:
    return (p.N - 1) * p.rho**K / (1 - p.rho)


def lambda_series_bracket(p: Params, tol=DEFAULT_TOL) -> tuple[Fraction, Fraction]:
    """Rational bracket of sum_{i>=1} lambda_{i+1} rho^(i-1)."""
    K = _terms_for_tol(p, tol)
    head = _series(lambda_prefix(p, K + 1)[1:], p.rho)
    return head, head + _tail(p, K)


def theta_series_bracket(p: Params, tol=DEFAULT_TOL) -> tuple[Fraction, Fraction]:
    """Rational bracket of sum_{i>=1} theta_i rho^(i-1)."""
    K = _terms_for_tol(p, tol)
    head = _series(theta_prefix(p, K), p.rho)
    return head, head + _tail(p, K)


def _estimate(p: Params, lo, hi) -> Estimate:
    with p.workprec():
        lo, hi = (p.real(v) if isinstance(v, Fraction) else v for v in (lo, hi))
        if lo > hi:
            lo, hi = hi, lo
        return Estimate.between(lo, hi, p.rel_eps * abs(hi))


def t_gamma(p: Params, tol=DEFAULT_TOL) -> Estimate:
    lo, hi = lambda_series_bracket(p, tol)
    return _estimate(p, 1 - p.R * hi, 1 - p.R * lo)


def t_eta(p: Params, tol=DEFAULT_TOL) -> Estimate:
    lo, hi = theta_series_bracket(p, tol)
    return _estimate(p, p.R * lo, p.R * hi)


def a_critical(p: Params, tol=DEFAULT_TOL) -> Estimate:
    """(2 (R/rho - 1 + R sum lambda_{i+1} rho^(i-1)))^(-s)."""
    lo, hi = lambda_series_bracket(p, tol)
    base = p.R_over_rho - 1
    return _estimate(p, p.power_s(2 * (base + p.R * hi), -1), p.power_s(2 * (base + p.R * lo), -1))


def b_critical(p: Params, tol=DEFAULT_TOL) -> Estimate:
    """(2 R sum theta_i rho^(i-1))^(-s)."""
    lo, hi = theta_series_bracket(p, tol)
    return _estimate(p, p.power_s(2 * p.R * hi, -1), p.power_s(2 * p.R * lo, -1))


def a_from_t_gamma(t: Estimate, p: Params) -> Estimate:
    """(2 (R/rho - t))^(-s) carried through the bracket of ``t``."""
    with p.workprec():
        u = p.real(p.R_over_rho)
        return _estimate(p, p.power_s(2 * (u - t.lo), -1), p.power_s(2 * (u - t.hi), -1))


def b_from_t_eta(t: Estimate, p: Params) -> Estimate:
    with p.workprec():
        return _estimate(p, p.power_s(2 * t.hi, -1), p.power_s(2 * t.lo, -1))


# -- level sets ----------------------------------------------------------------


class LevelTag(enum.Enum):
    FULL_SET = "FullSet"
    POSITIVE_DIMENSION = "PositiveDimension"
    UNCOUNTABLE_CRITICAL = "UncountableCritical"
    AT_MOST_COUNTABLE = "AtMostCountable"
    EMPTY = "Empty"


@dataclass(frozen=True)
class LevelSetClass:
    tag: LevelTag
    thresholds: dict = field(compare=False)


SYMBOLIC = {"a_c": "lower", "b_c": "upper"}


def _as_real(value, p: Params):
    if isinstance(value, str):
        v = value.strip()
        if v in SYMBOLIC:
            return v
        with p.workprec():
            return p.real(Fraction(v)) if "/" in v else mpf(v)
    if isinstance(value, Fraction):
        return p.real(value)
    with p.workprec():
        return mpf(value)


def _check_band(a, crit: Estimate, name: str):
    band = crit.err
    if abs(a - crit.value) <= band:
        raise ToleranceAmbiguous(
            f"{a} is within {mp.nstr(band, 3)} of {name} = {mp.nstr(crit.value, 15)}; "
            f"pass '{name}' symbolically for the critical case",
            value=a, threshold=crit.value, band=band,
        )


def classify_lower(a, p: Params, tol=DEFAULT_TOL) -> LevelSetClass:
    """Size of E_*(a) = {x : lower density >= a}."""
    bounds = density_bounds(p)
    ac = a_critical(p, tol)
    thresholds = {"lo_min": bounds.lo_min, "a_c": ac.value, "a_c_err": ac.err, "lo_max": bounds.lo_max}
    a = _as_real(a, p)
    if a == "a_c":
        return LevelSetClass(LevelTag.UNCOUNTABLE_CRITICAL, thresholds)
    if a == "b_c":
        raise ValueError("b_c is the upper-density critical value")
    if a <= bounds.lo_min:
        tag = LevelTag.FULL_SET
    elif a > bounds.lo_max:
        tag = LevelTag.EMPTY
    else:
        _check_band(a, ac, "a_c")
        tag = LevelTag.POSITIVE_DIMENSION if a < ac.value else LevelTag.AT_MOST_COUNTABLE
    return LevelSetClass(tag, thresholds)


def classify_upper(b, p: Params, tol=DEFAULT_TOL) -> LevelSetClass:
    """Size of E^*(b) = {x : upper density <= b}."""
    bounds = density_bounds(p)
    bc = b_critical(p, tol)
    thresholds = {"up_min": bounds.up_min, "b_c": bc.value, "b_c_err": bc.err, "up_max": bounds.up_max}
    b = _as_real(b, p)
    if b == "b_c":
        return LevelSetClass(LevelTag.UNCOUNTABLE_CRITICAL, thresholds)
    if b == "a_c":
        raise ValueError("a_c is the lower-density critical value")
    if b < bounds.up_min:
        tag = LevelTag.EMPTY
    elif b >= bounds.up_max:
        tag = LevelTag.FULL_SET
    else:
        _check_band(b, bc, "b_c")
        tag = LevelTag.AT_MOST_COUNTABLE if b < bc.value else LevelTag.POSITIVE_DIMENSION
    return LevelSetClass(tag, thresholds)


# -- symbolic admissibility ----------------------------------------------------


class Mode(enum.Enum):
    GAMMA = "gamma"
    ETA = "eta"


@dataclass(frozen=True)
class AdmissibilityCondition:
    alpha: EventuallyPeriodicCoding
    mode: Mode

    def admits(self, d: EventuallyPeriodicCoding, p: Params) -> bool:
        if Mode(self.mode) is Mode.GAMMA:
            return admissible_gamma(d, self.alpha, p)
        return admissible_eta(d, self.alpha, p)


def admissible_gamma(d: EventuallyPeriodicCoding, alpha: EventuallyPeriodicCoding, p: Params) -> bool:
    """Is ``d`` in the symbolic set E'_gamma(alpha)?

    After a 0 the tail must be >= alpha, after N-1 it must be <= reflect(alpha),
    after a middle digit either will do.  The condition at index n depends
    only on (d_n, sigma^n d), so one preperiod plus one period covers all n.
    """
    ref = alpha.reflect(p)
    top = p.N - 1
    for n in range(1, len(d.pre) + len(d.per) + 1):
        digit = d[n - 1]
        tail = shift(d, n)
        above = digit != top and lex_compare(tail, alpha) is not Order.LT
        below = digit != 0 and lex_compare(tail, ref) is not Order.GT
        if not (above or below):
            return False
    return True


def admissible_eta(d: EventuallyPeriodicCoding, alpha: EventuallyPeriodicCoding, p: Params) -> bool:
    """Is every tail of ``d`` (including d itself) >= alpha or <= reflect(alpha)?"""
    ref = alpha.reflect(p)
    for n in range(len(d.pre) + len(d.per)):
        tail = shift(d, n)
        if lex_compare(tail, alpha) is Order.LT and lex_compare(tail, ref) is Order.GT:
            return False
    return True


# -- subshift of finite type ----------------------------------------------------

SFT_STATES = ("xi", "zeta", "xi_bar", "zeta_bar")
SFT_ADJACENCY = np.array(
    [
        [0, 1, 1, 0],
        [0, 0, 1, 0],
        [1, 0, 0, 1],
        [1, 0, 0, 0],
    ]
)


def spectral_radius_A(A: np.ndarray = SFT_ADJACENCY) -> float:
    return float(max(abs(np.linalg.eigvals(A.astype(float)))))


def spectral_radius_mp(p: Params) -> mpf:
    """The numpy spectral radius polished by Newton on det(A - xI) at working precision."""
    A = mp.matrix(SFT_ADJACENCY.tolist())
    with p.workprec():
        return mp.findroot(lambda x: mp.det(A - x * mp.eye(4)), spectral_radius_A())


def sft_dim_lower_bound(n: int, p: Params) -> mpf:
    """log r_A / (-2^n log rho): the dimension of the projected SFT with 2^n-digit states."""
    if n < 1:
        raise ValueError("n starts at 1")
    r = spectral_radius_mp(p)
    with p.workprec():
        return mp.log(r) / (-(2**n) * mp.log(p.real(p.rho)))


def sft_state_words(n: int, p: Params) -> dict[str, Word]:
    """The four 2^n-digit blocks xi, zeta and their reflections."""
    lam = lambda_prefix(p, 2 ** (n + 1) + 1)
    xi = reflect(lam[1 : 2**n + 1], p)
    zeta = reflect(lam[2**n + 1 : 2 ** (n + 1) + 1], p)
    return {"xi": xi, "zeta": zeta, "xi_bar": reflect(xi, p), "zeta_bar": reflect(zeta, p)}


def s_gamma_alpha(n: int, p: Params) -> EventuallyPeriodicCoding:
    """alpha(s_n) = reflect(lambda_2 .. lambda_{2^n+1}) 0^inf, approaching alpha(t_gamma) from below."""
    return EventuallyPeriodicCoding(sft_state_words(n, p)["xi"], (0,), p.N)


def t_gamma_alpha(n: int, p: Params) -> EventuallyPeriodicCoding:
    """reflect(lambda_2 .. lambda_{2^n+1}) (N-1)^inf, approaching alpha(t_gamma) from above."""
    return EventuallyPeriodicCoding(sft_state_words(n, p)["xi"], (p.N - 1,), p.N)


def sft_allowed_pairs() -> list[tuple[int, int]]:
    return [(i, j) for i in range(4) for j in range(4) if SFT_ADJACENCY[i, j]]


def sft_closed_walks(max_len: int) -> Iterator[tuple[int, ...]]:
    """Closed walks (as state index tuples) of length 1..max_len in the SFT graph."""
    for length in range(1, max_len + 1):
        for walk in itertools.product(range(4), repeat=length):
            if all(SFT_ADJACENCY[walk[k], walk[(k + 1) % length]] for k in range(length)):
                yield walk


def sft_sequences(n: int, p: Params, max_cycle: int = 6, max_prefix: int = 2) -> Iterator[EventuallyPeriodicCoding]:
    """Eventually periodic points of X_A: an allowed path followed by a closed walk."""
    words = [sft_state_words(n, p)[name] for name in SFT_STATES]
    cycles = list(sft_closed_walks(max_cycle))
    for plen in range(max_prefix + 1):
        for path in itertools.product(range(4), repeat=plen):
            if any(not SFT_ADJACENCY[path[k], path[k + 1]] for k in range(plen - 1)):
                continue
            for cyc in cycles:
                if plen and not SFT_ADJACENCY[path[-1], cyc[0]]:
                    continue
                pre = tuple(itertools.chain.from_iterable(words[i] for i in path))
                per = tuple(itertools.chain.from_iterable(words[i] for i in cyc))
                yield EventuallyPeriodicCoding(pre, per, p.N)


def sft_pair_sequence(pair: tuple[int, int], n: int, p: Params) -> EventuallyPeriodicCoding:
    """A point of X_A that starts with the given allowed 2-block of states."""
    i, j = pair
    words = [sft_state_words(n, p)[name] for name in SFT_STATES]
    for cyc in sft_closed_walks(4):
        if cyc[0] == j:
            return EventuallyPeriodicCoding(words[i], tuple(itertools.chain.from_iterable(words[k] for k in cyc)), p.N)
    raise AssertionError(f"no closed walk through state {j}")


def theta_block_alpha(n: int, p: Params) -> EventuallyPeriodicCoding:
    return EventuallyPeriodicCoding(theta_prefix(p, 2**n), (0,), p.N)


def theta_block_sequences(n: int, p: Params, max_blocks: int = 4, max_prefix: int = 2) -> Iterator[EventuallyPeriodicCoding]:
    """Eventually periodic elements of {B, reflect(B)}^N with B = theta_1..theta_{2^n}."""
    B = theta_prefix(p, 2**n)
    blocks = (B, reflect(B, p))
    for plen in range(max_prefix + 1):
        for head in itertools.product((0, 1), repeat=plen):
            for length in range(1, max_blocks + 1):
                for cyc in itertools.product((0, 1), repeat=length):
                    pre = tuple(itertools.chain.from_iterable(blocks[b] for b in head))
                    per = tuple(itertools.chain.from_iterable(blocks[b] for b in cyc))
                    yield EventuallyPeriodicCoding(pre, per, p.N)


# -- Table ---------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalRow:
    N: int
    rho: Fraction
    lo_min: mpf
    a_c: Estimate
    lo_max: mpf
    up_min: mpf
    b_c: Estimate

    def values(self) -> tuple[float, float, float, float, float]:
        return (float(self.lo_min), float(self.a_c), float(self.lo_max), float(self.up_min), float(self.b_c))


def critical_row(p: Params, tol=DEFAULT_TOL) -> CriticalRow:
    bounds = density_bounds(p)
    return CriticalRow(p.N, p.rho, bounds.lo_min, a_critical(p, tol), bounds.lo_max, bounds.up_min, b_critical(p, tol))


def critical_table(p_list, tol=DEFAULT_TOL) -> list[CriticalRow]:
    return [critical_row(p, tol) for p in p_list]
