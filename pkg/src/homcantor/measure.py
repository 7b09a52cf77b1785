"""Exact geometry of the Cantor set and the uniform Cantor measure.

Points, radii and CDF values are exact Fractions.  ``cdf`` walks the
first-level structure digit by digit: a point in a gap finishes the walk
exactly, a revisited point closes a geometric cycle exactly, and otherwise
the walk stops once the unresolved mass ``N**-depth`` is below ``tol``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath import mpf

from .core import EventuallyPeriodicCoding, Params, Word, as_fraction, finite_coding
from .errors import OutOfRange

Point = Union[Fraction, int, str, EventuallyPeriodicCoding]

DEFAULT_TOL = Fraction(1, 10**15)


@dataclass(frozen=True)
class MeasureValue:
    """Rational enclosure ``lo <= mu <= hi``; ``exact`` is set when they meet."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.lo == self.hi else None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi

    def overlaps(self, other: "MeasureValue") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __sub__(self, other: "MeasureValue") -> "MeasureValue":
        return MeasureValue(self.lo - other.hi, self.hi - other.lo)

    def clamp(self) -> "MeasureValue":
        return MeasureValue(min(max(self.lo, Fraction(0)), Fraction(1)),
                            min(max(self.hi, Fraction(0)), Fraction(1)))

    @classmethod
    def point(cls, value) -> "MeasureValue":
        value = as_fraction(value)
        return cls(value, value)


@dataclass(frozen=True)
class RealInterval:
    """Real enclosure with mpf endpoints."""

    lo: mpf
    hi: mpf

    @property
    def mid(self) -> mpf:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> mpf:
        return self.hi - self.lo

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi


def project(c: EventuallyPeriodicCoding, p: Params) -> Fraction:
    """pi(c) = R * sum d_i rho^(i-1), summed in closed form over the period."""
    rho = p.rho
    head = _horner(c.pre, rho)
    cycle = _horner(c.per, rho)
    tail = rho ** len(c.pre) * cycle / (1 - rho ** len(c.per))
    return p.R * (head + tail)


def _horner(w: Word, x: Fraction) -> Fraction:
    """sum w[i] * x**i."""
    acc = Fraction(0)
    for d in reversed(w):
        acc = acc * x + d
    return acc


def as_point(x: Point, p: Params) -> Fraction:
    if isinstance(x, EventuallyPeriodicCoding):
        return project(x, p)
    return as_fraction(x)


def _first_digit(t: Fraction, p: Params) -> int:
    """Least k with t <= k*R + rho (t in (0, 1])."""
    return max(0, math.ceil((t - p.rho) / p.R))


def greedy_coding(t, p: Params, n_terms: int) -> Word:
    """First ``n_terms`` digits of the coding of the least point of E that is >= t."""
    t = as_fraction(t)
    if t < 0 or t > 1:
        raise OutOfRange(f"t must lie in [0, 1], got {t}")
    out = []
    while len(out) < n_terms:
        if t <= 0:
            out.extend([0] * (n_terms - len(out)))
            break
        k = _first_digit(t, p)
        out.append(k)
        if t <= k * p.R:
            t = Fraction(0)
        else:
            t = (t - k * p.R) / p.rho
    return tuple(out)


def cdf_of_coding(c: EventuallyPeriodicCoding, p: Params) -> Fraction:
    """mu([0, pi(c)]) = sum d_i / N^i in closed form."""
    inv = Fraction(1, p.N)
    head = _horner(c.pre, inv) * inv
    cycle = _horner(c.per, inv) * inv
    return head + inv ** len(c.pre) * cycle / (1 - inv ** len(c.per))


def depth_for_tol(tol, N: int) -> int:
    """Smallest D with N**-D <= tol."""
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    D, power = 0, 1
    while power * tol.numerator < tol.denominator:
        D += 1
        power *= N
    return D


def cdf(t: Point, p: Params, tol=DEFAULT_TOL) -> MeasureValue:
    """Enclosure of mu([0, t]) with width <= tol (exact whenever the walk closes)."""
    if isinstance(t, EventuallyPeriodicCoding):
        return MeasureValue.point(cdf_of_coding(t, p))
    t = as_fraction(t)
    N, R, rho = p.N, p.R, p.rho
    max_depth = depth_for_tol(tol, N)
    acc, scale = Fraction(0), Fraction(1)
    seen: dict[Fraction, tuple[Fraction, Fraction]] = {}
    for _ in range(max_depth + 1):
        if t <= 0:
            return MeasureValue.point(acc)
        if t >= 1:
            return MeasureValue.point(acc + scale)
        if t in seen:
            acc0, scale0 = seen[t]
            # acc0 + scale0*F == acc + scale*F, with F = mu([0, t])
            F = (acc - acc0) / (scale0 - scale)
            return MeasureValue.point(acc0 + scale0 * F)
        seen[t] = (acc, scale)
        k = _first_digit(t, p)
        if t <= k * R:
            return MeasureValue.point(acc + scale * Fraction(k, N))
        acc += scale * Fraction(k, N)
        scale /= N
        t = (t - k * R) / rho
    return MeasureValue(acc, acc + scale)


def ball_measure(x: Point, r, p: Params, tol=DEFAULT_TOL) -> MeasureValue:
    """mu of the open ball (x - r, x + r); mu has no atoms so a CDF difference is exact."""
    x = as_point(x, p)
    r = as_fraction(r)
    if r <= 0:
        raise OutOfRange("radius must be positive")
    return (cdf(x + r, p, tol) - cdf(x - r, p, tol)).clamp()


def density_ratio(x: Point, r, p: Params, tol=DEFAULT_TOL) -> RealInterval:
    """Enclosure of mu(B(x, r)) / (2r)^s."""
    m = ball_measure(x, r, p, tol)
    return ratio_enclosure(m, as_fraction(r), p)


def ratio_enclosure(m: MeasureValue, r: Fraction, p: Params) -> RealInterval:
    with p.workprec():
        denom = p.power_s(2 * r)
        eps = p.rel_eps
        lo = p.real(m.lo) / denom * (1 - eps)
        hi = p.real(m.hi) / denom * (1 + eps)
    return RealInterval(lo, hi)


def random_point_of_E(rng: random.Random, p: Params, depth: int = 24) -> Fraction:
    """pi of a uniformly random finite word followed by 0^inf."""
    return project(finite_coding([rng.randrange(p.N) for _ in range(depth)]), p)


def _sample_ts(p: Params, samples: int, seed: int):
    rng = random.Random(seed)
    ts = [Fraction(0), Fraction(1), p.R, p.rho][:samples]
    while len(ts) < samples:
        if len(ts) % 2:
            ts.append(Fraction(rng.getrandbits(40), 1 << 40))
        else:
            ts.append(random_point_of_E(rng, p, rng.randint(1, 24)))
    return ts


def check_cdf_bounds(p: Params, samples: int, seed: int = 0, tol=DEFAULT_TOL) -> bool:
    """(rho/R)^s t^s <= mu([0,t]) <= t^s and the mirrored bounds for mu([t,1]).

    A sample fails only when an enclosure certifies a violation; exact
    equality cases (t = R, t = 1) must not trip on rounding.
    """
    with p.workprec():
        c = p.power_s(p.rho / p.R)
        eps = p.rel_eps
        for t in _sample_ts(p, samples, seed):
            left = cdf(t, p, tol)
            right = MeasureValue(1 - left.hi, 1 - left.lo)
            for mass, u in ((left, t), (right, 1 - t)):
                upper = p.power_s(u)
                lower = c * upper
                if lower * (1 - eps) > p.real(mass.hi):
                    return False
                if p.real(mass.lo) > upper * (1 + eps):
                    return False
    return True


def check_self_similarity(p: Params, samples: int, seed: int = 0, tol=Fraction(1, 10**12)) -> bool:
    """cdf(iR + rho*t) == i/N + cdf(t)/N for sampled t and every digit i."""
    tol = as_fraction(tol)
    N = p.N
    for t in _sample_ts(p, samples, seed):
        base = cdf(t, p, tol)
        for i in range(N):
            lhs = cdf(i * p.R + p.rho * t, p, tol)
            rhs = MeasureValue(Fraction(i, N) + base.lo / N, Fraction(i, N) + base.hi / N)
            if lhs.width > tol or rhs.width > tol or not lhs.overlaps(rhs):
                return False
    return True
