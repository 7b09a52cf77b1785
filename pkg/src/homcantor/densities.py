"""Closed-form pointwise lower and upper s-densities at eventually periodic points.

For ``x = pi(d_1 d_2 ...)`` let ``y_n = T^n x = pi(d_{n+1} d_{n+2} ...)``.  The
lower density is driven by ``liminf gamma_n`` and the upper density by
``liminf eta_n`` together with a ``limsup`` over the quotient
``(1 + 2h_n) / (2 (h_n R/rho + eta_n))^s``.  Past the preperiod the pair
``(d_n, y_n)`` is periodic, so every liminf/limsup is a min/max over one
period and is computed exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath import mpf

from .core import EventuallyPeriodicCoding, Params, as_fraction, shift
from .errors import OutOfDomain
from .measure import project


@dataclass(frozen=True)
class PointOfE:
    coding: EventuallyPeriodicCoding
    value: Fraction


def point_of_E(c: EventuallyPeriodicCoding, p: Params) -> PointOfE:
    return PointOfE(c, project(c, p))


PointLike = Union[PointOfE, EventuallyPeriodicCoding]


def _coding(x: PointLike) -> EventuallyPeriodicCoding:
    return x.coding if isinstance(x, PointOfE) else x


def orbit(x: PointLike, n: int, p: Params) -> Fraction:
    """T^n x, exactly."""
    return project(shift(_coding(x), n), p)


def hat_digit(d: int, p: Params) -> int:
    return min(d, p.N - 1 - d)


def gamma_n(x: PointLike, n: int, p: Params) -> Fraction:
    if n < 1:
        raise ValueError("n starts at 1")
    c = _coding(x)
    return _gamma(c[n - 1], orbit(c, n, p), p)


def eta_n(x: PointLike, n: int, p: Params) -> Fraction:
    y = orbit(x, n, p)
    return max(y, 1 - y)


def S_map(x, p: Params) -> Fraction:
    """Distance-type quantity used for the optimal lower-density radius R - S(x)."""
    x = as_fraction(x)
    rho, R = p.rho, p.R
    if 0 <= x <= rho:
        return x
    if 1 - rho <= x <= 1:
        return 1 - x
    for k in range(1, p.N - 1):
        if k * R <= x <= k * R + rho:
            return max(x - k * R, k * R + rho - x)
    raise OutOfDomain(f"{x} lies in no first-level basic interval")


def M_map(k: int, x, p: Params) -> Fraction:
    x = as_fraction(x)
    return max(k * p.R + p.rho - x, x - k * p.R)


def _period_indices(c: EventuallyPeriodicCoding) -> range:
    """Indices n >= 1 covering one full period of the state (d_n, sigma^n c)."""
    start = len(c.pre) + 1
    return range(start, start + len(c.per))


def _period_orbit(c: EventuallyPeriodicCoding, p: Params):
    """(n, d_n, T^n x) over one period, stepping y_n = (y_{n-1} - d_n R) / rho."""
    idx = _period_indices(c)
    y = orbit(c, idx.start - 1, p)
    out = []
    for n in idx:
        d = c[n - 1]
        y = (y - d * p.R) / p.rho
        out.append((n, d, y))
    return out


def _gamma(d: int, y: Fraction, p: Params) -> Fraction:
    if d == 0:
        return y
    if d == p.N - 1:
        return 1 - y
    return max(y, 1 - y)


def gamma_liminf(x: PointLike, p: Params) -> Fraction:
    return min(_gamma(d, y, p) for _, d, y in _period_orbit(_coding(x), p))


def eta_liminf(x: PointLike, p: Params) -> Fraction:
    return min(max(y, 1 - y) for _, _, y in _period_orbit(_coding(x), p))


def lower_from_gamma(g, p: Params) -> mpf:
    """(2 (R/rho - g))^(-s)."""
    return p.power_s(2 * (p.R_over_rho - as_fraction(g)), -1)


def lower_density(x: PointLike, p: Params) -> mpf:
    return lower_from_gamma(gamma_liminf(x, p), p)


@dataclass(frozen=True)
class UpperWitness:
    """Where the upper density is realised.

    ``branch`` is ``"liminf"`` (the 1/(2 eta)^s term), ``"limsup"`` (the
    quotient term) or ``"both"`` when they agree to working precision.
    ``n_mod_period``, ``hat_digit`` and ``eta`` describe the maximising
    quotient term.
    """

    branch: str
    n_mod_period: int
    hat_digit: int
    eta: Fraction
    limsup_value: mpf
    liminf_value: mpf


def _upper_parts(c: EventuallyPeriodicCoding, p: Params):
    eta_min = eta_liminf(c, p)
    with p.workprec():
        liminf_value = p.power_s(2 * eta_min, -1)
        best = None
        for n, d, y in _period_orbit(c, p):
            h = hat_digit(d, p)
            eta = max(y, 1 - y)
            value = (1 + 2 * h) * p.power_s(2 * (h * p.R_over_rho + eta), -1)
            if best is None or value > best[0]:
                best = (value, n, h, eta)
        value, n, h, eta = best
        tie = abs(value - liminf_value) <= p.rel_eps * max(value, liminf_value)
        branch = "both" if tie else ("limsup" if value > liminf_value else "liminf")
    witness = UpperWitness(branch, n % len(c.per), h, eta, value, liminf_value)
    return eta_min, max(value, liminf_value), witness


def upper_density(x: PointLike, p: Params) -> mpf:
    return _upper_parts(_coding(x), p)[1]


@dataclass(frozen=True)
class DensityReport:
    lower: mpf
    upper: mpf
    gamma_liminf: Fraction
    eta_liminf: Fraction
    upper_witness: UpperWitness


def density_report(x: PointLike, p: Params) -> DensityReport:
    c = _coding(x)
    g = gamma_liminf(c, p)
    eta_min, upper, witness = _upper_parts(c, p)
    return DensityReport(lower_from_gamma(g, p), upper, g, eta_min, witness)


@dataclass(frozen=True)
class TypicalValues:
    lower: mpf
    upper: mpf


def typical_values(p: Params) -> TypicalValues:
    lower = p.power_s(2 * p.R_over_rho, -1)
    upper = mpf(1) if p.N % 2 else p.power_s(p.N * p.R, -1)
    return TypicalValues(lower, upper)


def packing_measure(p: Params) -> mpf:
    return p.power_s(2 * p.R_over_rho)


@dataclass(frozen=True)
class DensityBounds:
    """Global bounds lo_min <= lower <= lo_max < up_min <= upper <= up_max."""

    lo_min: mpf
    lo_max: mpf
    up_min: mpf
    up_max: mpf


def density_bounds(p: Params) -> DensityBounds:
    return DensityBounds(
        lo_min=p.power_s(2 * p.R_over_rho, -1),
        lo_max=p.power_s(2 * p.R_over_rho - 2, -1),
        up_min=p.power_s(Fraction(2), -1),
        up_max=typical_values(p).upper,
    )
