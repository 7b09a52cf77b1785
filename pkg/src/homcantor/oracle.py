"""Brute-force cross-checks that share no code path with the closed forms.

Ball measures come from counting level-k cylinders (each of mass N**-k)
instead of the CDF walk, and densities come from scanning radii instead of
the gamma/eta formulas.
"""
from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf

from .core import EventuallyPeriodicCoding, Params, as_fraction, shift
from .densities import PointLike, S_map, _coding, density_report, hat_digit, typical_values
from .errors import BudgetExceeded, OutOfRange
from .measure import project, ratio_enclosure, MeasureValue

DEFAULT_BUDGET = 2_000_000
DEFAULT_WINDOW = (4, 12)
DEFAULT_GRID = 32
DEFAULT_DEPTH = 18


@dataclass(frozen=True)
class CylinderCover:
    """Level-``depth`` cylinders inside / straddling an open ball."""

    depth: int
    inside_count: int
    boundary_count: int
    N: int

    @property
    def lo(self) -> Fraction:
        return Fraction(self.inside_count, self.N**self.depth)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.inside_count + self.boundary_count, self.N**self.depth)

    @property
    def width(self) -> Fraction:
        return Fraction(self.boundary_count, self.N**self.depth)

    def enclosure(self) -> MeasureValue:
        return MeasureValue(self.lo, self.hi)


def oracle_ball_measure(x, r, k: int, p: Params, budget: int = DEFAULT_BUDGET) -> CylinderCover:
    """Count level-k cylinders against the open ball (x - r, x + r).

    Works in the local coordinates of each cylinder, where the children sit
    at [i R, i R + rho].  A child wholly inside or outside the ball is settled
    at once; only children cut by a ball endpoint are refined.  Endpoints of
    cylinders carry no mass, so touching the ball boundary counts as inside.
    """
    if k < 1:
        raise OutOfRange("depth k must be at least 1")
    x, r = as_fraction(x), as_fraction(r)
    if r <= 0:
        raise OutOfRange("radius must be positive")
    N, R, rho = p.N, p.R, p.rho
    inside = boundary = 0
    visited = 0
    # (local lo, local hi, level); the whole of [0, 1] is the level-0 cylinder
    stack = [(x - r, x + r, 0)]
    while stack:
        lo, hi, level = stack.pop()
        visited += 1
        if visited > budget:
            raise BudgetExceeded(f"cylinder enumeration exceeded {budget} nodes")
        if lo <= 0 and hi >= 1:
            inside += N ** (k - level)
            continue
        if hi <= 0 or lo >= 1:
            continue
        if level == k:
            boundary += 1
            continue
        for i in range(N):
            left = i * R
            right = left + rho
            if hi <= left or lo >= right:
                continue
            if lo <= left and hi >= right:
                inside += N ** (k - level - 1)
                continue
            if level + 1 == k:
                boundary += 1
                continue
            stack.append(((lo - left) / rho, (hi - left) / rho, level + 1))
    return CylinderCover(k, inside, boundary, N)


def _scale_of(r: Fraction, p: Params) -> int:
    """Largest n with rho**n >= r (0 for r >= 1)."""
    n = 0
    level = Fraction(1)
    while level * p.rho >= r:
        level *= p.rho
        n += 1
    return n


@dataclass(frozen=True)
class ScanResult:
    """Extremum of the ratio mu(B(x,r))/(2r)^s over the scanned radii.

    ``lo``/``hi`` enclose the ratio at the extremal radius; ``slack`` is the
    widest enclosure seen anywhere in the scan.
    """

    lo: mpf
    hi: mpf
    radius: Fraction
    radii: int
    slack: mpf

    @property
    def value(self) -> mpf:
        return (self.lo + self.hi) / 2


def grid_radii(p: Params, n_min: int, n_max: int, grid: int) -> list[Fraction]:
    """``grid`` log-uniform radii per scale between rho**n_max and rho**n_min."""
    log_rho = math.log(p.rho)
    out = []
    for n in range(n_min, n_max):
        for j in range(grid):
            out.append(Fraction(math.exp((n + j / grid) * log_rho)))
    out.append(p.rho**n_max)
    return out


def lower_attainment_radii(c: EventuallyPeriodicCoding, p: Params, n_min: int, n_max: int) -> list[Fraction]:
    """rho^n (R - S(T^n x)) for n in the window."""
    out = []
    for n in range(n_min, n_max + 1):
        y = project(shift(c, n), p)
        r = p.rho**n * (p.R - S_map(y, p))
        if r > 0:
            out.append(r)
    return out


def upper_attainment_radii(c: EventuallyPeriodicCoding, p: Params, n_min: int, n_max: int) -> list[Fraction]:
    """Radii at which a ball around T^n x just swallows whole neighbouring cylinders."""
    out = []
    for n in range(n_min, n_max + 1):
        y = project(shift(c, n), p)
        k = c[n]
        scale = p.rho**n
        y1 = project(shift(c, n + 1), p)
        m = max(p.rho - p.rho * y1, p.rho * y1)  # M(k, y) measured from the level-1 position
        for j in range(p.N):
            out.append(scale * (j * p.R + m))
        out.append(scale * (hat_digit(k, p) * p.R + m))
        out.append(scale * max(y, 1 - y))
    return [r for r in out if r > 0]


def _scan(x: PointLike, p: Params, radii, depth: int, pick) -> ScanResult:
    c = _coding(x)
    xv = project(c, p)
    best = None
    slack = mpf(0)
    for r in radii:
        cover = oracle_ball_measure(xv, r, _scale_of(r, p) + depth, p)
        ratio = ratio_enclosure(cover.enclosure(), r, p)
        slack = max(slack, ratio.width)
        key = pick(ratio)
        if best is None or key < best[0]:
            best = (key, ratio, r)
    _, ratio, r = best
    return ScanResult(ratio.lo, ratio.hi, r, len(radii), slack)


def oracle_lower_density(x: PointLike, p: Params, n_min: int = DEFAULT_WINDOW[0], n_max: int = DEFAULT_WINDOW[1],
                         grid: int = DEFAULT_GRID, depth: int = DEFAULT_DEPTH) -> ScanResult:
    """Minimum of ratio lower bounds over the window, an estimate of the lower density from above.

    ``depth`` is counted below the scale of each radius, so the enclosure
    width relative to the ball mass does not degrade deeper in the window.
    """
    c = _coding(x)
    radii = grid_radii(p, n_min, n_max, grid) + lower_attainment_radii(c, p, n_min, n_max)
    return _scan(c, p, radii, depth, lambda ratio: ratio.lo)


def oracle_upper_density(x: PointLike, p: Params, n_min: int = DEFAULT_WINDOW[0], n_max: int = DEFAULT_WINDOW[1],
                         grid: int = DEFAULT_GRID, depth: int = DEFAULT_DEPTH) -> ScanResult:
    """Maximum of ratio upper bounds over the window, an estimate of the upper density from below."""
    c = _coding(x)
    radii = grid_radii(p, n_min, n_max, grid) + upper_attainment_radii(c, p, n_min, n_max)
    return _scan(c, p, radii, depth, lambda ratio: -ratio.hi)


@dataclass(frozen=True)
class TypicalStats:
    points: int
    delta: float
    typical_lower: mpf
    typical_upper: mpf
    median_lower: float
    median_upper: float
    frac_lower_within: float
    frac_upper_within: float


def random_periodic_coding(rng: random.Random, p: Params, depth: int) -> EventuallyPeriodicCoding:
    return EventuallyPeriodicCoding((), tuple(rng.randrange(p.N) for _ in range(depth)), p.N)


def sample_typical(p: Params, points: int, depth: int, seed: int, delta: float = 0.02) -> TypicalStats:
    """Formula densities at random periodic points compared with the typical values."""
    if points < 1:
        raise OutOfRange("need at least one point")
    rng = random.Random(seed)
    typ = typical_values(p)
    lowers, uppers = [], []
    for _ in range(points):
        rep = density_report(random_periodic_coding(rng, p, depth), p)
        lowers.append(float(rep.lower))
        uppers.append(float(rep.upper))
    tl, tu = float(typ.lower), float(typ.upper)
    return TypicalStats(
        points=points,
        delta=delta,
        typical_lower=typ.lower,
        typical_upper=typ.upper,
        median_lower=statistics.median(lowers),
        median_upper=statistics.median(uppers),
        frac_lower_within=sum(abs(v - tl) <= delta for v in lowers) / points,
        frac_upper_within=sum(abs(v - tu) <= delta for v in uppers) / points,
    )


def random_eventually_periodic(rng: random.Random, p: Params, max_pre: int = 3, max_per: int = 6) -> EventuallyPeriodicCoding:
    pre = tuple(rng.randrange(p.N) for _ in range(rng.randint(0, max_pre)))
    per = tuple(rng.randrange(p.N) for _ in range(rng.randint(1, max_per)))
    return EventuallyPeriodicCoding(pre, per, p.N)
