"""Instance parameters, digit words, eventually periodic codings and their order.

Words are plain tuples of ints.  An infinite coding is carried as an
:class:`EventuallyPeriodicCoding` ``pre + per + per + ...`` kept in canonical
form, which makes equality of sequences decidable by comparing fields.
"""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from mpmath import mp, mpf

from .errors import BadAlphabet, OutOfRange, WordOverflow, WordUnderflow

Word = tuple  # tuple[int, ...]
Rational = Union[Fraction, int, str]

DEFAULT_PRECISION = int(os.environ.get("HOMCANTOR_PRECISION", "128"))


def as_fraction(value) -> Fraction:
    """Parse ``p/q``, integers, decimals or Fractions into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class Params:
    """The instance ``(N, rho)``: N maps of ratio rho spread evenly over [0, 1].

    ``R`` is the gap stride (left endpoints of the first-level intervals are
    ``k*R``) and ``s = -log N / log rho`` the dimension.  Only the real
    quantity ``s`` and its powers leave exact arithmetic.
    """

    N: int
    rho: Fraction
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise BadAlphabet(f"alphabet size N must be an integer >= 2, got {self.N!r}")
        rho = as_fraction(self.rho)
        object.__setattr__(self, "rho", rho)
        if rho <= 0 or rho > Fraction(1, self.N**2):
            raise OutOfRange(f"rho must lie in (0, 1/N^2] = (0, 1/{self.N**2}], got {rho}")
        if self.precision < 16:
            raise OutOfRange(f"precision must be at least 16 bits, got {self.precision}")

    @cached_property
    def R(self) -> Fraction:
        return (1 - self.rho) / (self.N - 1)

    @property
    def R_over_rho(self) -> Fraction:
        return self.R / self.rho

    @cached_property
    def s(self) -> mpf:
        with self.workprec():
            return -mp.log(self.N) / mp.log(self.real(self.rho))

    def workprec(self):
        return mp.workprec(self.precision)

    def real(self, q) -> mpf:
        """Nearest mpf to an exact rational at this instance's precision."""
        q = as_fraction(q)
        with self.workprec():
            return mpf(q.numerator) / q.denominator

    def power_s(self, base, sign: int = 1) -> mpf:
        """``base ** (sign * s)`` for a nonnegative rational or mpf base."""
        with self.workprec():
            b = self.real(base) if isinstance(base, (Fraction, int)) else mpf(base)
            if b == 0:
                return mpf(0) if sign > 0 else mp.inf
            return mp.power(b, sign * self.s)

    @property
    def rel_eps(self) -> mpf:
        """Relative slack that covers the rounding of a handful of mp operations."""
        return mpf(2) ** (8 - self.precision)

    def digits(self) -> range:
        return range(self.N)


def params_new(N: int, rho: Rational, precision: int = DEFAULT_PRECISION) -> Params:
    return Params(N, as_fraction(rho), precision)


def _alphabet(p) -> int:
    return p if isinstance(p, int) else p.N


def check_word(w: Sequence[int], p) -> Word:
    N = _alphabet(p)
    w = tuple(int(d) for d in w)
    for d in w:
        if not 0 <= d < N:
            raise OutOfRange(f"digit {d} outside 0..{N - 1}")
    return w


def reflect(w: Sequence[int], p) -> Word:
    """Digitwise ``c -> N-1-c``."""
    top = _alphabet(p) - 1
    return tuple(top - d for d in w)


def word_plus(w: Sequence[int], p) -> Word:
    N = _alphabet(p)
    if not w or w[-1] >= N - 1:
        raise WordOverflow(f"cannot increment last digit of {tuple(w)}")
    return tuple(w[:-1]) + (w[-1] + 1,)


def word_minus(w: Sequence[int], p=None) -> Word:
    if not w or w[-1] <= 0:
        raise WordUnderflow(f"cannot decrement last digit of {tuple(w)}")
    return tuple(w[:-1]) + (w[-1] - 1,)


class Order(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _sign(a, b) -> Order:
    return Order.LT if a < b else Order.GT if a > b else Order.EQ


def word_compare(a: Sequence[int], b: Sequence[int]) -> Order:
    """Compare finite words as ``a 0^inf`` against ``b 0^inf``."""
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return _sign(a, b)


def _primitive_root(per: Word) -> Word:
    q = len(per)
    for d in range(1, q + 1):
        if q % d == 0 and per[:d] * (q // d) == per:
            return per[:d]
    return per


@dataclass(frozen=True)
class EventuallyPeriodicCoding:
    """The infinite digit sequence ``pre per per per ...``.

    Canonicalised on construction: the period is primitive and the
    preperiod is as short as possible, so two instances are equal exactly
    when they describe the same sequence.
    """

    pre: Word = ()
    per: Word = (0,)
    N: int | None = field(default=None, compare=False)

    def __post_init__(self):
        pre = tuple(int(d) for d in self.pre)
        per = tuple(int(d) for d in self.per)
        if not per:
            raise ValueError("period must be nonempty")
        if self.N is not None:
            check_word(pre, self.N)
            check_word(per, self.N)
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    def __getitem__(self, i: int) -> int:
        """0-based digit access: ``c[0]`` is the first digit d_1."""
        if i < 0:
            raise IndexError("codings are one-sided")
        if i < len(self.pre):
            return self.pre[i]
        return self.per[(i - len(self.pre)) % len(self.per)]

    def prefix(self, n: int) -> Word:
        return tuple(self[i] for i in range(n))

    @property
    def period_start(self) -> int:
        return len(self.pre)

    @property
    def period_length(self) -> int:
        return len(self.per)

    def reflect(self, p) -> "EventuallyPeriodicCoding":
        return EventuallyPeriodicCoding(reflect(self.pre, p), reflect(self.per, p), self.N)

    def shift(self, n: int) -> "EventuallyPeriodicCoding":
        return shift(self, n)

    def is_endpoint(self, p) -> bool:
        """True for codings ending in 0^inf or (N-1)^inf."""
        return self.per in ((0,), (_alphabet(p) - 1,))

    def __str__(self) -> str:
        return format_coding(self)


def coding(pre: Iterable[int] = (), per: Iterable[int] = (0,), N: int | None = None):
    return EventuallyPeriodicCoding(tuple(pre), tuple(per), N)


def finite_coding(w: Sequence[int]) -> EventuallyPeriodicCoding:
    """``w 0^inf``."""
    return EventuallyPeriodicCoding(tuple(w), (0,))


def shift(c: EventuallyPeriodicCoding, n: int) -> EventuallyPeriodicCoding:
    if n < 0:
        raise ValueError("shift count must be nonnegative")
    if n <= len(c.pre):
        return EventuallyPeriodicCoding(c.pre[n:], c.per, c.N)
    k = (n - len(c.pre)) % len(c.per)
    return EventuallyPeriodicCoding((), c.per[k:] + c.per[:k], c.N)


def comparison_length(a: EventuallyPeriodicCoding, b: EventuallyPeriodicCoding) -> int:
    return max(len(a.pre), len(b.pre)) + 2 * math.lcm(len(a.per), len(b.per))


def lex_compare(a: EventuallyPeriodicCoding, b: EventuallyPeriodicCoding) -> Order:
    """Exact lexicographic comparison of two eventually periodic sequences."""
    L = comparison_length(a, b)
    return _sign(a.prefix(L), b.prefix(L))


# -- text formats -------------------------------------------------------------

def format_digits(w: Sequence[int], N: int) -> str:
    if N <= 10:
        return "".join(str(d) for d in w)
    return ",".join(str(d) for d in w)


def parse_digits(text: str, N: int) -> Word:
    text = text.strip()
    if not text:
        return ()
    if N <= 10 and "," not in text:
        w = tuple(int(ch) for ch in text)
    else:
        w = tuple(int(tok) for tok in text.split(","))
    return check_word(w, N)


def format_coding(c: EventuallyPeriodicCoding, N: int | None = None) -> str:
    N = N or c.N or 10
    return f"pre={format_digits(c.pre, N)};per={format_digits(c.per, N)}"


def parse_coding(text: str, N: int) -> EventuallyPeriodicCoding:
    """Parse ``pre=<digits>;per=<digits>`` (either part optional, per defaults to 0)."""
    parts = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, val = chunk.partition("=")
        if not sep or key.strip() not in ("pre", "per"):
            raise ValueError(f"bad coding literal {text!r}")
        parts[key.strip()] = parse_digits(val, N)
    per = parts.get("per") or (0,)
    return EventuallyPeriodicCoding(parts.get("pre", ()), per, N)


@dataclass(frozen=True)
class Estimate:
    """A real value with an absolute error bound."""

    value: mpf
    err: mpf

    # exact sums, so the bounds do not depend on the ambient mp precision
    @property
    def lo(self) -> mpf:
        return mp.fsub(self.value, self.err, exact=True)

    @property
    def hi(self) -> mpf:
        return mp.fadd(self.value, self.err, exact=True)

    def __float__(self) -> float:
        return float(self.value)

    @classmethod
    def between(cls, lo: mpf, hi: mpf, slack: mpf = mpf(0)) -> "Estimate":
        return cls((lo + hi) / 2, abs(hi - lo) / 2 + slack)
