"""Thue-Morse type sequences lambda and theta, plus the classical sequence tau.

All three are built by doubling: the second half of each power-of-two
prefix is the reflected first half (with the last digit incremented for
lambda).  Indices in the ``check_*`` functions are 1-based to match the
usual way the sequences are written.
"""
from __future__ import annotations

import enum
from functools import lru_cache

from .core import Word, _alphabet, reflect, word_plus


class TMKind(enum.Enum):
    LAMBDA = "lambda"
    THETA = "theta"
    TAU = "tau"


def _doubling_length(n_terms: int) -> int:
    if n_terms < 1:
        raise ValueError("need at least one term")
    return 1 << (n_terms - 1).bit_length()


@lru_cache(maxsize=64)
def _lambda(N: int, length: int) -> Word:
    w = (N - 1,)
    while len(w) < length:
        w = w + word_plus(reflect(w, N), N)
    return w


@lru_cache(maxsize=64)
def _theta(N: int, length: int) -> Word:
    w = (N - 1,)
    while len(w) < length:
        w = w + reflect(w, N)
    return w


def lambda_prefix(p, n_terms: int) -> Word:
    """First ``n_terms`` digits of lambda = (N-1) 1 0 (N-1) 0 (N-2) (N-1) 1 ..."""
    return _lambda(_alphabet(p), _doubling_length(n_terms))[:n_terms]


def theta_prefix(p, n_terms: int) -> Word:
    return _theta(_alphabet(p), _doubling_length(n_terms))[:n_terms]


def classical_tau_prefix(n_terms: int) -> Word:
    """tau_0 tau_1 ... tau_{n_terms-1} = 0 1 1 0 1 0 0 1 ..."""
    length = _doubling_length(n_terms)
    w = (0,)
    while len(w) < length:
        w = w + tuple(1 - b for b in w)
    return w[:n_terms]


def prefix(kind: TMKind, p, n_terms: int) -> Word:
    kind = TMKind(kind)
    if kind is TMKind.LAMBDA:
        return lambda_prefix(p, n_terms)
    if kind is TMKind.THETA:
        return theta_prefix(p, n_terms)
    return classical_tau_prefix(n_terms)


def check_lambda_order(p, n: int) -> bool:
    """reflect(l_1..l_{2^n-i}) < l_{i+1}..l_{2^n} <= l_1..l_{2^n-i} for all 0 <= i < 2^n."""
    N = _alphabet(p)
    m = 1 << n
    lam = lambda_prefix(N, m)
    for i in range(m):
        head = lam[: m - i]
        tail = lam[i:m]
        if not reflect(head, N) < tail <= head:
            return False
    return True


def check_lambda_successor(p, n: int) -> bool:
    """If l_i is in {1..N-2} then l_{i+1} is in {0, N-1}, for 1 <= i < 2^n."""
    N = _alphabet(p)
    m = 1 << n
    lam = lambda_prefix(N, m + 1)
    for i in range(1, m):
        if 1 <= lam[i - 1] <= N - 2 and lam[i] not in (0, N - 1):
            return False
    return True


def check_theta_order(p, n: int) -> bool:
    """t_2..t_{2^n-i+1} <= t_{i+2}..t_{2^n+1} < reflect(t_2..t_{2^n-i+1}) for 0 <= i < 2^n."""
    N = _alphabet(p)
    m = 1 << n
    th = theta_prefix(N, m + 1)
    for i in range(m):
        head = th[1 : m - i + 1]
        tail = th[i + 1 : m + 1]
        if not head <= tail < reflect(head, N):
            return False
    return True


def theta_tau_relation(p, n_terms: int) -> bool:
    """theta_i == (N-1)(1 - tau_{i-1}) for 1 <= i <= n_terms."""
    N = _alphabet(p)
    th = theta_prefix(N, n_terms)
    tau = classical_tau_prefix(n_terms)
    return all(t == (N - 1) * (1 - u) for t, u in zip(th, tau))
