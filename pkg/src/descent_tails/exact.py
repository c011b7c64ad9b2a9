"""Exact law of the descent count ``D_n`` of a uniform permutation of size n.

Everything here is integer or rational arithmetic. The Eulerian row
``A(n, k)`` (permutations of size n with k descents) is built by the usual
recurrence, one row at a time, and the Irwin-Hall interval probabilities are
computed independently by inclusion-exclusion so the two can be checked
against each other.

Floating point only appears in :func:`exact_laplace` and its relatives, and
:func:`exact_laplace_mp` stays in arbitrary precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from ._util import CapExceededError, DomainError, LevelLike, LogValue, ceil_level

__all__ = [
    "DEFAULT_CAP",
    "ExactDistribution",
    "eulerian_distribution",
    "exact_pmf",
    "exact_tail",
    "exact_left_tail",
    "irwin_hall_interval",
    "irwin_hall_cdf",
    "exact_laplace",
    "exact_log_laplace",
    "exact_laplace_complex",
    "exact_laplace_mp",
]

DEFAULT_CAP = 2000


@dataclass(frozen=True)
class ExactDistribution:
    """Eulerian row ``weights[k] = A(n, k)`` together with ``total = n!``."""

    n: int
    weights: tuple[int, ...]
    total: int
    _suffix: tuple[int, ...] = field(repr=False, compare=False, default=())

    def __post_init__(self):
        if not self._suffix:
            acc = 0
            suffix = [0] * (self.n + 1)
            for k in range(self.n - 1, -1, -1):
                acc += self.weights[k]
                suffix[k] = acc
            object.__setattr__(self, "_suffix", tuple(suffix))

    def pmf(self, k: int) -> Fraction:
        if 0 <= k < self.n:
            return Fraction(self.weights[k], self.total)
        return Fraction(0)

    def upper_tail_count(self, c: int) -> int:
        """Number of permutations with at least ``c`` descents."""
        if c <= 0:
            return self.total
        if c >= self.n:
            return 0
        return self._suffix[c]

    def tail(self, c: int) -> Fraction:
        """``P(D_n >= c)``."""
        return Fraction(self.upper_tail_count(c), self.total)

    def mean(self) -> Fraction:
        return Fraction(sum(k * w for k, w in enumerate(self.weights)), self.total)

    def variance(self) -> Fraction:
        m = self.mean()
        second = Fraction(sum(k * k * w for k, w in enumerate(self.weights)), self.total)
        return second - m * m

    def log_probabilities(self) -> np.ndarray:
        """``log P(D_n = k)`` in binary64; safe even when ``1/n!`` underflows."""
        log_total = math.log(self.total)
        return np.array([math.log(w) - log_total for w in self.weights])


def _check_size(n: int, cap: int) -> None:
    if n < 1:
        raise DomainError(f"permutation size must be >= 1, got {n}")
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the exact-arithmetic cap {cap}")


def _eulerian_row(n: int) -> tuple[int, ...]:
    row = np.array([1], dtype=object)
    for m in range(2, n + 1):
        k = np.arange(m, dtype=object)
        new = np.zeros(m, dtype=object)
        new[: m - 1] += (k[: m - 1] + 1) * row
        new[1:] += (m - k[1:]) * row
        row = new
    return tuple(int(a) for a in row)


@lru_cache(maxsize=64)
def _distribution(n: int) -> ExactDistribution:
    return ExactDistribution(n=n, weights=_eulerian_row(n), total=math.factorial(n))


def eulerian_distribution(n: int, cap: int = DEFAULT_CAP) -> ExactDistribution:
    """Exact law of ``D_n`` from ``A(n,k) = (k+1)A(n-1,k) + (n-k)A(n-1,k-1)``."""
    _check_size(n, cap)
    return _distribution(n)


def exact_pmf(n: int, k: int, cap: int = DEFAULT_CAP) -> Fraction:
    """``P(D_n = k)``; zero outside ``0..n-1``."""
    return eulerian_distribution(n, cap).pmf(k)


def exact_tail(n: int, x: LevelLike, cap: int = DEFAULT_CAP) -> Fraction:
    """``P(D_n/n >= x) = sum_{k >= ceil(nx)} P(D_n = k)``.

    ``x`` may be a Fraction, int, decimal string or float; a float is used at
    its exact binary64 value when forming ``ceil(nx)``.
    """
    c, _ = ceil_level(n, x)
    return eulerian_distribution(n, cap).tail(c)


def exact_left_tail(n: int, m: int, cap: int = DEFAULT_CAP) -> Fraction:
    """``P(D_n <= m)``."""
    dist = eulerian_distribution(n, cap)
    return 1 - dist.tail(m + 1)


def _irwin_hall_cdf_numerator(n: int, y: int) -> int:
    """``n! * P(S_n < y)`` for integer ``y``."""
    if y <= 0:
        return 0
    if y >= n:
        return math.factorial(n)
    return sum((-1) ** j * math.comb(n, j) * (y - j) ** n for j in range(y + 1))


def irwin_hall_cdf(n: int, y: int) -> Fraction:
    """``P(S_n <= y)`` at an integer point, ``S_n`` a sum of n Uniform[0,1]."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return Fraction(_irwin_hall_cdf_numerator(n, y), math.factorial(n))


def irwin_hall_interval(n: int, k: int) -> Fraction:
    """``P(k <= S_n < k + 1)`` by inclusion-exclusion."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n - 1:
        raise DomainError(f"k must lie in 0..{n - 1}, got {k}")
    num = _irwin_hall_cdf_numerator(n, k + 1) - _irwin_hall_cdf_numerator(n, k)
    return Fraction(num, math.factorial(n))


def exact_log_laplace(n: int, t: float, cap: int = DEFAULT_CAP) -> float:
    """``log m_n(t) = log E[exp(t D_n)]`` with a shifted compensated sum."""
    dist = eulerian_distribution(n, cap)
    terms = dist.log_probabilities() + t * np.arange(n)
    shift = float(terms.max())
    return shift + math.log(math.fsum(np.exp(terms - shift)))


def exact_laplace(n: int, t: float, cap: int = DEFAULT_CAP) -> float | LogValue:
    """``m_n(t)``; returned as a :class:`LogValue` when it would overflow."""
    lv = exact_log_laplace(n, t, cap)
    if lv > 700.0:
        return LogValue(lv)
    return math.exp(lv)


def exact_laplace_complex(n: int, w: complex, cap: int = DEFAULT_CAP) -> complex:
    """``m_n(w)`` for complex ``w`` (binary64; moderate ``Re w`` only)."""
    dist = eulerian_distribution(n, cap)
    k = np.arange(n)
    logs = dist.log_probabilities() + w.real * k
    shift = float(logs.max())
    mag = np.exp(logs - shift)
    phase = w.imag * k
    re = math.fsum(mag * np.cos(phase))
    im = math.fsum(mag * np.sin(phase))
    return complex(re, im) * math.exp(shift)


def exact_laplace_mp(n: int, w, dps: int = 50, cap: int = DEFAULT_CAP):
    """``m_n(w)`` as an mpmath number at ``dps`` decimal digits."""
    dist = eulerian_distribution(n, cap)
    with mpmath.workdps(dps):
        w = mpmath.mpmathify(w)
        acc = mpmath.mpf(0)
        z = mpmath.exp(w)
        zk = mpmath.mpf(1)
        for a in dist.weights:
            acc += a * zk
            zk *= z
        return +(acc / dist.total)
