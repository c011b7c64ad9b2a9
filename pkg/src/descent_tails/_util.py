"""Shared helpers: error types, lattice bookkeeping for levels, log-space values."""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from numbers import Rational, Real
from typing import NamedTuple, Union

LevelLike = Union[Fraction, int, float, str, Decimal]


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class CapExceededError(DomainError):
    """Requested permutation size is above the configured exact-arithmetic cap."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class LogValue(NamedTuple):
    """A positive magnitude stored as its natural logarithm."""

    log: float

    def __float__(self) -> float:
        return from_log(self.log)


def as_fraction(x: LevelLike) -> Fraction:
    """Exact rational value of a level.

    Floats are taken at their exact binary64 value, so ``as_fraction(0.55)``
    is slightly above 11/20. Strings and Decimals are parsed exactly, which is
    what the CLI relies on.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, (str, Decimal)):
        return Fraction(x)
    if isinstance(x, Real):
        xf = float(x)
        if not math.isfinite(xf):
            raise DomainError(f"level must be finite, got {x!r}")
        return Fraction(xf)
    raise TypeError(f"cannot interpret {type(x).__name__} as a level")


def ceil_level(n: int, x: LevelLike) -> tuple[int, float]:
    """Return ``(ceil(n*x), {n*x})`` with ``{y} = ceil(y) - y``.

    ``{y}`` vanishes at integers, unlike the usual fractional part.
    """
    nx = n * as_fraction(x)
    c = math.ceil(nx)
    return c, float(c - nx)


def log_fraction(f: Fraction) -> float:
    """Natural log of a positive rational without converting it to float."""
    if f <= 0:
        return -math.inf if f == 0 else math.nan
    return math.log(f.numerator) - math.log(f.denominator)


def from_log(lv: float) -> float:
    """exp that saturates instead of raising."""
    if lv > 709.782712893384:
        return math.inf
    return math.exp(lv)


def round_up(f: Fraction) -> float:
    """Smallest binary64 value >= f (for one-sided comparisons)."""
    y = float(f)
    if Fraction(y) < f:
        y = math.nextafter(y, math.inf)
    return y
