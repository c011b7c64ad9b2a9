"""Tail estimates for ``P(D_n/n >= x)`` with ``1/2 < x < 1``.

Every estimate shares the exponential factor ``exp(-n I(x) - {nx} t_x)``
where ``{nx} = ceil(nx) - nx``:

* ``sharp``    -- divided by ``sigma_x t_x sqrt(2 pi n)``; asymptotically exact
* ``cid``      -- ``sharp`` times a prefactor ``P(x)``; an upper bound for all n
* ``qn``       -- ``sharp`` times an n-dependent prefactor ``Q_n(x)``, n > 2
* ``chernoff`` -- the exponential factor alone
* ``azuma``    -- ``exp(-2 n^4 (x - 1/2)^2 / s_n)``, ``s_n = sum_{k=2}^n k^2``

All functions return natural logarithms; use :func:`to_prob` to convert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ._util import DomainError, LevelLike, as_fraction, ceil_level, from_log, log_fraction
from .cgf import RatePoint, _tilt_weight, solve_saddlepoint
from .exact import DEFAULT_CAP, eulerian_distribution, exact_left_tail

__all__ = [
    "BoundReport",
    "BOUND_NAMES",
    "sharp_tail_approx",
    "cid_prefactor",
    "cid_bound",
    "qn_prefactor",
    "qn_bound",
    "azuma_bound",
    "azuma_s",
    "chernoff_bound",
    "bound_report",
    "left_tail_transfer",
    "sharpness_crossover",
    "to_prob",
]

BOUND_NAMES = ("sharp", "cid", "qn", "azuma", "chernoff")
HALF = Fraction(1, 2)


def to_prob(log_value: Optional[float]) -> Optional[float]:
    return None if log_value is None else from_log(log_value)


def _right_level(x: LevelLike) -> Fraction:
    xq = as_fraction(x)
    if not HALF < xq < 1:
        raise DomainError(f"level must lie in (1/2, 1), got {x!r}")
    return xq


def _check_n(n: int, lowest: int = 1) -> None:
    if n < lowest:
        raise DomainError(f"n must be >= {lowest}, got {n}")


def _exponent(n: int, xq: Fraction, rp: RatePoint) -> float:
    _, frac = ceil_level(n, xq)
    return -n * rp.rate - frac * rp.t_x


def sharp_tail_approx(n: int, x: LevelLike) -> float:
    """``-n I(x) - {nx} t_x - log(sigma_x t_x sqrt(2 pi n))``."""
    _check_n(n)
    xq = _right_level(x)
    rp = solve_saddlepoint(xq)
    return _exponent(n, xq, rp) - math.log(rp.sigma * rp.t_x * math.sqrt(2 * math.pi * n))


def cid_prefactor(x: LevelLike) -> float:
    """``P(x) = sqrt((t^2 + pi^2)/t^2) + (1 + 1/pi + 2 sqrt(t^2+pi^2)/(pi^2-4)) sqrt(pi^2 (t^2+4)/4)``."""
    t = solve_saddlepoint(_right_level(x)).t_x
    pi2 = math.pi**2
    first = math.sqrt((t * t + pi2) / (t * t))
    k = 1 + 1 / math.pi + 2 * math.sqrt(t * t + pi2) / (pi2 - 4)
    return first + k * math.sqrt(pi2 * (t * t + 4) / 4)


def cid_bound(n: int, x: LevelLike) -> float:
    """Concentration bound ``log P(x) + sharp_tail_approx``, valid for every n >= 1."""
    return sharp_tail_approx(n, x) + math.log(cid_prefactor(x))


def qn_prefactor(n: int, x: LevelLike) -> float:
    """``Q_n(x)``; the second term carries ``sqrt(n)/(2^{n/2}(n - 2))``."""
    _check_n(n, 3)
    rp = solve_saddlepoint(_right_level(x))
    t = rp.t_x
    tw = float(_tilt_weight(np.float64(t)))
    first = math.sqrt(2 + 8 * tw)
    log_second = (
        math.log(4 * rp.sigma * t / math.sqrt(2 * math.pi))
        + 0.5 * math.log1p(8 * tw)
        + 0.5 * math.log(n)
        - 0.5 * n * math.log(2)
        - math.log(n - 2)
    )
    return first + math.exp(log_second)


def qn_bound(n: int, x: LevelLike) -> float:
    """``log Q_n(x) + sharp_tail_approx``; requires n > 2."""
    _check_n(n, 3)
    return sharp_tail_approx(n, x) + math.log(qn_prefactor(n, x))


def azuma_s(n: int) -> int:
    """``s_n = sum_{k=2}^n k^2``."""
    return n * (n + 1) * (2 * n + 1) // 6 - 1


def azuma_bound(n: int, x: LevelLike) -> float:
    """``-2 n^4 (x - 1/2)^2 / s_n``, exponent computed in exact rationals."""
    _check_n(n, 2)
    xq = _right_level(x)
    return float(-2 * Fraction(n**4) * (xq - HALF) ** 2 / azuma_s(n))


def chernoff_bound(n: int, x: LevelLike) -> float:
    """``-n I(x) - {nx} t_x``."""
    _check_n(n)
    xq = _right_level(x)
    return _exponent(n, xq, solve_saddlepoint(xq))


@dataclass(frozen=True)
class BoundReport:
    """All tail estimates for one ``(n, x)``, as natural logarithms.

    For a left-tail report (``side == "left"``) the probability concerned is
    ``P(D_n/n <= level)`` and ``x`` is the transferred right-tail level
    ``1 - level - 1/n``.
    """

    n: int
    x: Fraction
    ceil_nx: int
    frac: float
    exact: Optional[Fraction]
    sharp: Optional[float]
    cid: Optional[float]
    qn: Optional[float]
    azuma: Optional[float]
    chernoff: Optional[float]
    side: str = "right"
    level: Optional[Fraction] = None
    notes: tuple[str, ...] = field(default=())

    @property
    def log_exact(self) -> Optional[float]:
        return None if self.exact is None else log_fraction(self.exact)

    def prob(self, name: str) -> Optional[float]:
        if name == "exact":
            return None if self.exact is None else float(self.exact)
        return to_prob(getattr(self, name))

    def bounds(self) -> dict[str, float]:
        """The four upper bounds that are defined for this ``n``."""
        return {k: getattr(self, k) for k in ("cid", "qn", "azuma", "chernoff") if getattr(self, k) is not None}


def _estimates(n: int, xq: Fraction) -> tuple[dict, list[str]]:
    out: dict[str, Optional[float]] = {}
    notes: list[str] = []
    out["sharp"] = sharp_tail_approx(n, xq)
    out["cid"] = cid_bound(n, xq)
    out["chernoff"] = chernoff_bound(n, xq)
    if n > 2:
        out["qn"] = qn_bound(n, xq)
    else:
        out["qn"] = None
        notes.append("qn undefined for n <= 2")
    if n >= 2:
        out["azuma"] = azuma_bound(n, xq)
    else:
        out["azuma"] = None
        notes.append("azuma undefined for n < 2")
    return out, notes


def bound_report(n: int, x: LevelLike, with_exact: bool = True, cap: int = DEFAULT_CAP) -> BoundReport:
    """Evaluate every estimate at ``(n, x)``; the exact tail is attached when ``n <= cap``."""
    _check_n(n)
    xq = _right_level(x)
    c, frac = ceil_level(n, xq)
    est, notes = _estimates(n, xq)
    exact = None
    if with_exact and n <= cap:
        exact = eulerian_distribution(n, cap).tail(c)
    return BoundReport(n=n, x=xq, ceil_nx=c, frac=frac, exact=exact, level=xq, notes=tuple(notes), **est)


def left_tail_transfer(n: int, y: LevelLike, with_exact: bool = True, cap: int = DEFAULT_CAP) -> BoundReport:
    """Estimates for ``P(D_n/n <= y)``, ``0 < y < 1/2``, through the symmetry ``D_n ~ n-1-D_n``.

    ``D_n <= m`` with ``m = floor(n y)`` has the law of ``D_n >= n - 1 - m``,
    which is the right-tail event at ``x = 1 - y - 1/n`` (``ceil(nx) = n-1-m``,
    ``{nx} = ny - floor(ny)``). When ``n - 1 - m <= 0`` the probability is 1.
    When ``x <= 1/2`` the right-tail bounds do not apply and are left as None.
    """
    _check_n(n)
    yq = as_fraction(y)
    if not 0 < yq < HALF:
        raise DomainError(f"level must lie in (0, 1/2), got {y!r}")
    m = math.floor(n * yq)
    c = n - 1 - m
    xq = 1 - yq - Fraction(1, n)
    exact = exact_left_tail(n, m, cap) if with_exact and n <= cap else None
    notes = [f"P(D_n <= {m}) = P(D_n >= {c})"]
    if c <= 0:
        notes.append("event has probability 1")
        zeros = dict(sharp=0.0, cid=0.0, qn=0.0, azuma=0.0, chernoff=0.0)
        return BoundReport(n=n, x=xq, ceil_nx=c, frac=0.0, exact=exact, side="left", level=yq,
                           notes=tuple(notes), **zeros)
    if not xq > HALF:
        notes.append("transferred level is not above 1/2; right-tail bounds not applicable")
        nones = dict(sharp=None, cid=None, qn=None, azuma=None, chernoff=None)
        return BoundReport(n=n, x=xq, ceil_nx=c, frac=float(c - n * xq), exact=exact, side="left",
                           level=yq, notes=tuple(notes), **nones)
    c_check, frac = ceil_level(n, xq)
    assert c_check == c
    est, more = _estimates(n, xq)
    return BoundReport(n=n, x=xq, ceil_nx=c, frac=frac, exact=exact, side="left", level=yq,
                       notes=tuple(notes + more), **est)


def sharpness_crossover(x: LevelLike, against: str = "chernoff", n_max: int = 10_000) -> Optional[int]:
    """Smallest ``n0 <= n_max`` with ``cid < against`` for every ``n0 <= n <= n_max``.

    Returns None when the CID bound is not below the other bound at ``n_max``.
    """
    xq = _right_level(x)
    rp = solve_saddlepoint(xq)
    ns = np.arange(1, n_max + 1)
    nx = [n * xq for n in range(1, n_max + 1)]
    frac = np.array([float(math.ceil(v) - v) for v in nx])
    expo = -ns * rp.rate - frac * rp.t_x
    cid = expo - np.log(rp.sigma * rp.t_x * np.sqrt(2 * math.pi * ns)) + math.log(cid_prefactor(xq))
    if against == "chernoff":
        other = expo
    elif against == "azuma":
        s = ns * (ns + 1) * (2 * ns + 1) / 6 - 1
        d = float(xq - HALF)
        with np.errstate(divide="ignore"):
            other = np.where(ns >= 2, -2 * ns.astype(float) ** 4 * d * d / np.maximum(s, 1), np.inf)
    else:
        raise ValueError(f"unknown bound {against!r}")
    ok = cid < other
    if not ok[-1]:
        return None
    bad = np.nonzero(~ok)[0]
    return int(ns[bad[-1] + 1]) if bad.size else 1
