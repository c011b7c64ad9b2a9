"""Asymptotic cumulant generating function of the descent count.

``L(t) = log((e^t - 1)/t)`` is the log-Laplace transform of a Uniform[0, 1]
variable. Everything scalar about the large-deviation picture comes from it:
the saddlepoint ``t_x`` solving ``L'(t_x) = x``, the rate
``I(x) = x t_x - L(t_x)`` and the curvature ``L''(t_x)``.

All three real functions accept scalars or arrays. Near ``t = 0`` they switch
to Taylor series; for ``|t| > 30`` they use forms that never build ``e^t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import DomainError, LevelLike, as_fraction

__all__ = [
    "RatePoint",
    "cgf_L",
    "cgf_L1",
    "cgf_L2",
    "complex_L",
    "cexpm1",
    "log_abs_expm1",
    "unit_expm1_ratio",
    "solve_saddlepoint",
    "rate_function",
    "complex_L_realpart_bound",
]

SERIES_CUT = 1e-3
# L'' loses ~log10(12/t^2) digits to cancellation; its series is used further out.
SERIES_CUT_L2 = 0.05
LARGE_T = 30.0

SADDLE_TOL = 1e-12


def _scalar_or_array(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def cgf_L(t):
    """``log((e^t - 1)/t)`` with ``L(0) = 0``."""
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    a = np.abs(t)
    small = a < SERIES_CUT
    big = a > LARGE_T
    mid = ~(small | big)

    ts = t[small]
    t2 = ts * ts
    out[small] = ts / 2 + t2 * (1 / 24 + t2 * (-1 / 2880 + t2 / 181440))

    tm = t[mid]
    out[mid] = np.log(np.expm1(tm) / tm)

    tb = t[big]
    # (e^t - 1)/t = e^{|t|}(1 - e^{-|t|})/t for t > 0 and (1 - e^{t})/|t| for t < 0
    pos = tb > 0
    out_b = np.where(
        pos,
        np.abs(tb) - np.log(np.abs(tb)) + np.log1p(-np.exp(-np.abs(tb))),
        np.log1p(-np.exp(-np.abs(tb))) - np.log(np.abs(tb)),
    )
    out[big] = out_b
    return _scalar_or_array(out, scalar)


def cgf_L1(t):
    """First derivative ``1/(1 - e^{-t}) - 1/t``; equals 1/2 at the origin."""
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = np.abs(t) < SERIES_CUT
    ts = t[small]
    t2 = ts * ts
    out[small] = 0.5 + ts * (1 / 12 + t2 * (-1 / 720 + t2 / 30240))
    tr = t[~small]
    with np.errstate(over="ignore"):
        # -1/expm1(-t) = 1/(1 - e^{-t}); expm1 overflowing to inf gives the right limit 0
        out[~small] = -1.0 / np.expm1(-tr) - 1.0 / tr
    return _scalar_or_array(out, scalar)


def _tilt_weight(t: np.ndarray) -> np.ndarray:
    """``e^t/(e^t - 1)^2`` (even in t), overflow-free."""
    a = np.exp(-np.abs(t))
    return a / (-np.expm1(-np.abs(t))) ** 2


def cgf_L2(t):
    """Second derivative ``1/t^2 - e^t/(e^t - 1)^2``; equals 1/12 at the origin."""
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = np.abs(t) < SERIES_CUT_L2
    ts = t[small]
    t2 = ts * ts
    out[small] = 1 / 12 + t2 * (-1 / 240 + t2 * (1 / 6048 + t2 * (-1 / 172800 + t2 / 5322240)))
    tr = t[~small]
    out[~small] = 1.0 / (tr * tr) - _tilt_weight(tr)
    return _scalar_or_array(out, scalar)


def cexpm1(w):
    """``e^w - 1`` for complex input without cancellation near 0."""
    w = np.asarray(w, dtype=complex)
    a, b = w.real, w.imag
    with np.errstate(over="ignore", invalid="ignore"):
        re = np.expm1(a) * np.cos(b) - 2.0 * np.sin(0.5 * b) ** 2
        im = np.exp(a) * np.sin(b)
    out = re + 1j * im
    return complex(out) if out.ndim == 0 else out


def log_abs_expm1(w):
    """``log|e^w - 1|`` for complex ``w``; finite for any real part."""
    w = np.asarray(w, dtype=complex)
    pos = w.real > 0
    with np.errstate(over="ignore", divide="ignore"):
        # for Re w > 0 factor out e^w: |e^w - 1| = e^{Re w} |1 - e^{-w}|
        out = np.where(
            pos,
            w.real + np.log(np.abs(cexpm1(-np.where(pos, w, 0)))),
            np.log(np.abs(cexpm1(np.where(pos, 0, w)))),
        )
    return float(out) if out.ndim == 0 else out


def unit_expm1_ratio(w):
    """Unit-modulus phase of ``(e^w - 1)/w``."""
    w = np.asarray(w, dtype=complex)
    pos = w.real > 0
    with np.errstate(over="ignore", invalid="ignore"):
        # e^w - 1 = -e^{i Im w} e^{Re w} expm1(-w); the positive factor e^{Re w} drops out
        z = np.where(pos, -np.exp(1j * w.imag) * cexpm1(-np.where(pos, w, 0)), cexpm1(np.where(pos, 0, w)))
    z = z / w
    out = z / np.abs(z)
    return complex(out) if out.ndim == 0 else out


def complex_L(w):
    """Principal-branch ``log((e^w - 1)/w)`` for complex ``w`` off ``2i*pi*Z*``.

    Only the real part is branch-free; powers of the ratio must not be formed
    by scaling this logarithm.
    """
    w = np.asarray(w, dtype=complex)
    out = (log_abs_expm1(w) - np.log(np.abs(w))) + 1j * np.angle(unit_expm1_ratio(w))
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class RatePoint:
    """Saddlepoint data for a level ``x`` in (0, 1)."""

    x: float
    t_x: float
    rate: float
    sigma_sq: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma_sq)


def _saddle_t(x: float) -> float:
    if x == 0.5:
        return 0.0
    lo, hi = -100.0, 100.0
    # L'(t) ~ 1 - 1/t for large t, so levels beyond 0.99 need a wider bracket
    while cgf_L1(hi) <= x:
        hi *= 4
    while cgf_L1(lo) >= x:
        lo *= 4
    t = min(max(0.0, lo), hi)
    best_t, best_g = t, math.inf
    for _ in range(200):
        g = cgf_L1(t) - x
        if abs(g) < best_g:
            best_t, best_g = t, abs(g)
        if g == 0.0:
            break
        if g > 0:
            hi = t
        else:
            lo = t
        t_new = t - g / cgf_L2(t)
        if not (lo < t_new < hi):
            t_new = 0.5 * (lo + hi)
        if t_new == t:
            break
        t = t_new
    return best_t


def solve_saddlepoint(x: LevelLike) -> RatePoint:
    """Solve ``L'(t_x) = x`` and package the rate and curvature.

    Raises DomainError unless ``0 < x < 1``.
    """
    xf = float(as_fraction(x))
    if not (0.0 < xf < 1.0):
        raise DomainError(f"level must lie in (0, 1), got {x!r}")
    t = _saddle_t(xf)
    if abs(cgf_L1(t) - xf) > SADDLE_TOL:
        raise AssertionError(f"saddlepoint solver missed tolerance at x={xf!r}")
    rate = xf * t - cgf_L(t)
    return RatePoint(x=xf, t_x=t, rate=max(rate, 0.0), sigma_sq=cgf_L2(t))


def rate_function(x: LevelLike) -> float:
    """``I(x) = sup_t {x t - L(t)}``."""
    return solve_saddlepoint(x).rate


def complex_L_realpart_bound(t: float, v: float) -> tuple[float, float]:
    """Both sides of ``Re L(t + iv) <= L(t) - C(t) v^2/2``.

    ``C(t) = t^2 L''(t)/(t^2 + pi^2)``. Returns ``(lhs, rhs)``; the inequality
    itself is left to the caller to check.
    """
    if t == 0:
        raise DomainError("the complex bound is stated for t != 0")
    if abs(v) > math.pi:
        raise DomainError(f"|v| must not exceed pi, got {v!r}")
    lhs = complex_L(complex(t, v)).real
    c = t * t * cgf_L2(t) / (t * t + math.pi**2)
    rhs = cgf_L(t) - c * v * v / 2
    return lhs, rhs
