"""Leading-order expansion of the Laplace transform ``m_n(t) = E[exp(t D_n)]``.

For ``t != 0``::

    m_n(t) = ((1 - e^{-t})/t) * ((e^t - 1)/t)^n * (1 + r_n(t))

with an explicit envelope on ``|r_n(t)|`` that decays geometrically in n.
The same expansion holds on horizontal lines ``t + iv`` with ``|v| < pi``,
and a second, cruder bound on ``|m_n(t + iv)|`` survives up to ``|v| = pi``.

Magnitudes are carried as logarithms. Complex powers are formed by repeated
squaring of a unit-modulus phase, never by scaling a principal logarithm.
Realized remainders are evaluated in mpmath at a precision chosen from the
size of the envelope, because binary64 cannot resolve a remainder of 1e-50.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np

from ._util import DomainError
from .cgf import cgf_L, cgf_L2, log_abs_expm1, unit_expm1_ratio
from .exact import exact_laplace_mp, exact_log_laplace

__all__ = [
    "LogComplex",
    "LaplaceEstimate",
    "leading_term",
    "remainder_envelope_real",
    "log_remainder_envelope_real",
    "laplace_estimate",
    "complex_leading_and_envelope",
    "complex_envelope",
    "complex_remainder",
    "complex_modulus_bound",
    "complex_pow",
]

PI = math.pi
PI2 = PI * PI


class LogComplex(NamedTuple):
    """Complex number ``exp(log_abs) * phase`` with ``|phase| = 1``."""

    log_abs: float
    phase: complex

    def __complex__(self) -> complex:
        return math.exp(self.log_abs) * self.phase


def complex_pow(z, n: int):
    """``z**n`` by binary exponentiation; works elementwise on arrays."""
    if n < 0:
        raise ValueError("negative powers are not needed here")
    result = np.ones_like(np.asarray(z, dtype=complex))
    base = np.asarray(z, dtype=complex)
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return complex(result) if result.ndim == 0 else result


def _unit_pow(u, n: int):
    # renormalize after each product so rounding never drifts off the unit circle
    result = np.ones_like(np.asarray(u, dtype=complex))
    base = np.asarray(u, dtype=complex)
    while n:
        if n & 1:
            result = result * base
            result = result / np.abs(result)
        n >>= 1
        if n:
            base = base * base
            base = base / np.abs(base)
    return complex(result) if result.ndim == 0 else result


def _require_nonzero(t: float) -> None:
    if t == 0:
        raise DomainError("the expansion is stated for t != 0")


def leading_term(n: int, t: float) -> float:
    """``log[((1 - e^{-t})/t) ((e^t - 1)/t)^n]``.

    Uses ``(1 - e^{-t})/t = e^{-t} (e^t - 1)/t``, i.e. ``(n + 1) L(t) - t``.
    """
    _require_nonzero(t)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    return (n + 1) * cgf_L(t) - t


def log_remainder_envelope_real(n: int, t: float) -> float:
    """Logarithm of :func:`remainder_envelope_real`."""
    _require_nonzero(t)
    if n < 1:
        raise DomainError(f"the envelope is stated for n >= 1, got {n}")
    poly = 1 + 1 / PI + (2 + n) / math.sqrt(t * t + 4 * PI2)
    return math.log(abs(t)) + 1.0 + math.log(poly) - 0.5 * n * math.log1p(4 * PI2 / (t * t))


def remainder_envelope_real(n: int, t: float) -> float:
    """``|t| e (1 + 1/pi + (2+n)/sqrt(t^2 + 4 pi^2)) (1 + 4 pi^2/t^2)^{-n/2}``."""
    return math.exp(log_remainder_envelope_real(n, t))


def _dps_for(log_env: float) -> int:
    return 30 + max(0, math.ceil(-log_env / math.log(10)))


@dataclass(frozen=True)
class LaplaceEstimate:
    """Leading term, exact value and remainder of ``m_n(t)`` at one point."""

    n: int
    t: float
    leading: float
    exact: float
    remainder: float
    envelope: float

    @property
    def within_envelope(self) -> bool:
        return abs(self.remainder) <= self.envelope


def laplace_estimate(n: int, t: float) -> LaplaceEstimate:
    """Compare the expansion with the exact Eulerian transform at ``(n, t)``."""
    log_env = log_remainder_envelope_real(n, t)
    dps = _dps_for(log_env)
    with mpmath.workdps(dps):
        tm = mpmath.mpf(t)
        exact = exact_laplace_mp(n, tm, dps)
        lead = (-mpmath.expm1(-tm) / tm) * (mpmath.expm1(tm) / tm) ** n
        r = exact / lead - 1
        remainder = float(r)
    return LaplaceEstimate(
        n=n,
        t=t,
        leading=leading_term(n, t),
        exact=exact_log_laplace(n, t),
        remainder=remainder,
        envelope=math.exp(log_env),
    )


def _check_complex_args(t: float, v: float, strict: bool) -> None:
    _require_nonzero(t)
    if strict and not abs(v) < PI:
        raise DomainError(f"|v| must be < pi, got {v!r}")
    if not strict and abs(v) > PI:
        raise DomainError(f"|v| must be <= pi, got {v!r}")


def complex_envelope(n: int, t: float, v):
    """Envelope on ``|r_n(t + iv)|`` for ``|v| < pi``; vectorized in ``v``."""
    v = np.asarray(v, dtype=float)
    s2 = t * t + v * v
    poly = 1 + 1 / PI + math.sqrt(t * t + 4 * PI2) / (PI * (PI - np.abs(v)))
    out = np.sqrt(s2) * poly * np.exp(0.5 * n * np.log(s2 / (t * t + PI2)))
    return float(out) if out.ndim == 0 else out


def complex_leading_and_envelope(n: int, t: float, v: float) -> tuple[LogComplex, float]:
    """Leading term of ``m_n(t + iv)`` in log-polar form, and its remainder envelope."""
    _check_complex_args(t, v, strict=True)
    w = complex(t, v)
    log_abs_w = math.log(abs(w))
    log_ratio = log_abs_expm1(w) - log_abs_w
    # (1 - e^{-w})/w = e^{-w} (e^w - 1)/w
    log_abs = (n + 1) * log_ratio - t
    u = unit_expm1_ratio(w)
    phase = _unit_pow(u, n + 1) * complex(math.cos(-v), math.sin(-v))
    return LogComplex(log_abs, phase), complex_envelope(n, t, v)


def complex_remainder(n: int, t: float, v: float) -> complex:
    """Realized ``r_n(t + iv) = m_n(t + iv)/leading - 1`` in high precision."""
    _check_complex_args(t, v, strict=True)
    log_env = math.log(max(complex_envelope(n, t, v), 1e-300))
    dps = _dps_for(log_env)
    with mpmath.workdps(dps):
        w = mpmath.mpc(t, v)
        exact = exact_laplace_mp(n, w, dps)
        lead = (-mpmath.expm1(-w) / w) * (mpmath.expm1(w) / w) ** n
        r = exact / lead - 1
        return complex(r)


def complex_modulus_bound(n: int, t: float, v: float) -> float:
    """Log of the bound on ``|m_n(t + iv)|`` valid for ``|v| <= pi``.

    ``|1 - e^{-w}| ((e^t-1)/t)^n [ e^{-n C1 v^2/2}/|w| + K e^{-n C2 v^2/2} ]`` with
    ``C1 = t^2 L''(t)/(t^2 + pi^2)``, ``C2 = 4 t^2 L''(t)/(pi^2 (t^2 + 4))`` and
    ``K = 1 + 1/pi + 2 sqrt(t^2 + pi^2)/(pi^2 - 4)``.
    """
    _check_complex_args(t, v, strict=False)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    w = complex(t, v)
    l2 = cgf_L2(t)
    c1 = t * t * l2 / (t * t + PI2)
    c2 = 4 * t * t * l2 / (PI2 * (t * t + 4))
    k = 1 + 1 / PI + 2 * math.sqrt(t * t + PI2) / (PI2 - 4)
    a = -0.5 * math.log(t * t + v * v) - n * c1 * v * v / 2
    b = math.log(k) - n * c2 * v * v / 2
    hi = max(a, b)
    log_bracket = hi + math.log(math.exp(a - hi) + math.exp(b - hi))
    log_one_minus = log_abs_expm1(w) - t
    return log_one_minus + n * cgf_L(t) + log_bracket
