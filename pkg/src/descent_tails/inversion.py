"""Fourier-side oracles that never touch the Eulerian numbers.

``parseval_tail`` evaluates the tail through the tilted Parseval integral of
the Irwin-Hall sum ``S_n`` (``P(D_n >= c) = P(S_n >= c)``). After the change
of variable ``u = v/(sigma_x sqrt(n))`` it reads::

    P(D_n/n >= x) = exp(-n I(x) - {nx} t_x)/(2 pi)
                    * int_R e^{-i {nx} u} rho(u)^n e^{-i n x u} / (t_x + i u) du

with ``rho(u) = ((e^w - 1)/w) / ((e^t - 1)/t)`` and ``w = t_x + i u``.
The integrand at ``-u`` is the conjugate of its value at ``u``, so only
``u >= 0`` is integrated. The range is split at the cut ``A`` (default
``A^2 = t^2 + 8 t^2 e^t/(e^t - 1)^2``); the outer part is integrated
numerically out to a point ``U`` past which the modulus bound
``|integrand| <= B^{n/2} (t^2 + u^2)^{-(n+1)/2}``, ``B = t^2 + 4 t^2 e^t/(e^t-1)^2``,
leaves less than the requested tolerance.

``fourier_pmf`` recovers a single point mass from the leading term of the
complex expansion of ``m_n(t + iv)`` and certifies the result with the
integrated remainder envelopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._util import ConvergenceError, DomainError, LevelLike, as_fraction, ceil_level
from .cgf import _tilt_weight, cexpm1, cgf_L, solve_saddlepoint
from .laplace import complex_envelope, complex_modulus_bound, complex_pow
from .quadrature import QuadratureSpec, integrate

__all__ = [
    "InversionResult",
    "default_truncation",
    "parseval_integrand",
    "parseval_tail",
    "fourier_pmf",
]

TWO_PI = 2 * math.pi
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class InversionResult:
    """A numerically inverted probability and its error budget.

    ``truncation_error`` is a rigorous bound on the discarded part of the
    integration range (or, for ``fourier_pmf``, on the approximation of
    ``m_n`` by its leading term); ``quadrature_error`` is the integrator's
    Kronrod-Gauss estimate.
    """

    value: float
    truncation_error: float
    quadrature_error: float
    cut: float
    panels: int

    @property
    def error_bar(self) -> float:
        return self.truncation_error + self.quadrature_error


def default_truncation(t: float) -> float:
    """``A = sqrt(t^2 + 8 t^2 e^t/(e^t - 1)^2)``."""
    return math.sqrt(t * t * (1 + 8 * float(_tilt_weight(np.float64(t)))))


def _ratio(u: np.ndarray, t: float) -> np.ndarray:
    w = t + 1j * u
    # rho = (e^w - 1)/w * t/(e^t - 1); both factors share e^t, divide it out first
    num = cexpm1(w) * math.exp(-t) if t < 30 else -np.exp(1j * u) * cexpm1(-w)
    return (num / w) * (t / -math.expm1(-t))


def parseval_integrand(u, n: int, t: float, c: int) -> np.ndarray:
    """``rho(u)^n e^{-i c u}/(t + i u)`` with ``c = ceil(n x)``."""
    u = np.asarray(u, dtype=float)
    return complex_pow(_ratio(u, t), n) * np.exp(-1j * c * u) / (t + 1j * u)


def _tail_bound(n: int, t: float, cut: float) -> float:
    """Bound on ``2 * int_cut^inf |integrand| du`` (both half-lines)."""
    b = t * t * (1 + 4 * float(_tilt_weight(np.float64(t))))
    s = t * t + cut * cut
    if n == 1:
        integral = (math.pi / 2 - math.atan(cut / t)) / t
        return 2 * math.sqrt(b) * integral
    # int_U^inf (t^2+u^2)^{-(n+1)/2} du <= int_U^inf (u/U) (t^2+u^2)^{-(n+1)/2} du
    log_val = 0.5 * n * math.log(b) - math.log((n - 1) * cut) - 0.5 * (n - 1) * math.log(s)
    return 2 * math.exp(log_val)


def parseval_tail(n: int, x: LevelLike, spec: QuadratureSpec = QuadratureSpec()) -> InversionResult:
    """Tail probability ``P(D_n/n >= x)`` by Fourier inversion, ``1/2 < x < 1``.

    Raises ConvergenceError when the quadrature budget is exhausted.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    xq = as_fraction(x)
    if not (HALF < xq < 1):
        raise DomainError(f"level must lie in (1/2, 1), got {x!r}")
    c, frac = ceil_level(n, xq)
    if c >= n:
        # S_n <= n almost surely, so the event is empty
        return InversionResult(0.0, 0.0, 0.0, 0.0, 0)
    rp = solve_saddlepoint(xq)
    t = rp.t_x
    log_pref = -n * rp.rate - frac * t - math.log(TWO_PI)
    cut = spec.truncation if spec.truncation is not None else default_truncation(t)

    def f(u):
        return parseval_integrand(u, n, t, c)

    # panels of about a quarter period of the phase e^{-icu}
    def panels(length):
        return max(8, math.ceil(length * max(c, 1) / (math.pi / 2)))

    core = integrate(f, 0.0, cut, spec, initial_panels=panels(cut))
    target = 0.25 * spec.rel_tol * abs(2 * core.value.real)
    upper = cut
    while _tail_bound(n, t, upper) > max(target, spec.abs_tol):
        upper *= 1.25
        if upper > 1e8:
            raise ConvergenceError("tail bound does not fall below tolerance")
    outer = integrate(f, cut, upper, spec, initial_panels=panels(upper - cut)) if upper > cut else None

    total = core.value + (outer.value if outer else 0j)
    quad_err = core.error + (outer.error if outer else 0.0)
    pref = math.exp(log_pref)
    return InversionResult(
        value=pref * 2 * total.real,
        truncation_error=pref * _tail_bound(n, t, upper),
        quadrature_error=pref * 2 * quad_err,
        cut=upper,
        panels=core.panels + (outer.panels if outer else 0),
    )


def _leading_scaled(v: np.ndarray, n: int, t: float) -> np.ndarray:
    """Leading term of ``m_n(t + iv)`` divided by ``((e^t - 1)/t)^n``."""
    w = t + 1j * v
    return (-cexpm1(-w) / w) * complex_pow(_ratio(v, t), n)


def fourier_pmf(
    n: int,
    k: int,
    t: float,
    spec: QuadratureSpec = QuadratureSpec(),
    eps: float | None = None,
) -> InversionResult:
    """``P(D_n = k)`` from ``e^{-tk}/(2 pi) int_{-pi}^{pi} m_n(t + iv) e^{-ikv} dv``.

    ``m_n`` is replaced by the leading term of its complex expansion on
    ``|v| < pi - eps`` (default ``eps = n^{-3/4}``); the band next to ``+-pi``
    is dropped. The returned ``truncation_error`` adds the integrated
    remainder envelope on the core and the integrated modulus bound on the
    band, so ``|value - P(D_n = k)| <= error_bar``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n - 1:
        raise DomainError(f"k must lie in 0..{n - 1}, got {k}")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    eps = n ** (-0.75) if eps is None else eps
    if not 0 < eps < math.pi:
        raise DomainError("band width must lie in (0, pi)")
    edge = math.pi - eps
    log_scale = n * cgf_L(t) - t * k - math.log(TWO_PI)

    def f(v):
        return _leading_scaled(v, n, t) * np.exp(-1j * k * v)

    def env(v):
        return np.abs(_leading_scaled(v, n, t)) * complex_envelope(n, t, v)

    def band(v):
        return np.array([math.exp(complex_modulus_bound(n, t, float(s)) - n * cgf_L(t)) for s in v])

    npan = max(8, math.ceil(2 * k + 8))
    core = integrate(f, 0.0, edge, spec, initial_panels=npan)
    # error-bar integrals only need a few digits
    loose = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-6, max_panels=spec.max_panels)
    env_int = integrate(env, 0.0, edge, loose, initial_panels=16)
    band_int = integrate(band, edge, math.pi, loose, initial_panels=4)

    scale = math.exp(log_scale)
    value = scale * 2 * core.value.real
    trunc = scale * 2 * (env_int.value.real * (1 + 1e-5) + band_int.value.real * (1 + 1e-5))
    quad = scale * 2 * (core.error + env_int.error + band_int.error)
    return InversionResult(value, trunc, quad, edge, core.panels + env_int.panels + band_int.panels)
