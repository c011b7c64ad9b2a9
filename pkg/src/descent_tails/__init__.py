"""Exact, asymptotic and bounded tail probabilities for the number of descents
``D_n`` of a uniform random permutation of ``n`` elements."""

from ._util import CapExceededError, ConvergenceError, DomainError, LogValue
from .bounds import (
    BoundReport,
    azuma_bound,
    bound_report,
    chernoff_bound,
    cid_bound,
    cid_prefactor,
    left_tail_transfer,
    qn_bound,
    qn_prefactor,
    sharp_tail_approx,
    sharpness_crossover,
)
from .cgf import RatePoint, cgf_L, cgf_L1, cgf_L2, complex_L, rate_function, solve_saddlepoint
from .exact import (
    ExactDistribution,
    eulerian_distribution,
    exact_laplace,
    exact_left_tail,
    exact_log_laplace,
    exact_pmf,
    exact_tail,
    irwin_hall_cdf,
    irwin_hall_interval,
)
from .inversion import InversionResult, fourier_pmf, parseval_tail
from .laplace import (
    LaplaceEstimate,
    complex_envelope,
    complex_leading_and_envelope,
    complex_modulus_bound,
    complex_remainder,
    laplace_estimate,
    leading_term,
    remainder_envelope_real,
)
from .quadrature import QuadratureSpec, integrate
from .simulate import (
    DescentPath,
    SimulationSummary,
    martingale_stats,
    run_summary,
    sample_endpoints,
    sample_path,
    sample_paths,
)

__version__ = "0.1.0"
