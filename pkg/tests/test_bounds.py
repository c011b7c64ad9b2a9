import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from descent_tails._util import DomainError, log_fraction, round_up
from descent_tails.bounds import (
    azuma_bound,
    azuma_s,
    bound_report,
    chernoff_bound,
    cid_bound,
    cid_prefactor,
    left_tail_transfer,
    qn_bound,
    qn_prefactor,
    sharp_tail_approx,
    sharpness_crossover,
    to_prob,
)
from descent_tails.cgf import _tilt_weight, solve_saddlepoint
from descent_tails.exact import exact_tail

X_GRID = [Fraction(k, 20) for k in range(11, 20)]


def _exact_below(exact: Fraction, log_bound: float) -> bool:
    """exact <= exp(log_bound), comparing the rational rounded up."""
    if exact == 0:
        return True
    up = round_up(exact)
    if up > 0:
        return math.log(up) <= log_bound
    return log_fraction(exact) <= log_bound


def test_bound_validity_grid():
    for n in range(3, 61):
        for x in X_GRID:
            rep = bound_report(n, x)
            for name, lb in rep.bounds().items():
                assert _exact_below(rep.exact, lb), (n, x, name)


@pytest.mark.parametrize("n, x", [(30, "0.7"), (60, "0.95"), (1, "0.75"), (2, "0.6")])
def test_bound_examples(n, x):
    e = exact_tail(n, x)
    assert _exact_below(e, cid_bound(n, x))
    assert _exact_below(e, chernoff_bound(n, x))
    if n > 2:
        assert _exact_below(e, qn_bound(n, x))
    if n >= 2:
        assert _exact_below(e, azuma_bound(n, x))


def test_azuma_values():
    assert azuma_s(10) == 384
    # exp(-1250/384) = 0.0385729...
    assert to_prob(azuma_bound(10, "0.75")) == pytest.approx(math.exp(-1250 / 384), rel=1e-15)
    assert to_prob(azuma_bound(10, "0.75")) == pytest.approx(0.038573, abs=5e-7)
    with pytest.raises(DomainError):
        azuma_bound(1, "0.7")


def test_cid_prefactor_shape():
    assert 1 < cid_prefactor("0.9") < math.inf
    near = [cid_prefactor(Fraction(1, 2) + Fraction(1, 10**k)) for k in (2, 4, 6)]
    assert near[0] < near[1] < near[2]
    t = solve_saddlepoint("0.7").t_x
    pi2 = math.pi**2
    hand = math.sqrt((t * t + pi2) / (t * t)) + (
        1 + 1 / math.pi + 2 * math.sqrt(t * t + pi2) / (pi2 - 4)
    ) * math.sqrt(pi2 * (t * t + 4) / 4)
    assert cid_prefactor("0.7") == pytest.approx(hand, rel=1e-14)


def test_qn_limit_and_domain():
    t = solve_saddlepoint("0.7").t_x
    limit = math.sqrt(2 + 8 * float(_tilt_weight(t)))
    assert qn_prefactor(200, "0.7") == pytest.approx(limit, rel=1e-12)
    assert qn_prefactor(5, "0.7") > limit
    with pytest.raises(DomainError):
        qn_bound(2, "0.7")
    # same exponential factor; the prefactors differ by about 19 at (10, 0.8)
    ratio = math.exp(cid_bound(10, "0.8") - qn_bound(10, "0.8"))
    assert ratio == pytest.approx(cid_prefactor("0.8") / qn_prefactor(10, "0.8"), rel=1e-12)
    assert ratio == pytest.approx(19.19, abs=0.01)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=5000), st.fractions(min_value=Fraction(51, 100), max_value=Fraction(99, 100)))
def test_chernoff_identity(n, x):
    rp = solve_saddlepoint(x)
    lhs = chernoff_bound(n, x)
    rhs = cid_bound(n, x) - math.log(cid_prefactor(x)) + math.log(rp.sigma * rp.t_x * math.sqrt(2 * math.pi * n))
    assert lhs == pytest.approx(rhs, abs=1e-9 * max(1.0, abs(lhs)))


def test_sharp_at_lattice_point():
    n, x = 10, Fraction(7, 10)
    rp = solve_saddlepoint(x)
    expect = -n * rp.rate - math.log(rp.sigma * rp.t_x * math.sqrt(2 * math.pi * n))
    assert sharp_tail_approx(n, x) == pytest.approx(expect, abs=1e-13)


RATIOS = {
    "0.6": [0.885, 0.934, 0.964, 0.981, 0.990],
    "0.7": [0.967, 0.983, 0.991, 0.9955, 0.9977],
    "0.8": [0.988, 0.994, 0.997, 0.9985, 0.9992],
}


@pytest.mark.parametrize("x", sorted(RATIOS))
def test_ratio_curve(x):
    ns = [50, 100, 200, 400, 800]
    ratios = [math.exp(log_fraction(exact_tail(n, x)) - sharp_tail_approx(n, x)) for n in ns]
    assert ratios == pytest.approx(RATIOS[x], abs=6e-4)
    gaps = [abs(r - 1) for r in ratios]
    assert gaps[-1] == min(gaps)
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_ratio_examples():
    r100 = math.exp(log_fraction(exact_tail(100, "0.7")) - sharp_tail_approx(100, "0.7"))
    assert 0.8 < r100 < 1.2


# smallest n0 with cid below the competitor for all n0 <= n <= 10^4
CROSSOVERS = {
    "0.55": (931, 821),
    "0.6": (191, 131),
    "0.65": (107, 41),
    "0.7": (93, 21),
    "0.75": (106, 13),
    "0.8": (154, 6),
    "0.85": (305, 1),
    "0.9": (1006, 1),
    "0.95": (None, 1),
}


@pytest.mark.parametrize("x", sorted(CROSSOVERS))
def test_sharpness_crossover_pinned(x):
    assert (sharpness_crossover(x, "chernoff"), sharpness_crossover(x, "azuma")) == CROSSOVERS[x]


def test_crossover_x095_beyond_1e4():
    # the CID bound overtakes Chernoff at 0.95 only past n = 10^4
    n0 = sharpness_crossover("0.95", "chernoff", n_max=20_000)
    assert 10_000 < n0 < 11_000
    assert cid_bound(10_000, "0.7") < chernoff_bound(10_000, "0.7")


def test_left_tail_symmetry():
    for n in range(2, 51):
        for m in range(n):
            y = Fraction(m, n) + Fraction(1, 2 * n)
            if not 0 < y < Fraction(1, 2):
                continue
            rep = left_tail_transfer(n, y)
            assert rep.exact == exact_tail(n, Fraction(n - 1 - m, n))


def test_left_tail_bound_example():
    rep = left_tail_transfer(40, "0.3")
    assert rep.x == 1 - Fraction(3, 10) - Fraction(1, 40)
    assert _exact_below(rep.exact, rep.cid)
    for name, lb in rep.bounds().items():
        assert _exact_below(rep.exact, lb), name


def test_left_tail_degenerate_branches():
    # m = n - 1 only happens for n = 1
    rep = left_tail_transfer(1, "0.3")
    assert rep.exact == 1 and rep.cid == 0.0
    rep = left_tail_transfer(2, "0.49")
    assert rep.exact == Fraction(1, 2) and rep.cid is None
    rep = left_tail_transfer(10, "0.45")
    assert rep.sharp is None and rep.exact is not None


def test_domain_errors():
    for bad in ("0.5", "1", "0.3"):
        with pytest.raises(DomainError):
            bound_report(10, bad)
    with pytest.raises(DomainError):
        left_tail_transfer(10, "0.5")
