import math
from decimal import Decimal
from fractions import Fraction

import pytest

from descent_tails._util import DomainError, LogValue, as_fraction, ceil_level, from_log, log_fraction, round_up


@pytest.mark.parametrize(
    "x, expected",
    [
        ("0.7", Fraction(7, 10)),
        (Decimal("0.55"), Fraction(11, 20)),
        (Fraction(2, 3), Fraction(2, 3)),
        (1, Fraction(1)),
        (0.5, Fraction(1, 2)),
    ],
)
def test_as_fraction_exact(x, expected):
    assert as_fraction(x) == expected


def test_float_levels_use_binary64_value():
    assert as_fraction(0.7) == Fraction(0.7)
    assert as_fraction(0.7) != Fraction(7, 10)


def test_nonfinite_level_rejected():
    with pytest.raises(DomainError):
        as_fraction(float("nan"))


@pytest.mark.parametrize(
    "n, x, c, frac",
    [
        (10, "0.7", 7, 0.0),
        (3, Fraction(2, 3), 2, 0.0),
        (3, "0.7", 3, 0.9),
        (2, "0.51", 2, 0.98),
    ],
)
def test_ceil_level_convention(n, x, c, frac):
    got_c, got_frac = ceil_level(n, x)
    assert got_c == c
    assert got_frac == pytest.approx(frac, abs=1e-15)


def test_ceil_level_float_off_lattice():
    # 10 * binary64(0.7) is just below 7 in exact arithmetic
    c, frac = ceil_level(10, 0.7)
    assert Fraction(0.7) * 10 < 7
    assert c == 7 and 0 < frac < 1e-14


def test_log_helpers():
    assert log_fraction(Fraction(0)) == -math.inf
    assert log_fraction(Fraction(1, 3628800)) == pytest.approx(-math.log(3628800))
    big = Fraction(1, 10**400)
    assert log_fraction(big) == pytest.approx(-400 * math.log(10))
    assert from_log(1000.0) == math.inf
    assert float(LogValue(0.0)) == 1.0


def test_round_up_never_below():
    for f in (Fraction(1, 3), Fraction(2, 7), Fraction(10**20 + 1, 10**20)):
        assert Fraction(round_up(f)) >= f
