from fractions import Fraction

import mpmath
import pytest

from ramanujan3.bigreal import BigReal, min_precision, to_mpf, working
from ramanujan3.errors import DomainError


def test_precision_floor():
    with pytest.raises(DomainError):
        BigReal.of(1, 32)


def test_result_carries_minimum_precision():
    a = BigReal.of(Fraction(1, 3), 300)
    b = BigReal.of(Fraction(1, 7), 128)
    assert (a + b).precision_bits == 128
    assert (a * 3).precision_bits == 300
    assert min_precision(a, b, 5) == 128


def test_value_is_rounded_to_its_precision():
    third = BigReal.of(Fraction(1, 3), 64)
    with working(200) as ctx:
        err = abs(ctx.mpf(third.value) - ctx.mpf(1) / 3)
    assert 0 < err < mpmath.mpf(2) ** -64


def test_arithmetic_does_not_leak_global_precision():
    # the global mpmath precision must not influence BigReal arithmetic
    old = mpmath.mp.prec
    try:
        mpmath.mp.prec = 20
        x = BigReal.of(2, 256).sqrt()
        sq = x * x
        assert sq.close_to(2, 250)
    finally:
        mpmath.mp.prec = old


def test_decimal_strings_are_exact_rationals():
    v = BigReal.of("0.1", 256)
    with working(300) as ctx:
        assert abs(ctx.mpf(v.value) - to_mpf(Fraction(1, 10), ctx)) < mpmath.mpf(2) ** -256


def test_comparisons_and_decimal_output():
    a = BigReal.of(Fraction(1, 2), 128)
    assert a < 1 and a > 0 and a == Fraction(1, 2)
    assert a.to_decimal(5) == "0.5"
    assert BigReal.of(2, 128).sqrt().to_decimal(10) == "1.414213562"
