"""Series engine: term recurrence, tail certificates and the classical
hypergeometric identities."""

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramanujan3.bigreal import BigReal, working
from ramanujan3.builder import build_series
from ramanujan3.catalog import builtin
from ramanujan3.errors import DomainError
from ramanujan3.series import (
    SeriesParams,
    TermGenerator,
    check_bailey_cubic,
    check_kummer_goursat,
    eval_series,
    gf_A,
    gf_B,
    gf_C,
    gf_D,
    pi_residual,
    term_ratio,
)

P = 256


def mp(v, ctx):
    return ctx.mpf(v.value)


def test_term_ratio_is_exact():
    assert term_ratio(3, 0) == Fraction(1, 2) * Fraction(1, 3) * Fraction(2, 3)
    assert term_ratio(2, 1) == Fraction(27, 64)


@pytest.mark.parametrize("s", [2, 3, 4, 6])
def test_terms_match_pochhammer_products(s):
    with working(200) as ctx:
        z = ctx.mpf("-0.3")
        gen = TermGenerator(ctx, s, z)
        for n, t in zip(range(25), gen):
            direct = (ctx.rf(ctx.mpf(1) / 2, n) * ctx.rf(ctx.mpf(1) / s, n) * ctx.rf(1 - ctx.mpf(1) / s, n)
                      / ctx.factorial(n) ** 3 * z**n)
            assert abs(t - direct) <= ctx.mpf(2) ** -190 * abs(direct)


@pytest.mark.parametrize("family, s", [("A", 2), ("B", 4), ("C", 6), ("D", 3)])
def test_generating_functions_match_hyp3f2(family, s):
    gf = {"A": gf_A, "B": gf_B, "C": gf_C, "D": gf_D}[family]
    x = Fraction(-37, 100)
    v = gf(x, P)
    with working(P + 32) as ctx:
        third = ctx.mpf(1) / s
        oracle = ctx.hyp3f2(ctx.mpf(1) / 2, third, 1 - third, 1, 1, ctx.mpf(x.numerator) / x.denominator)
        assert abs(mp(v, ctx) - oracle) < ctx.mpf(2) ** (-P + 16)


def test_gf_at_zero():
    assert gf_A(0, P) == 1


def test_gf_domain():
    with pytest.raises(DomainError):
        gf_C("0.95", P)


def test_z_zero_gives_a():
    params = SeriesParams.of(3, 0, Fraction(2, 7), 5, P)
    result = eval_series(params, P)
    assert result.value == BigReal.of(Fraction(2, 7), P)
    assert result.terms == 1


def test_divergent_series_rejected():
    with pytest.raises(DomainError):
        eval_series(SeriesParams.of(3, "-1", 1, 1, P), P)


def test_gf_a_against_elliptic_integral():
    x = Fraction(3, 10)
    with working(P + 32) as ctx:
        xv = ctx.mpf(x.numerator) / x.denominator
        k2 = (1 - ctx.sqrt(1 - xv)) / 2
        rhs = 4 * ctx.ellipk(k2) ** 2 / ctx.pi**2
        assert abs(mp(gf_A(x, P), ctx) - rhs) < ctx.mpf(2) ** (-P + 16)


def b_generating_rhs(ctx, x):
    k = ctx.sqrt(ctx.mpf(1) / 2 - ctx.sqrt((1 - ctx.sqrt(1 - x)) / x) / ctx.sqrt(2))
    K = ctx.ellipk(k * k)
    return 4 * ctx.sqrt(2) * K**2 / (ctx.pi**2 * ctx.root(2 * ctx.sqrt(1 - x) + 2 - x, 4))


def test_gf_b_closed_form():
    with working(P + 32) as ctx:
        rhs = b_generating_rhs(ctx, ctx.mpf("0.2"))
        assert abs(mp(gf_B("0.2", P), ctx) - rhs) < ctx.mpf(2) ** (-P + 16)


def test_51n_plus_7_series_sums_to_inverse_pi():
    residual, _ = pi_residual(builtin().series_params("eq4.2", P), P)
    assert abs(residual.value) < mpmath.mpf(2) ** (-P + 32)


def test_r99_series_reaches_200_bits():
    rec = build_series(99, P)
    residual, _ = pi_residual(rec.series, P)
    assert abs(residual.value) < mpmath.mpf(2) ** -200


@pytest.mark.parametrize("entry_id", [e.id for e in builtin().series() if not e.is_placeholder])
def test_tail_certificate_with_fifty_more_terms(entry_id):
    params = builtin().series_params(entry_id, P)
    base = eval_series(params, P)
    longer = eval_series(params, P, extra_terms=50)
    assert longer.terms == base.terms + 50
    with working(P + 64) as ctx:
        assert abs(mp(longer.value, ctx) - mp(base.value, ctx)) <= mp(base.tail_bound, ctx)


def test_tail_bound_is_not_vacuous():
    params = builtin().series_params("eq4.1", P)
    result = eval_series(params, P)
    assert result.tail_bound.value < mpmath.mpf(2) ** (-P + 2)


# ----------------------------------------------------------------------
# transformation identities


def test_bailey_cubic_at_zero_limit():
    first, second = check_bailey_cubic(Fraction(1, 10**30), P)
    assert first.value < mpmath.mpf(2) ** (-P + 24)
    assert second.value < mpmath.mpf(2) ** (-P + 24)


def test_bailey_cubic_first_at_point_one():
    first, second = check_bailey_cubic("0.1", P)
    assert first.value < mpmath.mpf(2) ** (-P + 24)
    # 27 x / (1 - 4x)^3 exceeds 1 here, so the second form has no convergent right side
    assert second is None


def test_bailey_second_form_where_it_converges():
    first, second = check_bailey_cubic("0.02", P)
    assert first.value < mpmath.mpf(2) ** (-P + 24)
    assert second.value < mpmath.mpf(2) ** (-P + 24)


def test_bailey_second_form_diverges_at_five_hundredths():
    _, second = check_bailey_cubic("0.05", P)
    assert second is None
    with working(64) as ctx:
        x = ctx.mpf("0.05")
        assert abs(27 * x / (1 - 4 * x) ** 3) > 1


def test_bailey_domain():
    with pytest.raises(DomainError):
        check_bailey_cubic("0.6", P)


@pytest.mark.parametrize("y", ["0", "-0.1", "0.1", "-0.19"])
def test_kummer_goursat(y):
    assert check_kummer_goursat(y, P).value < mpmath.mpf(2) ** (-P + 24)


SAMPLE = random.Random(20260316)


@pytest.mark.parametrize("prec", [256, 1024])
def test_identities_on_random_grid(prec):
    tol = mpmath.mpf(2) ** (-prec + 24)
    for _ in range(20):
        x = Fraction(SAMPLE.randrange(1, 4900), 10000)
        first, _ = check_bailey_cubic(x, prec)
        assert first.value < tol, x
        x2 = Fraction(SAMPLE.randrange(1, 260), 10000)
        _, second = check_bailey_cubic(x2, prec)
        assert second is not None and second.value < tol, x2
        y = Fraction(SAMPLE.randrange(-1900, 1900), 10000)
        assert check_kummer_goursat(y, prec).value < tol, y
        u = Fraction(SAMPLE.randrange(1, 8500), 10000)
        with working(prec + 32) as ctx:
            uv = ctx.mpf(u.numerator) / u.denominator
            k2 = (1 - ctx.sqrt(1 - uv)) / 2
            assert abs(mp(gf_A(u, prec), ctx) - 4 * ctx.ellipk(k2) ** 2 / ctx.pi**2) < tol
            assert abs(mp(gf_B(u, prec), ctx) - b_generating_rhs(ctx, uv)) < tol


@given(st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=1000))
def test_gf_d_matches_hypergeometric_oracle(x):
    v = gf_D(x, 128)
    with working(160) as ctx:
        xv = ctx.mpf(x.numerator) / x.denominator
        oracle = ctx.hyp3f2(ctx.mpf(1) / 2, ctx.mpf(1) / 3, ctx.mpf(2) / 3, 1, 1, xv)
        assert abs(mp(v, ctx) - oracle) < ctx.mpf(2) ** -110


@pytest.mark.parametrize("r", [57, 93, 99, 30])
def test_d_series_equals_squared_complete_integral(r):
    rec = build_series(r, P)
    value = gf_D(rec.z, P)
    with working(P + 32) as ctx:
        x, y = mp(rec.x, ctx), mp(rec.y, ctx)
        K = ctx.ellipk(mp(rec.k.k, ctx) ** 2)
        rhs = 12 * ctx.sqrt(1 - 4 * x) / ctx.sqrt(9 - 8 * y) * K**2 / ctx.pi**2
        assert abs(mp(value, ctx) - rhs) < ctx.mpf(2) ** (-P + 24)
