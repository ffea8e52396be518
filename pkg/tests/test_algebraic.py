"""Integer-relation identification and vanishing certificates."""

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ramanujan3.algebraic import (
    certify_vanishing,
    identify,
    identify_decimal,
    lll,
    poly_text,
    surd_of_quadratic,
)
from ramanujan3.bigreal import BigReal, working
from ramanujan3.builder import build_series
from ramanujan3.errors import DomainError, PrecisionLossError
from ramanujan3.expr import surd_parse
from ramanujan3.surdform import LinearSurd


def value(text, prec):
    return surd_parse(text).evaluate(prec)


def test_lll_reduces_a_textbook_basis():
    reduced = lll([[1, 1, 1], [-1, 0, 2], [3, 5, 6]])
    assert sorted(map(tuple, reduced)) == sorted([(0, 1, 0), (1, 0, 1), (-1, 0, 2)])


def test_lll_preserves_the_lattice():
    rng = random.Random(7)
    basis = [[rng.randrange(-50, 50) for _ in range(5)] for _ in range(5)]
    reduced = lll(basis)
    B, R = sympy.Matrix(basis), sympy.Matrix(reduced)
    assert abs(B.det()) == abs(R.det()) != 0
    # each reduced vector is an integer combination of the original basis
    coeffs = R * B.inv()
    assert all(c.is_integer for c in coeffs)


def test_lll_rejects_dependent_rows():
    with pytest.raises(DomainError):
        lll([[1, 2], [2, 4]])


def test_identify_sqrt2():
    found = identify(BigReal.of(2, 256).sqrt(), 2, 32)
    assert found.min_poly == (1, 0, -2)
    assert found.poly_text() == "y^2 - 2"
    assert found.surd_form == LinearSurd.sqrt_of(2)
    assert found.certificate == "numeric-heuristic"


def test_identify_y99():
    v = value("(155 - 27*sqrt(33))/128", 512)
    found = identify(v, 2, 64)
    assert found.min_poly == (512, -1240, -1)
    assert str(found.surd_form) == "(155 - 27*sqrt(33))/128"


def test_identify_z57_from_the_derivation():
    rec = build_series(57, 512)
    found = identify(rec.z, 2, 96, recompute=lambda q: build_series(57, q).z)
    assert str(found.surd_form) == "(-17044 - 3913*sqrt(19))/843750"


def test_identify_rational_and_degree_order():
    found = identify(BigReal.of(Fraction(-3, 7), 256), 4, 16)
    assert found.min_poly == (7, 3)
    assert found.surd_form == LinearSurd.rational(Fraction(-3, 7))


def test_identify_returns_none_without_relation():
    with working(450) as ctx:
        pi = BigReal(ctx.pi, 400)
    assert identify(pi, 3, 40) is None


def test_identify_precision_guard():
    with pytest.raises(PrecisionLossError):
        identify(BigReal.of(2, 128).sqrt(), 4, 64)


def test_identify_rejects_relation_that_fails_at_double_precision():
    # a value that agrees with sqrt(2) to 300 bits but is not sqrt(2)
    def fake(q):
        with working(q + 32) as ctx:
            return BigReal(ctx.sqrt(2) + ctx.mpf(2) ** -300, q)

    assert identify(fake(256), 2, 32) is not None
    assert identify(fake(256), 2, 32, recompute=fake) is None


def test_cube_root_of_two_is_degree_three():
    v = value("cbrt(2)", 400)
    assert identify(v, 2, 64) is None
    assert identify(v, 3, 64).min_poly == (1, 0, 0, -2)


@pytest.mark.parametrize("text", ["(1 + sqrt(5))/2", "sqrt(2) + sqrt(3)", "cbrt(2) - 1", "(3 - sqrt(7))/11"])
def test_identify_matches_sympy_minimal_polynomial(text):
    found = identify(value(text, 800), 4, 48)
    y = sympy.Symbol("y")
    expected = sympy.Poly(sympy.minimal_polynomial(sympy.sympify(text), y), y)
    coeffs = tuple(int(c) for c in expected.all_coeffs())
    assert found.min_poly == coeffs


def test_isolating_radius_and_surd_form_agree_with_approx():
    found = identify(value("(5719 + 13*sqrt(19))/2250", 512), 2, 64)
    image = found.surd_form.evaluate(512)
    with working(600) as ctx:
        assert abs(ctx.mpf(image.value) - ctx.mpf(found.approx.value)) < ctx.mpf(found.isolating_radius.value)
    assert abs(found.residual().value) < 2**-256


polys = st.tuples(
    st.integers(min_value=1, max_value=40), st.integers(min_value=-40, max_value=40), st.integers(min_value=-40, max_value=40)
).filter(lambda t: t[1] * t[1] - 4 * t[0] * t[2] > 0 and not sympy.sqrt(t[1] * t[1] - 4 * t[0] * t[2]).is_Integer)


@given(polys)
def test_identify_is_idempotent_on_quadratic_roots(poly):
    lo, hi = surd_of_quadratic(poly)
    for root in (lo, hi):
        found = identify(root.evaluate(400), 4, 32)
        g = sympy.gcd_list(list(poly))
        expected = tuple(int(c // g) for c in poly)
        assert found.min_poly == expected
        assert found.surd_form == root


def test_surd_of_quadratic_examples():
    lo, hi = surd_of_quadratic((512, -1240, -1))
    assert str(lo) == "(155 - 27*sqrt(33))/128"
    assert str(hi) == "(155 + 27*sqrt(33))/128"
    lo, hi = surd_of_quadratic((1, 0, -2))
    assert lo == -LinearSurd.sqrt_of(2) and hi == LinearSurd.sqrt_of(2)
    with pytest.raises(DomainError):
        surd_of_quadratic((1, 0, 2))


def test_surd_of_quadratic_z93_branch():
    z93 = value("(-1368394 - 245791*sqrt(31))/615093750", 768)
    found = identify(z93, 2, 160)
    assert str(found.surd_form) == "(-1368394 - 245791*sqrt(31))/615093750"
    assert found.surd_form in surd_of_quadratic(found.min_poly)


def test_poly_text():
    assert poly_text((8, 0, 0, 4, 0, 0, 6, 0, 0, -1), "t") == "8*t^9 + 4*t^6 + 6*t^3 - 1"
    assert poly_text((-1, 1)) == "-y + 1"


# ----------------------------------------------------------------------
# vanishing certificates


def test_certify_z99_vanishes():
    def defect(q):
        rec = build_series(99, q)
        with working(q + 32) as ctx:
            y = ctx.mpf(rec.y.value)
            return BigReal(4 * y * (1 - y) - ctx.mpf(value("(2457*sqrt(33) - 14121)/2048", q).value), q)

    assert certify_vanishing(defect, 256)


def test_certify_a99_vanishes():
    samples = []
    for q in (256, 384, 512):
        a = build_series(99, q).a
        samples.append(BigReal(a.value - value("(75*sqrt(3) - 33*sqrt(11))/64", q).value, q))
    assert certify_vanishing(samples)


def test_certify_rejects_a_small_constant():
    assert not certify_vanishing(BigReal.of("1e-20", 256))
    assert not certify_vanishing("1e-20", 256)
    assert certify_vanishing(0, 256)


def test_certify_rejects_value_that_stalls():
    def stalls(q):
        return BigReal.of(Fraction(1, 2**300), q)

    assert certify_vanishing(stalls, 200) is False


def test_identify_decimal():
    found = identify_decimal("1.4142135623730950488016887242096980785696718753769480731766797379907324784621", 2)
    assert found.min_poly == (1, 0, -2)
    with pytest.raises(PrecisionLossError):
        identify_decimal("1.41421356", 4)


# ----------------------------------------------------------------------
# field consistency of the derived coefficients


def degree_of(v, max_degree, bits):
    found = identify(v, max_degree, bits)
    return None if found is None else found.degree


@pytest.mark.parametrize("r", [57, 93])
def test_quadratic_fields(r):
    rec = build_series(r, 768)
    for name in ("z", "a", "b"):
        assert degree_of(getattr(rec, name), 2, 160) == 2, name


def test_r99_field_degrees():
    rec = build_series(99, 768)
    assert degree_of(rec.y, 2, 64) == 2
    assert degree_of(rec.z, 2, 64) == 2
    # a and b involve sqrt(3) and sqrt(11) separately: degree 4, not 2
    for name in ("a", "b"):
        assert degree_of(getattr(rec, name), 2, 64) is None
        assert degree_of(getattr(rec, name), 4, 64) == 4


def test_r30_quartic_field():
    rec = build_series(30, 1024)
    for name in ("z", "a", "b"):
        assert degree_of(getattr(rec, name), 4, 160) == 4, name
