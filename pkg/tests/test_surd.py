from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from ramanujan3.bigreal import working
from ramanujan3.errors import DomainError, SurdSyntaxError
from ramanujan3.expr import Environment, surd_parse
from ramanujan3.surdform import LinearSurd, squarefree_decompose


@pytest.mark.parametrize("n, expected", [(1, (1, 1)), (12, (2, 3)), (72, (6, 2)), (1001, (1, 1001)),
                                         ((10**6 + 3) ** 2 * 7, (10**6 + 3, 7))])
def test_squarefree_decompose(n, expected):
    assert squarefree_decompose(n) == expected


@given(st.integers(min_value=1, max_value=10**9))
def test_squarefree_decompose_reconstructs(n):
    m, s = squarefree_decompose(n)
    assert m * m * s == n
    assert sympy.factorint(s) == {} or max(sympy.factorint(s).values()) == 1


def test_linear_surd_arithmetic():
    r3 = LinearSurd.sqrt_of(3)
    r11 = LinearSurd.sqrt_of(11)
    assert r3 * r3 == 3
    assert (r3 * r11).terms == {33: 1}
    assert LinearSurd.sqrt_of(Fraction(3, 4)).terms == {3: Fraction(1, 2)}
    assert LinearSurd.sqrt_of(50).terms == {2: 5}
    assert (r3 + 1) ** 2 == LinearSurd({1: 4, 3: 2})
    assert ((r3 - 1) / 2).to_text() == "(-1 + sqrt(3))/2"


def test_linear_surd_rejects_irrational_division():
    with pytest.raises(TypeError):
        LinearSurd.rational(1) / LinearSurd.sqrt_of(2)


surds = st.dictionaries(
    st.sampled_from([1, 2, 3, 5, 6, 11, 33, 57, 93]),
    st.fractions(min_value=-1000, max_value=1000, max_denominator=500),
    min_size=1,
    max_size=4,
).map(LinearSurd)


@given(surds)
def test_text_round_trip(s):
    assert surd_parse(s.to_text()).linear_surd() == s


@given(surds, surds)
def test_evaluation_is_a_ring_homomorphism(a, b):
    p = 200
    with working(p + 32) as ctx:
        lhs = ctx.mpf((a * b).evaluate(p).value)
        rhs = ctx.mpf(a.evaluate(p).value) * ctx.mpf(b.evaluate(p).value)
        scale = 1 + abs(ctx.mpf(a.evaluate(64).value)) * abs(ctx.mpf(b.evaluate(64).value))
        assert abs(lhs - rhs) <= ctx.mpf(2) ** (-p + 8) * scale


@pytest.mark.parametrize(
    "text, sym",
    [
        ("(155 - 27*sqrt(33))/128", (155 - 27 * sympy.sqrt(33)) / 128),
        ("cbrt(38 - 6*sqrt(33))", sympy.real_root(38 - 6 * sympy.sqrt(33), 3)),
        ("2^(4/3) - 2^(-1)", sympy.Integer(2) ** sympy.Rational(4, 3) - sympy.Rational(1, 2)),
        ("-(3 + 2)^2 * 0.25", sympy.Rational(-25, 4)),
        ("sqrt(2)^3", 2 * sympy.sqrt(2)),
        ("((sqrt(3) - 1)/sqrt(2))^3", ((sympy.sqrt(3) - 1) / sympy.sqrt(2)) ** 3),
    ],
)
def test_evaluation_against_sympy(text, sym):
    p = 512
    v = surd_parse(text).evaluate(p)
    expected = sympy.N(sym, 170)
    with working(p + 32) as ctx:
        assert abs(ctx.mpf(v.value) - ctx.mpf(str(expected))) < ctx.mpf(2) ** (-p + 8)


def test_references_resolve_through_the_environment():
    env = Environment({"s": surd_parse("sqrt(2)"), "t": surd_parse("s^2 + s")})
    expr = surd_parse("t - s")
    assert expr.names() == {"t", "s"}
    assert expr.evaluate(128, env).close_to(2, 120)


def test_unknown_reference():
    with pytest.raises(SurdSyntaxError, match="nope"):
        surd_parse("nope + 1").evaluate(128)


@pytest.mark.parametrize("bad", ["", "1 +", "sqrt(2", "2^x", "2^(1/0)", "3 $ 4", "(1))", "sqrt 2"])
def test_syntax_errors(bad):
    with pytest.raises(SurdSyntaxError):
        surd_parse(bad)


def test_negative_radicand():
    with pytest.raises(DomainError):
        surd_parse("sqrt(1 - 2)").evaluate(128)


def test_linear_surd_form_only_for_linear_expressions():
    assert surd_parse("(1 + sqrt(12))/2").linear_surd() == LinearSurd({1: Fraction(1, 2), 3: 1})
    assert surd_parse("cbrt(2)").linear_surd() is None
    assert surd_parse("sqrt(1 + sqrt(2))").linear_surd() is None
