"""Ramanujan-type series evaluation with certified tail bounds.

A series of "level s" is ``sum_n t_n (a + b n)`` with

    t_n = (1/2)_n (1/s)_n (1 - 1/s)_n / (1)_n^3 * z^n,

generated by the exact ratio recurrence ``t_{n+1} / t_n = z rho_s(n)`` with
``rho_s(n) = (n + 1/2)(n + 1/s)(n + 1 - 1/s) / (n + 1)^3``.  Each factor
``(n + c)/(n + 1)`` with ``c < 1`` increases to 1, so ``|z|`` bounds every
ratio from n = 0 on and the geometric majorant below is rigorous.

The hypergeometric coefficient families are
``A_n`` (s = 2), ``B_n`` (s = 4), ``C_n`` (s = 6) and ``D_n`` (s = 3).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .bigreal import GUARD_BITS, BigReal, Number, eps, to_mpf, working
from .errors import DomainError, PrecisionLossError

S_VALUES = (2, 3, 4, 6)
LEVEL_OF_S = {2: 4, 3: 3, 4: 2, 6: 1}
FAMILY_S = {"A": 2, "B": 4, "C": 6, "D": 3}
MAX_TERMS = 2_000_000
GF_RADIUS = Fraction(9, 10)


def term_ratio(s: int, n: int) -> Fraction:
    """Exact rational factor t_{n+1} / (z t_n)."""
    inv = Fraction(1, s)
    return (n + Fraction(1, 2)) * (n + inv) * (n + 1 - inv) / Fraction(n + 1) ** 3


@dataclass(frozen=True)
class SeriesParams:
    """``normalization * sum t_n (a + b n)``; equals 1/pi for a valid series."""

    s: int
    z: BigReal
    a: BigReal
    b: BigReal
    normalization: BigReal | None = None
    label: str = ""

    def __post_init__(self):
        if self.s not in S_VALUES:
            raise DomainError(f"s must be one of {S_VALUES}, got {self.s}")

    @property
    def level(self) -> int:
        return LEVEL_OF_S[self.s]

    @property
    def precision_bits(self) -> int:
        values = [self.z, self.a, self.b] + ([self.normalization] if self.normalization else [])
        return min(v.precision_bits for v in values)

    def normalized(self) -> SeriesParams:
        """Fold the normalization into ``a`` and ``b``."""
        if self.normalization is None:
            return self
        c = self.normalization
        return replace(self, a=self.a * c, b=self.b * c, normalization=None)

    @classmethod
    def of(cls, s: int, z: Number, a: Number, b: Number, prec: int, normalization=None, label=""):
        c = None if normalization is None else BigReal.of(normalization, prec)
        return cls(s, BigReal.of(z, prec), BigReal.of(a, prec), BigReal.of(b, prec), c, label)


class TermGenerator:
    """Iterates t_0, t_1, ... of a level-s series by the ratio recurrence.

    Must be driven inside a ``working`` block; the terms are mpf values of
    that context.
    """

    def __init__(self, ctx, s: int, z):
        if s not in S_VALUES:
            raise DomainError(f"s must be one of {S_VALUES}, got {s}")
        self.ctx = ctx
        self.s = s
        self.z = ctx.mpf(z)
        self.n = 0
        self.term = ctx.mpf(1)
        inv = ctx.mpf(1) / s
        self._shifts = (ctx.mpf(1) / 2, inv, 1 - inv)

    def __iter__(self):
        return self

    def __next__(self):
        current = self.term
        n = self.n
        h, u, v = self._shifts
        self.term = current * self.z * ((n + h) * (n + u) * (n + v)) / (n + 1) ** 3
        self.n += 1
        return current


@dataclass(frozen=True)
class SeriesSum:
    value: BigReal
    tail_bound: BigReal
    terms: int


def _tail(ctx, t_abs, n, a_abs, b_abs, q):
    # sum_{m>=0} q^m (|a| + |b| (n + m)) |t_n|
    one_minus = 1 - q
    return t_abs * ((a_abs + b_abs * n) / one_minus + b_abs * q / one_minus**2)


def eval_series(params: SeriesParams, target_bits: int, extra_terms: int = 0) -> SeriesSum:
    """Sum the series until the geometric majorant drops below 2^-target_bits.

    ``tail_bound`` bounds |value - exact sum|: the truncated tail, the
    accumulated rounding error and the final rounding to the output
    precision (counted as a full ulp).  ``extra_terms`` forces additional terms past the
    stopping index (used to audit the bound).
    """
    prec = params.precision_bits
    wp = max(prec, target_bits) + GUARD_BITS + 24
    with working(wp) as ctx:
        z = to_mpf(params.z, ctx)
        q = abs(z)
        if q >= 1:
            raise DomainError(f"|z| = {ctx.nstr(q, 8)} >= 1: the series does not converge geometrically")
        a, b = to_mpf(params.a, ctx), to_mpf(params.b, ctx)
        c = to_mpf(params.normalization, ctx) if params.normalization is not None else ctx.mpf(1)
        a_abs, b_abs, c_abs = abs(a), abs(b), abs(c)
        goal = eps(target_bits)

        total = ctx.mpf(0)
        magnitude = ctx.mpf(0)
        gen = TermGenerator(ctx, params.s, z)
        stop_at = None
        for n, t in enumerate(gen):
            if n > MAX_TERMS:
                raise PrecisionLossError(f"more than {MAX_TERMS} terms required")
            if stop_at is None and c_abs * _tail(ctx, abs(t), n, a_abs, b_abs, q) < goal:
                stop_at = n + extra_terms
            if stop_at is not None and n >= stop_at:
                tail = c_abs * _tail(ctx, abs(t), n, a_abs, b_abs, q)
                break
            contribution = t * (a + b * n)
            total += contribution
            magnitude += abs(contribution)
        rounding = c_abs * magnitude * (n + 1) * eps(wp, 4)
        value = c * total
        output_ulp = abs(value) * eps(prec, 1)
        return SeriesSum(BigReal(value, prec), BigReal(tail + rounding + output_ulp, prec), n)


def pi_residual(params: SeriesParams, target_bits: int) -> tuple[BigReal, SeriesSum]:
    """``normalization * sum - 1/pi`` together with the summation record."""
    result = eval_series(params, target_bits)
    with working(max(params.precision_bits, target_bits) + GUARD_BITS) as ctx:
        residual = to_mpf(result.value, ctx) - 1 / ctx.pi
        return BigReal(residual, result.value.precision_bits), result


# ----------------------------------------------------------------------
# generating functions and transformation identities


def _gf(family: str, x: Number, prec: int | None, radius=GF_RADIUS) -> BigReal:
    x = BigReal.of(x, prec)
    if radius is not None and abs(x.value) >= radius.numerator / radius.denominator:
        raise DomainError(f"|x| must be below {radius} for direct summation")
    p = x.precision_bits
    params = SeriesParams(FAMILY_S[family], x, BigReal.of(1, p), BigReal.of(0, p))
    return eval_series(params, p + 16).value


def gf_A(x: Number, prec: int | None = None) -> BigReal:
    """sum A_n x^n with A_n = (1/2)_n^3 / n!^3."""
    return _gf("A", x, prec)


def gf_B(x: Number, prec: int | None = None) -> BigReal:
    """sum B_n x^n with B_n = (1/4)_n (1/2)_n (3/4)_n / n!^3."""
    return _gf("B", x, prec)


def gf_C(x: Number, prec: int | None = None) -> BigReal:
    """sum C_n x^n with C_n = (1/6)_n (1/2)_n (5/6)_n / n!^3."""
    return _gf("C", x, prec)


def gf_D(x: Number, prec: int | None = None) -> BigReal:
    """sum D_n x^n with D_n = (1/3)_n (1/2)_n (2/3)_n / n!^3."""
    return _gf("D", x, prec)


def _sum(family, ctx, x, p):
    return to_mpf(_gf(family, BigReal(x, p), None, radius=None), ctx)


def check_bailey_cubic(x: Number, prec: int | None = None) -> tuple[BigReal, BigReal | None]:
    """Residuals of the two cubic transformations between A_n and C_n.

    First:  sum A_n x^n = 2/sqrt(4-x) sum C_n (27 x^2/(4-x)^3)^n.
    Second: sum A_n x^n = 1/sqrt(1-4x) sum C_n (-27 x/(1-4x)^3)^n.

    The second right-hand side only converges for small x (roughly
    0 < x < 0.027); outside that range its residual is reported as None.
    """
    x = BigReal.of(x, prec)
    if not 0 < x < Fraction(1, 2):
        raise DomainError("x must lie in (0, 1/2)")
    p = x.precision_bits
    wp = p + GUARD_BITS
    with working(wp) as ctx:
        xv = to_mpf(x, ctx)
        lhs = _sum("A", ctx, xv, wp)
        first = 2 / ctx.sqrt(4 - xv) * _sum("C", ctx, 27 * xv**2 / (4 - xv) ** 3, wp)
        second = None
        w = -27 * xv / (1 - 4 * xv) ** 3
        if abs(w) < 1:
            rhs = 1 / ctx.sqrt(1 - 4 * xv) * _sum("C", ctx, w, wp)
            second = BigReal(abs(lhs - rhs), p)
        return BigReal(abs(lhs - first), p), second


def check_kummer_goursat(y: Number, prec: int | None = None) -> BigReal:
    """Residual of sum D_n (4y(1-y))^n = 3/sqrt(9-8y) sum C_n (64 y^3 (1-y)/(9-8y)^3)^n."""
    y = BigReal.of(y, prec)
    p = y.precision_bits
    wp = p + GUARD_BITS
    with working(wp) as ctx:
        yv = to_mpf(y, ctx)
        lhs = _sum("D", ctx, 4 * yv * (1 - yv), wp)
        rhs = 3 / ctx.sqrt(9 - 8 * yv) * _sum("C", ctx, 64 * yv**3 * (1 - yv) / (9 - 8 * yv) ** 3, wp)
        return BigReal(abs(lhs - rhs), p)
