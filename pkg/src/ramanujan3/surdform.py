"""Exact sums of rational multiples of square roots, ``sum q_i * sqrt(d_i)``.

These are the multi-quadratic numbers in which every quadratic-irrational
series coefficient of this package lives.  Arithmetic is exact (Fractions
and square-free integer radicands); division is only by rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

import gmpy2

from .bigreal import BigReal, to_mpf, working

TRIAL_DIVISION_BOUND = 10**6


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(m, s)`` with ``n = m*m*s`` and ``s`` square-free.

    Trial division up to 10**6, then the cofactor is accepted as
    square-free if it is 1, prime, below the bound squared, or not a
    perfect square.  A cofactor p**2 * q with p, q > 10**6 would be
    misclassified; radicands in this package are far below that.
    """
    if n <= 0:
        raise ValueError("radicand must be positive")
    m, s = 1, 1
    rest = n
    p = 2
    while p <= TRIAL_DIVISION_BOUND and p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        m *= p ** (e // 2)
        s *= p ** (e % 2)
        p += 1 if p == 2 else 2
    if rest > 1:
        if gmpy2.is_square(rest):
            m *= math.isqrt(rest)
        else:
            s *= rest
    return m, s


def _as_fraction(q) -> Fraction:
    return q if isinstance(q, Fraction) else Fraction(q)


class LinearSurd:
    """An exact element ``sum_d q_d * sqrt(d)`` keyed by square-free ``d``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for d, q in (terms or {}).items():
            q = _as_fraction(q)
            if q:
                clean[int(d)] = clean.get(int(d), Fraction(0)) + q
        self.terms = {d: q for d, q in sorted(clean.items()) if q}

    @classmethod
    def rational(cls, q) -> LinearSurd:
        return cls({1: q})

    @classmethod
    def sqrt_of(cls, q) -> LinearSurd:
        """Exact ``sqrt(q)`` for a nonnegative rational ``q``."""
        q = _as_fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls()
        # sqrt(a/b) = sqrt(a*b)/b
        m, s = squarefree_decompose(q.numerator * q.denominator)
        return cls({s: Fraction(m, q.denominator)})

    def is_rational(self) -> bool:
        return set(self.terms) <= {1}

    def rational_part(self) -> Fraction:
        return self.terms.get(1, Fraction(0))

    def __add__(self, other):
        other = _coerce(other)
        merged = dict(self.terms)
        for d, q in other.terms.items():
            merged[d] = merged.get(d, Fraction(0)) + q
        return LinearSurd(merged)

    __radd__ = __add__

    def __neg__(self):
        return LinearSurd({d: -q for d, q in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        for d1, q1 in self.terms.items():
            for d2, q2 in other.terms.items():
                g = math.gcd(d1, d2)
                # sqrt(d1) sqrt(d2) = g * sqrt(d1 d2 / g^2), and d1 d2 / g^2 is square-free
                d = (d1 // g) * (d2 // g)
                out[d] = out.get(d, Fraction(0)) + q1 * q2 * g
        return LinearSurd(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if not other.is_rational() or not other.terms:
            return NotImplemented
        q = other.rational_part()
        return LinearSurd({d: c / q for d, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = LinearSurd.rational(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        try:
            return self.terms == _coerce(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def evaluate(self, prec: int) -> BigReal:
        with working(prec + 32) as ctx:
            total = ctx.mpf(0)
            for d, q in self.terms.items():
                total += to_mpf(q, ctx) * ctx.sqrt(d)
            return BigReal(total, prec)

    def to_text(self) -> str:
        """Render over a common denominator, e.g. ``(155 - 27*sqrt(33))/128``."""
        if not self.terms:
            return "0"
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (q.denominator for q in self.terms.values()))
        pieces = []
        for d, q in self.terms.items():
            c = q.numerator * (den // q.denominator)
            body = str(abs(c)) if d == 1 else (f"sqrt({d})" if abs(c) == 1 else f"{abs(c)}*sqrt({d})")
            pieces.append(("-" if c < 0 else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        if den == 1:
            return text
        return f"({text})/{den}" if len(pieces) > 1 or pieces[0][0] == "-" else f"{text}/{den}"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LinearSurd({self.to_text()!r})"


def _coerce(x) -> LinearSurd:
    if isinstance(x, LinearSurd):
        return x
    if isinstance(x, (int, Fraction)):
        return LinearSurd.rational(x)
    raise TypeError(f"cannot combine LinearSurd with {type(x).__name__}")
