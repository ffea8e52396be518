"""Precision-tagged real numbers on top of mpmath.

Kernels never touch ``mpmath.mp``. Each thread owns a private
``MPContext`` and every computation runs inside an explicit
``workprec`` block, so results depend only on (input, precision).
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import mpmath

from .errors import DomainError

MIN_PRECISION = 64
GUARD_BITS = 32

_local = threading.local()


def context() -> mpmath.ctx_mp.MPContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = mpmath.MPContext()
    return ctx


@contextmanager
def working(prec: int):
    """Yield the thread-local context set to ``prec`` bits."""
    ctx = context()
    with ctx.workprec(int(prec)):
        yield ctx


def to_mpf(x, ctx=None):
    """Convert ints, Fractions, decimal strings, floats, mpf or BigReal."""
    ctx = ctx or context()
    if isinstance(x, BigReal):
        return ctx.mpf(x.value)
    if isinstance(x, bool):
        raise TypeError("bool is not a real number")
    if isinstance(x, int):
        return ctx.mpf(x)
    if isinstance(x, Rational):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return to_mpf(Fraction(x.strip()), ctx)
    return ctx.mpf(x)


def eps(prec: int, slack: int = 0):
    """The tolerance 2^(-prec + slack) as an mpf."""
    return mpmath.mpf(2) ** (slack - int(prec))


Number = Union["BigReal", int, Fraction, str, float]


@dataclass(frozen=True)
class BigReal:
    """A real value together with the precision (in bits) it is good to."""

    value: object
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION:
            raise DomainError(
                f"precision_bits must be >= {MIN_PRECISION}, got {self.precision_bits}"
            )
        # round to our precision, then wrap losslessly as a global-context mpf
        # so that user-side arithmetic follows the usual mpmath.mp semantics
        with working(self.precision_bits) as ctx:
            rounded = +to_mpf(self.value, ctx)
        object.__setattr__(self, "value", mpmath.mp.make_mpf(rounded._mpf_))

    @classmethod
    def of(cls, x: Number, prec: int | None = None) -> BigReal:
        if isinstance(x, BigReal):
            return x if prec is None else cls(x.value, prec)
        if prec is None:
            raise TypeError("a precision is required to tag an untagged number")
        with working(prec + GUARD_BITS) as ctx:
            return cls(to_mpf(x, ctx), prec)

    def with_precision(self, prec: int) -> BigReal:
        return BigReal(self.value, prec)

    # ------------------------------------------------------------------
    # arithmetic: result precision is the minimum of the operands'

    def _binary(self, other, op):
        if isinstance(other, BigReal):
            prec = min(self.precision_bits, other.precision_bits)
        elif isinstance(other, (int, Fraction, str)):
            prec = self.precision_bits
        else:
            return NotImplemented
        with working(prec) as ctx:
            return BigReal(op(ctx.mpf(self.value), to_mpf(other, ctx)), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: b * a)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __pow__(self, n):
        if isinstance(n, BigReal):
            return self._binary(n, lambda a, b: a**b)
        return self._binary(Fraction(n), lambda a, b: a**b)

    def __neg__(self):
        return BigReal(-self.value, self.precision_bits)

    def __abs__(self):
        return BigReal(abs(self.value), self.precision_bits)

    def sqrt(self) -> BigReal:
        if self.value < 0:
            raise DomainError("square root of a negative number")
        with working(self.precision_bits) as ctx:
            return BigReal(ctx.sqrt(self.value), self.precision_bits)

    # ------------------------------------------------------------------
    # comparisons and conversions

    def _cmp_value(self, other):
        if isinstance(other, BigReal):
            return other.value
        with working(self.precision_bits + GUARD_BITS) as ctx:
            return to_mpf(other, ctx)

    def __eq__(self, other):
        if not isinstance(other, (BigReal, int, Fraction)):
            return NotImplemented
        return self.value == self._cmp_value(other)

    def __hash__(self):
        return hash((self.value, self.precision_bits))

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __float__(self):
        return float(self.value)

    def __bool__(self):
        return bool(self.value)

    @property
    def digits(self) -> int:
        """Number of significant decimal digits carried."""
        return max(1, int(self.precision_bits * math.log10(2)))

    def to_decimal(self, digits: int | None = None) -> str:
        digits = digits or self.digits
        with working(self.precision_bits + 8):
            return mpmath.nstr(self.value, digits)

    def __str__(self):
        return self.to_decimal()

    def __repr__(self):
        return f"BigReal({mpmath.nstr(self.value, 20)}, precision_bits={self.precision_bits})"

    def close_to(self, other: Number, bits: int) -> bool:
        """True when |self - other| < 2^(-bits)."""
        with working(max(self.precision_bits, bits) + GUARD_BITS) as ctx:
            return abs(ctx.mpf(self.value) - to_mpf(other, ctx)) < eps(bits)


def min_precision(*values) -> int:
    precs = [v.precision_bits for v in values if isinstance(v, BigReal)]
    if not precs:
        raise TypeError("at least one BigReal is required")
    return min(precs)
