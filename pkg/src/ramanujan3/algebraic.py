"""Integer-relation search and numeric vanishing certificates.

``identify`` looks for the minimal integer polynomial of a real number
with an exact-integer LLL reduction of the lattice spanned by

    e_i  (+)  round(2^S * v^i),   i = 0..d,

trying degrees in increasing order so that the first relation found is
of minimal degree.  The result is a heuristic identification: it is
checked at higher precision but is not a proof.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .bigreal import GUARD_BITS, BigReal, eps, to_mpf, working
from .errors import DomainError, PrecisionLossError
from .surdform import LinearSurd, squarefree_decompose

CERTIFY_STEPS = (0, 128, 256)
CERTIFY_SLACK = 48
PRECISION_MARGIN = 128


@dataclass(frozen=True)
class AlgebraicNumber:
    """A real algebraic number: minimal polynomial plus an approximation.

    ``min_poly`` holds integer coefficients, highest degree first, with a
    positive leading coefficient and content 1.
    """

    min_poly: tuple
    approx: BigReal
    isolating_radius: BigReal
    surd_form: LinearSurd | None = None
    certificate: str = "numeric-heuristic"

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def poly_text(self, var: str = "y") -> str:
        return poly_text(self.min_poly, var)

    def residual(self, prec: int | None = None) -> BigReal:
        p = prec or self.approx.precision_bits
        with working(p + GUARD_BITS) as ctx:
            v = to_mpf(self.approx, ctx)
            return BigReal(ctx.polyval([ctx.mpf(c) for c in self.min_poly], v), p)


def poly_text(coeffs: Sequence[int], var: str = "y") -> str:
    deg = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        e = deg - i
        mono = "" if e == 0 else var if e == 1 else f"{var}^{e}"
        mag = abs(c)
        body = str(mag) if not mono else mono if mag == 1 else f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append(("-" + body) if not parts and sign == "-" else body if not parts else f" {sign} {body}")
    return "".join(parts) or "0"


def _normalize(coeffs: list[int]) -> tuple:
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    coeffs = [c // g for c in coeffs]
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


# ----------------------------------------------------------------------
# lattice reduction


def lll(basis: Sequence[Sequence[int]]) -> list[list[int]]:
    """LLL-reduce linearly independent integer rows (delta = 3/4).

    Integral variant: all Gram-Schmidt data is kept as exact integers
    (``d`` and ``lam``), so the reduction is independent of floating-point
    precision.
    """
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    d = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]
    # incremental Gram-Schmidt
    for k in range(n):
        for j in range(k + 1):
            u = dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise DomainError("lattice basis is linearly dependent")
                d[k + 1] = u

    def reduce(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lmb = lam[k][k - 1]
        new_d = (d[k - 1] * d[k + 1] + lmb * lmb) // d[k]
        for i in range(k + 1, n):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lmb * t) // d[k]
            lam[i][k - 1] = (new_d * t + lmb * lam[i][k]) // d[k + 1]
        d[k] = new_d

    k = 1
    while k < n:
        reduce(k, k - 1)
        lmb = lam[k][k - 1]
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lmb * lmb:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                reduce(k, l)
            k += 1
    return b


# ----------------------------------------------------------------------
# identification


def _residual_ok(coeffs, value, prec, slack):
    with working(prec + GUARD_BITS) as ctx:
        v = to_mpf(value, ctx)
        res = ctx.polyval([ctx.mpf(c) for c in coeffs], v)
        scale = sum(abs(c) * max(1, abs(v)) ** (len(coeffs) - 1) for c in coeffs)
        return abs(res) <= eps(prec, slack) * scale


def _isolating_radius(coeffs, approx: BigReal) -> BigReal:
    p = approx.precision_bits
    if len(coeffs) == 2:
        return BigReal(eps(p, -4), p)
    with working(max(p, 128) + GUARD_BITS) as ctx:
        roots = ctx.polyroots([ctx.mpf(c) for c in coeffs], maxsteps=200, extraprec=2 * p)
        v = to_mpf(approx, ctx)
        dists = sorted(abs(ctx.mpc(r) - v) for r in roots)
        return BigReal(dists[1] / 2, p)


def identify(
    v: BigReal,
    max_degree: int,
    max_coeff_bits: int,
    recompute: Callable[[int], BigReal] | None = None,
) -> AlgebraicNumber | None:
    """Find the minimal polynomial of ``v`` with coefficients below 2^max_coeff_bits.

    Requires ``v.precision_bits >= max_degree * max_coeff_bits + 128``.
    When ``recompute`` is given it is called with a doubled precision and
    the candidate must also annihilate that value; otherwise the residual
    is only checked at the input precision, and the spare 128 bits are
    the sole protection against a spurious relation.  Returns None when
    no relation is found.
    """
    p = v.precision_bits
    if max_degree < 1:
        raise DomainError("max_degree must be at least 1")
    need = max_degree * max_coeff_bits + PRECISION_MARGIN
    if p < need:
        raise PrecisionLossError(
            f"{p} bits cannot support degree {max_degree} with {max_coeff_bits}-bit coefficients "
            f"(need {need})"
        )
    check = recompute(2 * p) if recompute is not None else None
    height = 1 << max_coeff_bits
    scale_bits = p - 16
    for d in range(1, max_degree + 1):
        with working(p + GUARD_BITS) as ctx:
            x = to_mpf(v, ctx)
            powers = [ctx.mpf(1)]
            for _ in range(d):
                powers.append(powers[-1] * x)
            column = [int(ctx.nint(ctx.ldexp(t, scale_bits))) for t in powers]
        rows = [[int(i == j) for j in range(d + 1)] + [column[i]] for i in range(d + 1)]
        for row in lll(rows):
            low_first = row[: d + 1]
            if low_first[d] == 0 or max(abs(c) for c in low_first) >= height:
                continue
            coeffs = _normalize(list(reversed(low_first)))
            if len(coeffs) - 1 != d:
                continue
            if not _residual_ok(coeffs, v, p, 16 + d.bit_length()):
                continue
            if check is not None and not _residual_ok(coeffs, check, 2 * p, 16 + d.bit_length()):
                continue
            return _build(coeffs, v)
    return None


def _build(coeffs, v: BigReal) -> AlgebraicNumber:
    surd = None
    if len(coeffs) == 2:
        surd = LinearSurd.rational(Fraction(-coeffs[1], coeffs[0]))
    elif len(coeffs) == 3:
        try:
            lo, hi = surd_of_quadratic(coeffs)
        except DomainError:
            pass
        else:
            p = v.precision_bits
            surd = min((lo, hi), key=lambda s: abs(s.evaluate(p).value - v.value))
    return AlgebraicNumber(coeffs, v, _isolating_radius(coeffs, v), surd)


def surd_of_quadratic(poly: Sequence[int]) -> tuple[LinearSurd, LinearSurd]:
    """Exact roots ``(-B - sqrt(D))/(2A)`` and ``(-B + sqrt(D))/(2A)`` of ``A y^2 + B y + C``."""
    if len(poly) != 3 or poly[0] == 0:
        raise DomainError("a quadratic with nonzero leading coefficient is required")
    A, B, C = (int(c) for c in poly)
    disc = B * B - 4 * A * C
    if disc < 0:
        raise DomainError("quadratic has no real roots")
    root = LinearSurd.sqrt_of(disc)
    base = LinearSurd.rational(Fraction(-B, 2 * A))
    half = root / (2 * A)
    return base - half, base + half


# ----------------------------------------------------------------------
# vanishing certificates


def certify_vanishing(value, prec: int | None = None) -> bool:
    """Numeric evidence that a quantity is exactly zero.

    ``value`` may be a callable ``prec -> BigReal`` (evaluated at p, p+128
    and p+256), an iterable of BigReals computed at increasing precision,
    or a single number (a constant, so the same value at every level).
    Each evaluation at precision p_i must satisfy |v| < 2^(-p_i + 48).
    """
    if callable(value):
        base = prec or 256
        samples = [value(base + step) for step in CERTIFY_STEPS]
    elif isinstance(value, (BigReal, int, Fraction, str)):
        v = BigReal.of(value, prec or (value.precision_bits if isinstance(value, BigReal) else 256))
        samples = [BigReal(v.value, v.precision_bits + step) for step in CERTIFY_STEPS]
    else:
        samples = list(value)
        if not samples:
            raise DomainError("no evaluations to certify")
    for s in samples:
        with working(s.precision_bits + GUARD_BITS) as ctx:
            if abs(to_mpf(s, ctx)) >= eps(s.precision_bits, CERTIFY_SLACK):
                return False
    return True


def identify_decimal(text: str, max_degree: int, max_coeff_bits: int | None = None,
                     prec: int | None = None):
    """Identify a decimal literal, taken as correct to its stated digits.

    Without ``max_coeff_bits`` the largest size the digits support is used.
    """
    digits = len(text.strip().lstrip("+-").replace(".", "").lstrip("0")) or 1
    bits = prec or max(64, int(digits * math.log2(10)))
    if max_coeff_bits is None:
        max_coeff_bits = (bits - PRECISION_MARGIN) // max(1, max_degree)
        if max_coeff_bits < 2:
            raise PrecisionLossError(
                f"{digits} digits are too few for degree {max_degree} (need about "
                f"{math.ceil((PRECISION_MARGIN + 2 * max_degree) / math.log2(10))})"
            )
    return identify(BigReal.of(text, bits), max_degree, max_coeff_bits)


__all__ = [
    "AlgebraicNumber",
    "certify_vanishing",
    "identify",
    "identify_decimal",
    "lll",
    "poly_text",
    "squarefree_decompose",
    "surd_of_quadratic",
]
