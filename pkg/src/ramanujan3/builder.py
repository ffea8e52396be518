"""Level-3 series from singular values, and the inverse map.

Given r > 1 with k = lambda*(r) and x = 4 k^2 k'^2, let y be the unique
root in (-1/2, 0) of

    P(y) = 64 (y - 1) y^3 (1 - 4x)^3 + 27 x (8y - 9)^3.

Then sum D_n (a + b n) z^n = 1/pi with z = 4y(1 - y), b = sqrt(r)(1 - 2y)/3
and

    a = sqrt(9 - 8y) / (6 sqrt((1-4x)^3) Q) * [ 2(1-4x) Q alpha(r)
        + 4x (Q - (16y - 16y^2) sqrt(1-x)) sqrt(r)
        - (Q - (27 - 44y + 16y^2) sqrt(1-x)) sqrt(r) ],   Q = 27 - 36y + 8y^2.

Every derived series is summed and certified against 1/pi before it is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bigreal import GUARD_BITS, BigReal, eps, to_mpf, working
from .elliptic import Modulus
from .errors import (
    AmbiguityError,
    DomainError,
    FormulaTranscriptionError,
    InconsistentSeriesError,
    NoSolutionError,
    PrecisionLossError,
)
from .roots import real_roots
from .series import SeriesParams, pi_residual
from .singular import SingularArgument, alpha_numeric, lambda_star_numeric, ratio_check

BUILD_GUARD = 64
CERTIFY_SLACK = 32
MAX_R_DENOMINATOR = 10**6


@dataclass(frozen=True)
class DerivationRecord:
    """Every intermediate of one run of the pipeline, at ``precision_bits``."""

    r: SingularArgument
    k: Modulus
    x: BigReal
    y: BigReal
    z: BigReal
    a: BigReal
    b: BigReal
    alpha_r: BigReal
    pi_residual: BigReal
    tail_bound: BigReal
    terms: int
    precision_bits: int
    notes: tuple = field(default_factory=tuple)

    @property
    def series(self) -> SeriesParams:
        return SeriesParams(3, self.z, self.a, self.b, label=f"r={self.r}")

    def as_dict(self, digits: int | None = None) -> dict:
        def dec(v):
            return v.to_decimal(digits)

        return {
            "r": str(self.r),
            "k": dec(self.k.k),
            "x": dec(self.x),
            "y": dec(self.y),
            "z": dec(self.z),
            "a": dec(self.a),
            "b": dec(self.b),
            "alpha": dec(self.alpha_r),
            "pi_residual": self.pi_residual.to_decimal(6),
            "tail_bound": self.tail_bound.to_decimal(6),
            "terms": self.terms,
            "precision_bits": self.precision_bits,
        }


def quartic_coefficients(ctx, x):
    """Coefficients of P(y), highest degree first."""
    w = 64 * (1 - 4 * x) ** 3
    return [w, -w + 27 * 512 * x, -27 * 1728 * x, 27 * 1944 * x, -27 * 729 * x]


def build_x(r, prec: int = 256, modulus: Modulus | None = None) -> BigReal:
    """x = 4 k^2 k'^2 for k = lambda*(r)."""
    m = modulus or lambda_star_numeric(r, prec)
    with working(m.precision_bits + GUARD_BITS) as ctx:
        k, kp = to_mpf(m.k, ctx), to_mpf(m.k_prime, ctx)
        return BigReal(4 * (k * kp) ** 2, m.precision_bits)


def solve_y(x: BigReal) -> BigReal:
    """The unique root of P(y) in (-1/2, 0); requires 0 < x < 1/4."""
    p = x.precision_bits
    wp = p + BUILD_GUARD
    with working(wp) as ctx:
        xv = to_mpf(x, ctx)
        if not 0 < xv < ctx.mpf(1) / 4:
            raise DomainError(f"x must lie in (0, 1/4), got {ctx.nstr(xv, 10)}")
        coeffs = quartic_coefficients(ctx, xv)
        roots = [y for y in real_roots(ctx, coeffs, wp, ctx.mpf(-1) / 2, 0) if -0.5 < y < 0]
        if not roots:
            raise NoSolutionError("P(y) has no root in (-1/2, 0)")
        if len(roots) > 1:
            raise AmbiguityError(f"P(y) has {len(roots)} roots in (-1/2, 0)")
        return BigReal(roots[0], p)


def theorem_ab(ctx, x, y, sqrt_r, alpha):
    """(a, b) of the level-3 series as mpf values of ``ctx``."""
    Q = 27 - 36 * y + 8 * y * y
    s1x = ctx.sqrt(1 - x)
    one4x = 1 - 4 * x
    bracket = (
        2 * one4x * Q * alpha
        + 4 * x * (Q - (16 * y - 16 * y * y) * s1x) * sqrt_r
        - (Q - (27 - 44 * y + 16 * y * y) * s1x) * sqrt_r
    )
    a = ctx.sqrt(9 - 8 * y) / (6 * ctx.sqrt(one4x**3) * Q) * bracket
    b = sqrt_r * (1 - 2 * y) / 3
    return a, b


def b_unreduced(x: BigReal, y: BigReal, r) -> BigReal:
    """b before simplification:
    (1 + 8x) sqrt(1-x) (1-2y) sqrt((9-8y)^3) sqrt(r) / (3 sqrt((1-4x)^3) Q)."""
    r = SingularArgument.of(r)
    p = min(x.precision_bits, y.precision_bits)
    with working(p + GUARD_BITS) as ctx:
        xv, yv = to_mpf(x, ctx), to_mpf(y, ctx)
        Q = 27 - 36 * yv + 8 * yv * yv
        num = (1 + 8 * xv) * ctx.sqrt(1 - xv) * (1 - 2 * yv) * ctx.sqrt((9 - 8 * yv) ** 3) * r.sqrt(ctx)
        return BigReal(num / (3 * ctx.sqrt((1 - 4 * xv) ** 3) * Q), p)


def build_series(
    r,
    prec: int = 256,
    modulus: Modulus | None = None,
    alpha: BigReal | None = None,
) -> DerivationRecord:
    """Run the pipeline for r > 1 and certify |sum - 1/pi| < 2^(-prec + 32).

    ``modulus`` and ``alpha`` may be supplied (for instance from closed
    forms); they must carry at least ``prec + 64`` bits to reach the
    certification target.
    """
    r = SingularArgument.of(r)
    if r.r <= 1:
        raise DomainError("the level-3 construction needs r > 1")
    wp = prec + BUILD_GUARD
    m = modulus or lambda_star_numeric(r, wp)
    al = alpha if alpha is not None else alpha_numeric(r, wp, m)
    x = build_x(r, modulus=m)
    y = solve_y(x)
    q = min(x.precision_bits, y.precision_bits, al.precision_bits)
    with working(q + GUARD_BITS) as ctx:
        xv, yv = to_mpf(x, ctx), to_mpf(y, ctx)
        a, b = theorem_ab(ctx, xv, yv, r.sqrt(ctx), to_mpf(al, ctx))
        z = 4 * yv * (1 - yv)
        if abs(z) >= 1:
            raise DomainError(f"|z| = {ctx.nstr(abs(z), 8)} >= 1")
        params = SeriesParams(3, BigReal(z, q), BigReal(a, q), BigReal(b, q))
    residual, summed = pi_residual(params, q)
    if abs(residual.value) >= eps(prec, CERTIFY_SLACK):
        raise FormulaTranscriptionError(
            f"series for r = {r} misses 1/pi by {residual.to_decimal(6)}", residual
        )
    notes = ("modulus supplied",) if modulus is not None else ()
    notes += ("alpha supplied",) if alpha is not None else ()
    return DerivationRecord(
        r=r, k=Modulus(m.k.with_precision(prec), m.k_prime.with_precision(prec)),
        x=x.with_precision(prec), y=y.with_precision(prec),
        z=params.z.with_precision(prec), a=params.a.with_precision(prec),
        b=params.b.with_precision(prec), alpha_r=al.with_precision(prec),
        pi_residual=residual.with_precision(prec), tail_bound=summed.tail_bound.with_precision(prec),
        terms=summed.terms, precision_bits=prec, notes=notes,
    )


# ----------------------------------------------------------------------
# inverse map


def _rational_near(ctx, v, bits):
    """The simplest rational within 2^-bits of v, if its denominator is small."""
    guess = Fraction(int(ctx.nint(ctx.ldexp(v, bits))), 1 << bits).limit_denominator(MAX_R_DENOMINATOR)
    if abs(to_mpf(guess, ctx) - v) < eps(bits) * max(1, abs(v)):
        return guess
    return None


def recover_r(entry: SeriesParams) -> DerivationRecord:
    """Invert the pipeline: from a level-3 series (z, a, b) find r, x, y, k.

    The normalization is folded into (a, b) first.  r comes from
    r = (3b/(1 - 2y))^2 and must be rational; x is the root of the cubic
    P(y) = 0 (in x) whose modulus satisfies K'/K = sqrt(r); finally the
    theorem's ``a`` must match the entry's.
    """
    if entry.s != 3:
        raise DomainError("only level-3 (s = 3) series can be inverted")
    params = entry.normalized()
    p = params.precision_bits
    wp = p + GUARD_BITS
    with working(wp) as ctx:
        z = to_mpf(params.z, ctx)
        if not -1 < z < 0:
            raise DomainError("the level-3 construction produces -1 < z < 0")
        y = (1 - ctx.sqrt(1 - z)) / 2
        r_float = (3 * to_mpf(params.b, ctx) / (1 - 2 * y)) ** 2
        r_val = _rational_near(ctx, r_float, p - 32)
        if r_val is None:
            raise InconsistentSeriesError(
                f"(3b/(1-2y))^2 = {ctx.nstr(r_float, 20)} is not a rational singular argument"
            )
        if r_val <= 1:
            raise InconsistentSeriesError(f"recovered r = {r_val} is not above 1")
        u = 64 * (y - 1) * y**3
        v = 27 * (8 * y - 9) ** 3
        # u (1 - 4x)^3 + v x = 0, expanded in x
        cubic = [-64 * u, 48 * u, -12 * u + v, u]
        xs = [t for t in real_roots(ctx, cubic, wp, 0, ctx.mpf(1) / 4) if 0 < t < 0.25]
        r_arg = SingularArgument(r_val)
        matches = []
        for xv in xs:
            k2 = xv / (2 * (1 + ctx.sqrt(1 - xv)))
            m = Modulus(BigReal(ctx.sqrt(k2), p), BigReal(ctx.sqrt(1 - k2), p))
            try:
                ratio_check(m, r_arg, p - 48)
            except (PrecisionLossError, DomainError):
                continue
            matches.append((xv, m))
    if not matches:
        raise InconsistentSeriesError(f"no root x of P gives K'/K = sqrt({r_val})")
    if len(matches) > 1:
        raise AmbiguityError(f"{len(matches)} roots x are consistent with r = {r_val}")
    xv, m = matches[0]
    alpha = alpha_numeric(r_arg, p, m)
    with working(wp) as ctx:
        a_theorem, _ = theorem_ab(ctx, xv, y, r_arg.sqrt(ctx), to_mpf(alpha, ctx))
        if abs(a_theorem - to_mpf(params.a, ctx)) > eps(p, 48):
            raise InconsistentSeriesError(
                f"a = {ctx.nstr(to_mpf(params.a, ctx), 15)} but the construction gives "
                f"{ctx.nstr(a_theorem, 15)} for r = {r_val}"
            )
        x_b, y_b = BigReal(xv, p), BigReal(y, p)
    residual, summed = pi_residual(params, p)
    return DerivationRecord(
        r=r_arg, k=m, x=x_b, y=y_b, z=params.z, a=params.a, b=params.b, alpha_r=alpha,
        pi_residual=residual, tail_bound=summed.tail_bound, terms=summed.terms,
        precision_bits=p, notes=("recovered",),
    )
