"""Singular moduli, Ramanujan's alpha function and class invariants.

For a positive rational ``r`` the singular modulus ``k = lambda*(r)`` is
the unique ``k`` in (0, 1) with ``K'(k)/K(k) = sqrt(r)``, and

    alpha(r) = pi/(4 K^2) - sqrt(r) (E/K - 1) = E'/K - pi/(4 K^2).

The class invariant is ``G_r = (2 k k')^(-1/12)``.  All numeric routines
work at the requested precision plus guard bits and return values
tagged with the requested precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .algebraic import AlgebraicNumber, identify
from .bigreal import GUARD_BITS, BigReal, Number, eps, to_mpf, working
from .elliptic import Modulus, _e_raw, _k_raw, ell_k, ell_k_prime
from .errors import (
    AmbiguityError,
    DomainError,
    InternalInconsistencyError,
    NotAvailableError,
    PrecisionLossError,
    TranscriptionAmbiguityError,
)
from .roots import real_roots

log = logging.getLogger(__name__)

MIN_SINGULAR_PRECISION = 128
SINGULAR_GUARD = 64
MAX_NEWTON_STEPS = 60
SIGMA_LEVELS = (57, 93)


@dataclass(frozen=True)
class SingularArgument:
    """A positive rational ``r``; the modulus satisfies K'/K = sqrt(r)."""

    r: Fraction

    def __post_init__(self):
        r = Fraction(self.r)
        if r <= 0:
            raise DomainError(f"singular argument must be positive, got {r}")
        object.__setattr__(self, "r", r)

    @classmethod
    def of(cls, r) -> SingularArgument:
        return r if isinstance(r, SingularArgument) else cls(Fraction(r))

    def sqrt(self, ctx):
        return ctx.sqrt(to_mpf(self.r, ctx))

    def __str__(self):
        return str(self.r)


# ----------------------------------------------------------------------
# lambda*


def _theta_modulus(ctx, sqrt_r, wp):
    """(k, k') from theta functions of the nome q = exp(-pi sqrt(r))."""
    q = ctx.exp(-ctx.pi * sqrt_r)
    tol = eps(wp, -4)
    t2 = t3 = t4 = ctx.mpf(0)
    n = 0
    while True:
        a = q ** (n * (n + 1))
        b = q ** ((n + 1) ** 2)
        t2 += a
        t3 += b
        t4 += b if n % 2 else -b
        n += 1
        if a < tol and b < tol:
            break
    theta2 = 2 * ctx.root(q, 4) * t2
    theta3 = 1 + 2 * t3
    theta4 = 1 + 2 * t4
    return theta2**2 / theta3**2, theta4**2 / theta3**2


def _ratio_and_slope(ctx, k, kp, wp):
    """K'/K and its derivative with respect to log k.

    Legendre's relation gives d(K'/K)/dk = -pi / (2 k k'^2 K^2).
    """
    K = _k_raw(ctx, kp, wp)
    Kp = _k_raw(ctx, k, wp)
    return Kp / K, -ctx.pi / (2 * kp * kp * K * K)


def _newton_log_k(ctx, sqrt_r, k, wp):
    """Polish k by Newton's method in t = log k; None if it misbehaves."""
    t = ctx.log(k)
    for _ in range(MAX_NEWTON_STEPS):
        k = ctx.exp(t)
        if not 0 < k < 1:
            return None
        kp = ctx.sqrt((1 - k) * (1 + k))
        f, slope = _ratio_and_slope(ctx, k, kp, wp)
        step = (f - sqrt_r) / slope
        if abs(step) > 1:
            return None
        t -= step
        if abs(step) < eps(wp, 8):
            k = ctx.exp(t)
            return k, ctx.sqrt((1 - k) * (1 + k))
    return None


def _bisect_log_k(ctx, sqrt_r, wp):
    # K'/K decreases in k; bracket log k in [-(pi sqrt(r) + 8), log(1/sqrt 2)] for r >= 1
    lo, hi = -(ctx.pi * sqrt_r + 8), -ctx.ln2 / 2
    while hi - lo > eps(wp, 4) * abs(lo):
        mid = (lo + hi) / 2
        k = ctx.exp(mid)
        f, _ = _ratio_and_slope(ctx, k, ctx.sqrt((1 - k) * (1 + k)), wp)
        if f > sqrt_r:
            lo = mid
        else:
            hi = mid
    k = ctx.exp((lo + hi) / 2)
    return k, ctx.sqrt((1 - k) * (1 + k))


def lambda_star_numeric(r, prec: int = 256) -> Modulus:
    """The singular modulus lambda*(r) as a (k, k') pair.

    Computed from theta series, polished by Newton's method (bisection as
    fallback) and checked: |K'/K - sqrt(r)| < 2^(-prec + 16).  For r < 1
    the complement of lambda*(1/r) is returned.
    """
    r = SingularArgument.of(r)
    if prec < MIN_SINGULAR_PRECISION:
        raise PrecisionLossError(f"precision must be at least {MIN_SINGULAR_PRECISION} bits")
    if r.r < 1:
        return lambda_star_numeric(1 / r.r, prec).complement()
    wp = prec + SINGULAR_GUARD
    with working(wp) as ctx:
        sqrt_r = r.sqrt(ctx)
        # k^2 ~ 16 q; below 2^-prec, k' = 1 to every carried bit
        if ctx.pi * sqrt_r > (prec + 4) * ctx.ln2:
            raise PrecisionLossError(
                f"lambda*({r}) has k^2 below 2^-{prec}; increase the precision"
            )
        k, kp = _theta_modulus(ctx, sqrt_r, wp)
        polished = _newton_log_k(ctx, sqrt_r, k, wp)
        if polished is None:
            log.warning("Newton polish failed for r = %s; falling back to bisection", r)
            polished = _bisect_log_k(ctx, sqrt_r, wp)
        k, kp = polished
        m = Modulus(BigReal(k, prec), BigReal(kp, prec))
    ratio_check(m, r, prec - 16)
    return m


def ratio_check(m: Modulus, r, bits: int) -> None:
    """Raise unless |K'/K - sqrt(r)| < 2^-bits (relative to sqrt(r))."""
    r = SingularArgument.of(r)
    K, Kp = ell_k(m), ell_k_prime(m)
    with working(m.precision_bits + GUARD_BITS) as ctx:
        sqrt_r = r.sqrt(ctx)
        defect = abs(to_mpf(Kp, ctx) / to_mpf(K, ctx) - sqrt_r)
        if defect > eps(bits) * sqrt_r:
            raise PrecisionLossError(
                f"K'/K - sqrt({r}) = {ctx.nstr(defect, 5)} exceeds 2^-{bits}"
            )


# ----------------------------------------------------------------------
# alpha


def alpha_forms(r, prec: int = 256, modulus: Modulus | None = None) -> tuple[BigReal, BigReal]:
    """Both expressions for alpha(r): (pi/(4K^2) - sqrt(r)(E/K - 1), E'/K - pi/(4K^2))."""
    r = SingularArgument.of(r)
    wp = prec + SINGULAR_GUARD
    m = modulus or lambda_star_numeric(r, wp)
    with working(wp + GUARD_BITS) as ctx:
        k, kp = to_mpf(m.k, ctx), to_mpf(m.k_prime, ctx)
        K, E = _k_raw(ctx, kp, wp), _e_raw(ctx, k, kp, wp)
        Ep = _e_raw(ctx, kp, k, wp)
        sqrt_r = r.sqrt(ctx)
        quarter = ctx.pi / (4 * K * K)
        first = quarter - sqrt_r * (E / K - 1)
        second = Ep / K - quarter
        return BigReal(first, prec), BigReal(second, prec)


def alpha_numeric(r, prec: int = 256, modulus: Modulus | None = None) -> BigReal:
    """alpha(r); both defining expressions must agree to 2^(-prec + 24)."""
    first, second = alpha_forms(r, prec, modulus)
    if not first.close_to(second, prec - 24):
        raise InternalInconsistencyError(
            f"the two expressions for alpha({r}) disagree: {first!r} vs {second!r}"
        )
    return first


# ----------------------------------------------------------------------
# class invariants


@dataclass(frozen=True)
class GInvariant:
    """Ramanujan's class invariant G_n (``n`` may be unknown)."""

    g_value: BigReal
    n: Fraction | None = None

    @property
    def precision_bits(self) -> int:
        return self.g_value.precision_bits

    @property
    def g_minus12(self) -> BigReal:
        """G^-12 = 2 k k'."""
        return self.g_value ** -12

    @property
    def x(self) -> BigReal:
        """x = 4 k^2 k'^2 = G^-24."""
        return self.g_value ** -24

    @classmethod
    def of(cls, value: Number, n=None, prec: int | None = None) -> GInvariant:
        return cls(BigReal.of(value, prec), None if n is None else Fraction(n))


def g_from_lambda(m: Modulus, n=None) -> GInvariant:
    """G = (2 k k')^(-1/12), defined for k <= k' (that is, n >= 1)."""
    p = m.precision_bits
    with working(p + GUARD_BITS) as ctx:
        k, kp = to_mpf(m.k, ctx), to_mpf(m.k_prime, ctx)
        if k > kp * (1 + eps(p, 8)):
            raise DomainError("G is only defined here for k <= 1/sqrt(2)")
        if k == 0:
            raise DomainError("G diverges at k = 0")
        g = (2 * k * kp) ** (-ctx.mpf(1) / 12)
        return GInvariant(BigReal(g, p), None if n is None else Fraction(n))


def lambda_from_g(g: GInvariant) -> Modulus:
    """Inverse of :func:`g_from_lambda`: k = t / (sqrt(1+t) + sqrt(1-t)) with t = G^-12."""
    p = g.precision_bits
    with working(p + GUARD_BITS) as ctx:
        t = to_mpf(g.g_value, ctx) ** -12
        if not 0 < t <= 1:
            raise DomainError("G must be at least 1")
        s_plus, s_minus = ctx.sqrt(1 + t), ctx.sqrt(1 - t)
        k = t / (s_plus + s_minus)
        kp = (s_plus + s_minus) / 2
        return Modulus(BigReal(k, p), BigReal(kp, p))


def g9n_step(g_n: GInvariant, validate: bool = True) -> GInvariant:
    """G_{9n} from G_n by the modular equation of degree 3.

    With u = G_{9n}^3, A = 2 sqrt(2)/G_n^9 and B = 2 sqrt(2) G_n^3 the relation
    (1 + 2 sqrt(2) G_n^3 / G_{9n}^9)(1 + 2 sqrt(2) G_{9n}^3 / G_n^9) = 9 becomes

        A u^4 - 8 u^3 + A B u + B = 0,

    whose unique real root above G_n^3 is taken.  When ``validate`` and the
    level ``n`` is known, the result is compared with lambda*(9n).
    """
    p = g_n.precision_bits
    wp = p + SINGULAR_GUARD
    with working(wp) as ctx:
        g = to_mpf(g_n.g_value, ctx)
        A = 2 * ctx.sqrt(2) / g**9
        B = 2 * ctx.sqrt(2) * g**3
        floor = g**3
        candidates = [u for u in real_roots(ctx, [A, -8, 0, A * B, B], wp) if u > floor * (1 + eps(p, 8))]
        if not candidates:
            raise InternalInconsistencyError("no root of the degree-3 relation exceeds G_n^3")
        if len(candidates) > 1:
            raise AmbiguityError(f"{len(candidates)} roots of the degree-3 relation exceed G_n^3")
        result = GInvariant(BigReal(ctx.cbrt(candidates[0]), p), None if g_n.n is None else 9 * g_n.n)
    if validate and g_n.n is not None:
        direct = g_from_lambda(lambda_star_numeric(9 * g_n.n, p), 9 * g_n.n)
        if not result.g_value.close_to(direct.g_value, p - 24):
            log.warning("G_9n relation disagrees with lambda*(%s)", 9 * g_n.n)
            raise InternalInconsistencyError(
                f"G_{9 * g_n.n} from the degree-3 relation ({result.g_value!r}) differs from "
                f"the value through lambda* ({direct.g_value!r})"
            )
    return result


# ----------------------------------------------------------------------
# alpha(9r) recursion


def _alpha_9r_candidate(ctx, alpha_r, sqrt_r, l, lp, k, kp, swapped):
    if swapped:
        ratio = 4 * (l * lp) ** (ctx.mpf(3) / 4) / (k * kp) ** (ctx.mpf(1) / 4)
    else:
        ratio = 4 * (k * kp) ** (ctx.mpf(3) / 4) / (l * lp) ** (ctx.mpf(1) / 4)
    s = ctx.sqrt(1 + ratio)
    return s * s * alpha_r - sqrt_r * (s * s + 2 * s - 3) / 2


def alpha_9r(r, alpha_r: BigReal, l: Modulus, k: Modulus, validate: bool = True) -> BigReal:
    """alpha(9r) from alpha(r) with l = lambda*(r), k = lambda*(9r).

    alpha(9r) = s^2 alpha(r) - sqrt(r) (s^2 + 2s - 3)/2, where
    s = sqrt(1 + 4 (k k')^(3/4) / (l l')^(1/4)).

    With ``validate`` the result is compared with the direct numeric
    alpha(9r); on disagreement both exponent readings are reported in a
    :class:`TranscriptionAmbiguityError`.
    """
    r = SingularArgument.of(r)
    p = min(alpha_r.precision_bits, l.precision_bits, k.precision_bits)
    with working(p + GUARD_BITS) as ctx:
        args = (
            to_mpf(alpha_r, ctx), r.sqrt(ctx),
            to_mpf(l.k, ctx), to_mpf(l.k_prime, ctx), to_mpf(k.k, ctx), to_mpf(k.k_prime, ctx),
        )
        printed = BigReal(_alpha_9r_candidate(ctx, *args, swapped=False), p)
        if not validate:
            return printed
        swapped = BigReal(_alpha_9r_candidate(ctx, *args, swapped=True), p)
    direct = alpha_numeric(9 * r.r, p)
    if printed.close_to(direct, p - 24):
        return printed
    residual = BigReal(printed.value - direct.value, p)
    which = "the swapped exponent reading matches" if swapped.close_to(direct, p - 24) else "neither reading matches"
    raise TranscriptionAmbiguityError(
        f"alpha({9 * r.r}) recursion disagrees with direct numerics; {which}",
        candidates={"printed": printed, "swapped": swapped, "numeric": direct},
        residual=residual,
    )


# ----------------------------------------------------------------------
# closed forms


def _catalog():
    from .catalog import builtin

    return builtin()


def rho_eleven(prec: int = 256) -> AlgebraicNumber:
    """The real root of 2 t^3 + 2^(4/3) t^2 - 1 = 0, with its minimal polynomial."""
    cat = _catalog()
    expr = cat["rho11"].expressions["value"]
    work = max(prec, 9 * 32 + 160)
    value = cat.evaluate(expr, work)
    found = identify(value, 9, 32, recompute=lambda q: cat.evaluate(expr, q))
    if found is None or found.min_poly != (8, 0, 0, 4, 0, 0, 6, 0, 0, -1):
        raise InternalInconsistencyError("rho does not satisfy 8 t^9 + 4 t^6 + 6 t^3 - 1 = 0")
    with working(work + GUARD_BITS) as ctx:
        t = to_mpf(value, ctx)
        defect = 2 * t**3 + ctx.cbrt(16) * t**2 - 1
        if abs(defect) > eps(work, 8):
            raise InternalInconsistencyError("rho fails its defining cubic")
    return AlgebraicNumber(found.min_poly, BigReal(value.value, prec), found.isolating_radius.with_precision(prec))


def closed_form(quantity: str, r, prec: int = 256) -> BigReal:
    """A tabulated closed form (``lambda_star``, ``alpha``, ``g``, ``sigma``, ``y`` ...)."""
    cat = _catalog()
    if quantity == "g":
        try:
            return cat.constant("g", r, prec)
        except NotAvailableError:
            return cat.constant("g_minus6", r, prec) ** Fraction(-1, 6)
    return cat.constant(quantity, r, prec)


@dataclass(frozen=True)
class SigmaValue:
    """Tabulated sigma(p) with alpha(p) = sqrt(p)(1 + k^2)/3 - sigma/6."""

    p: int
    value: BigReal
    text: str


def sigma(p: int, prec: int = 256) -> SigmaValue:
    if p not in SIGMA_LEVELS:
        raise NotAvailableError(f"sigma({p}) is only tabulated for p in {SIGMA_LEVELS}")
    entry = _catalog()[f"sigma{p}"]
    return SigmaValue(p, _catalog().evaluate(entry.expressions["value"], prec), entry.expressions["value"].text)


def alpha_from_sigma(p: int, sig: BigReal | None = None, k: Modulus | BigReal | None = None,
                     prec: int = 256) -> BigReal:
    """alpha(p) = sqrt(p)(1 + k^2)/3 - sigma(p)/6, for p in {57, 93}.

    Defaults take sigma and k = lambda*(p) from the tabulated closed forms.
    """
    if p not in SIGMA_LEVELS:
        raise NotAvailableError(f"sigma({p}) is only tabulated for p in {SIGMA_LEVELS}")
    sig = sig if sig is not None else sigma(p, prec).value
    if k is None:
        k = closed_form("lambda_star", p, prec)
    elif isinstance(k, Modulus):
        k = k.k
    q = min(sig.precision_bits, k.precision_bits)
    with working(q + GUARD_BITS) as ctx:
        kv = to_mpf(k, ctx)
        value = ctx.sqrt(p) * (1 + kv * kv) / 3 - to_mpf(sig, ctx) / 6
        return BigReal(value, q)
