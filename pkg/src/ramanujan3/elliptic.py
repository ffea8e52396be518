"""Complete elliptic integrals by the arithmetic-geometric mean.

Every public kernel is a pure function of its arguments' values and
precision.  It is evaluated twice, with 32 and with 96 guard bits, and
the two evaluations must agree to ``2**-prec`` (relative) or
:class:`PrecisionLossError` is raised.

The modulus is always carried as the pair ``(k, k')`` so that neither
``K`` nor ``K'`` ever has to form ``1 - k**2`` near an endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bigreal import GUARD_BITS, BigReal, Number, eps, to_mpf, working
from .errors import DomainError, PrecisionLossError

CHECK_EXTRA_BITS = 64
MAX_AGM_STEPS = 200


@dataclass(frozen=True)
class Modulus:
    """An elliptic modulus ``k`` with its complement ``k' = sqrt(1 - k^2)``."""

    k: BigReal
    k_prime: BigReal

    def __post_init__(self):
        prec = self.precision_bits
        if not (0 <= self.k.value <= 1 and 0 <= self.k_prime.value <= 1):
            raise DomainError(f"modulus must lie in [0, 1], got k = {self.k!r}")
        with working(prec + GUARD_BITS) as ctx:
            defect = ctx.mpf(self.k.value) ** 2 + ctx.mpf(self.k_prime.value) ** 2 - 1
            if abs(defect) > eps(prec, 8):
                raise DomainError("k^2 + k'^2 != 1")

    @classmethod
    def from_k(cls, k: Number, prec: int | None = None) -> Modulus:
        k = BigReal.of(k, prec)
        p = k.precision_bits
        with working(p + GUARD_BITS) as ctx:
            kv = ctx.mpf(k.value)
            if not 0 <= kv <= 1:
                raise DomainError(f"modulus must lie in [0, 1], got {kv}")
            kp = ctx.sqrt((1 - kv) * (1 + kv))
        return cls(k, BigReal(kp, p))

    @classmethod
    def from_k_prime(cls, k_prime: Number, prec: int | None = None) -> Modulus:
        m = cls.from_k(k_prime, prec)
        return cls(m.k_prime, m.k)

    @classmethod
    def from_k_squared(cls, k2: Number, prec: int | None = None) -> Modulus:
        """Build from ``k^2``, computing ``k'`` from ``1 - k^2`` without forming ``k``."""
        k2 = BigReal.of(k2, prec)
        p = k2.precision_bits
        with working(p + GUARD_BITS) as ctx:
            v = ctx.mpf(k2.value)
            if not 0 <= v <= 1:
                raise DomainError(f"k^2 must lie in [0, 1], got {v}")
            return cls(BigReal(ctx.sqrt(v), p), BigReal(ctx.sqrt(1 - v), p))

    @property
    def precision_bits(self) -> int:
        return min(self.k.precision_bits, self.k_prime.precision_bits)

    def complement(self) -> Modulus:
        return Modulus(self.k_prime, self.k)


# ----------------------------------------------------------------------
# raw kernels: (mpf inputs, working precision) -> mpf, run inside working()


def _agm_with_defects(ctx, a, b, wp):
    """AGM limit and the defect terms c_1, c_2, ... of the iteration."""
    # c_{n+1} = (a_n - b_n)/2 is recorded before the update
    defects = []
    tol = eps(wp, 4)
    for _ in range(MAX_AGM_STEPS):
        if abs(a - b) <= tol * a:
            return a, defects
        defects.append((a - b) / 2)
        a, b = (a + b) / 2, ctx.sqrt(a * b)
    raise PrecisionLossError("AGM iteration did not converge")


def _k_raw(ctx, kp, wp):
    if kp == 0:
        raise DomainError("K diverges at k = 1")
    m, _ = _agm_with_defects(ctx, ctx.mpf(1), kp, wp)
    return ctx.pi / (2 * m)


def _e_raw(ctx, k, kp, wp):
    # E = K (1 - sum_{n>=0} 2^(n-1) c_n^2), c_0 = k
    if kp == 0:
        return ctx.mpf(1)
    m, defects = _agm_with_defects(ctx, ctx.mpf(1), kp, wp)
    total = k * k / 2
    weight = ctx.mpf(1)
    for c in defects:
        total += weight * c * c
        weight *= 2
    return ctx.pi / (2 * m) * (1 - total)


def _dk_raw(ctx, k, kp, wp):
    K = _k_raw(ctx, kp, wp)
    E = _e_raw(ctx, k, kp, wp)
    kp2 = kp * kp
    return (E - kp2 * K) / (k * kp2)


def _checked(raw, prec, args, extra=0):
    """Evaluate ``raw(ctx, *args, wp)`` at two precisions and compare."""
    results = []
    for guard in (GUARD_BITS, GUARD_BITS + CHECK_EXTRA_BITS):
        wp = prec + guard + extra
        with working(wp) as ctx:
            results.append(raw(ctx, *[to_mpf(a, ctx) for a in args], wp))
    lo, hi = results
    with working(prec + GUARD_BITS + CHECK_EXTRA_BITS + extra) as ctx:
        scale = max(1, abs(hi))
        if abs(lo - hi) > eps(prec) * scale:
            raise PrecisionLossError(
                f"self-check failed: results at two precisions differ by {ctx.nstr(abs(lo - hi), 5)}"
            )
    return BigReal(hi, prec)


# ----------------------------------------------------------------------
# public kernels


def agm(a0: Number, b0: Number, prec: int | None = None) -> BigReal:
    """Arithmetic-geometric mean of two positive reals."""
    if prec is None:
        prec = min(x.precision_bits for x in (a0, b0) if isinstance(x, BigReal))
    a0, b0 = BigReal.of(a0, prec), BigReal.of(b0, prec)
    if a0.value <= 0 or b0.value <= 0:
        raise DomainError("agm requires positive arguments")
    return _checked(lambda ctx, a, b, wp: _agm_with_defects(ctx, a, b, wp)[0], prec, (a0, b0))


def ell_k(m: Modulus) -> BigReal:
    """K(k) = pi / (2 agm(1, k'))."""
    return _checked(lambda ctx, kp, wp: _k_raw(ctx, kp, wp), m.precision_bits, (m.k_prime,))


def ell_e(m: Modulus) -> BigReal:
    """E(k) from the AGM defect sum."""
    return _checked(_e_raw, m.precision_bits, (m.k, m.k_prime))


def ell_k_prime(m: Modulus) -> BigReal:
    """K'(k) = K(k')."""
    return ell_k(m.complement())


def ell_e_prime(m: Modulus) -> BigReal:
    """E'(k) = E(k')."""
    return ell_e(m.complement())


def dk_dk(m: Modulus) -> BigReal:
    """dK/dk = (E - k'^2 K) / (k k'^2).

    The numerator cancels like k^2 for small k, so the working precision
    is raised by about 2 log2(1/k) bits.
    """
    k = m.k.value
    if not 0 < k < 1 or m.k_prime.value == 0:
        raise DomainError("dK/dk requires 0 < k < 1")
    with working(64) as ctx:
        extra = max(0, int(-2 * ctx.log(k, 2)) + 8)
    return _checked(_dk_raw, m.precision_bits, (m.k, m.k_prime), extra=extra)
