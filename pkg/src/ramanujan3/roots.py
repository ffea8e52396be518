"""Real-root isolation for low-degree polynomials with real coefficients.

Roots are isolated by recursion on the derivative: between consecutive
real critical points a polynomial is monotone, so each such interval holds
at most one root, detected by a sign change and then refined by a
bisection-safeguarded Newton iteration.  No closed-form radicals are used,
so the choice of root never depends on a branch of a cube root.
"""

from __future__ import annotations

from itertools import pairwise

from .bigreal import eps

MAX_REFINE_STEPS = 10_000


def horner(coeffs, x):
    """Evaluate a polynomial given highest-degree coefficient first."""
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def derivative(coeffs):
    n = len(coeffs) - 1
    return [c * (n - i) for i, c in enumerate(coeffs[:-1])]


def _trim(coeffs):
    i = 0
    while i < len(coeffs) - 1 and coeffs[i] == 0:
        i += 1
    return coeffs[i:]


def cauchy_bound(ctx, coeffs):
    lead = abs(coeffs[0])
    return 1 + max((abs(c) / lead for c in coeffs[1:]), default=ctx.mpf(0))


def _refine(ctx, coeffs, dcoeffs, a, b, fa, wp):
    """Root of a monotone polynomial on [a, b] with a sign change."""
    tol = eps(wp, 4)
    x = (a + b) / 2
    for _ in range(MAX_REFINE_STEPS):
        fx = horner(coeffs, x)
        if fx == 0:
            return x
        if (fx < 0) == (fa < 0):
            a, fa = x, fx
        else:
            b = x
        if b - a <= tol * max(1, abs(x)):
            return x
        d = horner(dcoeffs, x)
        step = x - fx / d if d != 0 else None
        if step is not None and a < step < b and abs(step - x) < (b - a) / 2:
            if abs(step - x) <= tol * max(1, abs(x)):
                return step
            x = step
        else:
            x = (a + b) / 2
    return x


def real_roots(ctx, coeffs, wp, lo=None, hi=None):
    """All real roots in [lo, hi] (default: the Cauchy bound), ascending.

    Must be called inside ``working(wp)``.  A root that is also a critical
    point (tangency) is reported once when |p| there is below the rounding
    floor.
    """
    coeffs = _trim([ctx.mpf(c) for c in coeffs])
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    bound = cauchy_bound(ctx, coeffs)
    lo = -bound if lo is None else ctx.mpf(lo)
    hi = bound if hi is None else ctx.mpf(hi)
    if deg == 1:
        r = -coeffs[1] / coeffs[0]
        return [r] if lo <= r <= hi else []

    dcoeffs = derivative(coeffs)
    crit = [c for c in real_roots(ctx, dcoeffs, wp, lo, hi) if lo < c < hi]
    scale = max(abs(c) for c in coeffs)
    floor = eps(wp, 16) * scale * max(1, bound) ** deg

    roots = []
    points = [lo] + crit + [hi]
    for c in crit:
        if abs(horner(coeffs, c)) <= floor:
            roots.append(c)
    for a, b in pairwise(points):
        fa, fb = horner(coeffs, a), horner(coeffs, b)
        if fa == 0 and a == lo:
            roots.append(a)
        if fb == 0 and b == hi:
            roots.append(b)
        if fa == 0 or fb == 0 or (fa < 0) == (fb < 0):
            continue
        roots.append(_refine(ctx, coeffs, dcoeffs, a, b, fa, wp))
    roots.sort()
    deduped = []
    for r in roots:
        if not deduped or abs(r - deduped[-1]) > eps(wp, 8) * max(1, abs(r)):
            deduped.append(r)
    return deduped

