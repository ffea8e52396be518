"""Follow the level-3 construction step by step at r = 57.

Run:  python demos/r57_walkthrough.py
"""

from ramanujan3 import build_series, identify
from ramanujan3.builder import build_x, solve_y
from ramanujan3.singular import (
    alpha_from_sigma,
    alpha_numeric,
    closed_form,
    lambda_star_numeric,
)

PREC = 512
R = 57

# 1. The singular modulus k = lambda*(57): K'/K = sqrt(57).
m = lambda_star_numeric(R, PREC + 64)
print("k        =", m.k.to_decimal(40))
print("closed   =", closed_form("lambda_star", R, PREC).to_decimal(40))

# 2. alpha(57) two ways: from the elliptic integrals and from the tabulated sigma(57).
print("alpha    =", alpha_numeric(R, PREC).to_decimal(40))
print("by sigma =", alpha_from_sigma(R, prec=PREC).to_decimal(40))

# 3. x = 4 k^2 k'^2 and the root y of the quartic in (-1/2, 0).
x = build_x(R, PREC + 64, m)
y = solve_y(x)
print("x        =", x.to_decimal(30))
print("y        =", y.to_decimal(30))

# 4. z, a, b, certified by summing the series against 1/pi.
rec = build_series(R, PREC)
print(f"residual = {rec.pi_residual.to_decimal(5)} after {rec.terms} terms")

# 5. Each coefficient is a quadratic irrational.  The lattice search is
#    re-checked at double precision through the recompute hook.
for name in ("z", "a", "b"):
    found = identify(getattr(rec, name), 2, 128,
                     recompute=lambda q, n=name: getattr(build_series(R, q), n))
    print(f"{name} = {found.surd_form}    [{found.poly_text(name)} = 0]")
