"""Reach r = 99 from r = 11 with the degree-3 modular relation.

G_99 comes from G_11, alpha(99) from alpha(11), and the resulting series
is checked against 1/pi and against its closed forms.

Run:  python demos/r99_via_g11.py
"""

from ramanujan3 import build_series, certify_vanishing
from ramanujan3.bigreal import BigReal, working
from ramanujan3.expr import surd_parse
from ramanujan3.singular import (
    GInvariant,
    alpha_9r,
    alpha_numeric,
    closed_form,
    g9n_step,
    lambda_from_g,
    lambda_star_numeric,
    rho_eleven,
)

P = 512
W = P + 64

rho = rho_eleven(P)
print("rho      =", rho.approx.to_decimal(40))
print("min poly :", rho.poly_text("t"))

g11 = GInvariant(closed_form("g", 11, W), 11)
g99 = g9n_step(g11)
print("G_99     =", g99.g_value.to_decimal(40))
print("listing  =", closed_form("g", 99, P).to_decimal(40))

l11, k99 = lambda_star_numeric(11, W), lambda_from_g(g99)
a99 = alpha_9r(11, closed_form("alpha", 11, W), l11, k99)
print("alpha(99) by recursion =", a99.to_decimal(40))
print("alpha(99) numerically  =", alpha_numeric(99, P).to_decimal(40))

rec = build_series(99, P, modulus=k99, alpha=a99)
print("y =", rec.y.to_decimal(30), " closed form (155 - 27*sqrt(33))/128")
print(f"series residual {rec.pi_residual.to_decimal(5)}")


def z_defect(q):
    # 4y(1 - y) minus the closed form of z, at precision q
    y = build_series(99, q).y
    z = surd_parse("(2457*sqrt(33) - 14121)/2048").evaluate(q)
    with working(q + 32) as ctx:
        yv = ctx.mpf(y.value)
        return BigReal(4 * yv * (1 - yv) - ctx.mpf(z.value), q)


print("z vanishing certified at 512/640/768 bits:", certify_vanishing(z_defect, P))
for name, text in (("a", "(75*sqrt(3) - 33*sqrt(11))/64"), ("b", "(297*sqrt(3) - 91*sqrt(11))/64")):
    print(f"{name} matches {text}:", getattr(rec, name).close_to(surd_parse(text).evaluate(P), P - 40))
