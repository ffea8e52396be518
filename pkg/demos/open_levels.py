"""Explore r = 39 and r = 177, whose closed forms are not tabulated.

The pipeline only needs lambda*(r) and alpha(r) numerically, so it builds
and certifies the series anyway.  The lattice search then proposes
minimal polynomials for z, a and b.  These are heuristic identifications.
To test one, the proposed surds are re-read as an exact series and summed
at a much higher precision than the one they were found at.

Run:  python demos/open_levels.py
"""

from ramanujan3.bigreal import working
from ramanujan3.cli import cmd_derive
from ramanujan3.expr import surd_parse
from ramanujan3.series import SeriesParams, pi_residual

for r in (39, 177):
    report = cmd_derive(r, 1024, identify_degree=4, digits=25)
    res = report.results[0]
    print(f"r = {r}: residual {res['pi_residual']} after {res['terms']} terms")
    for name in "yzab":
        surd = res.get(f"{name}_surd")
        print(f"   {name}: {res[f'{name}_poly']}" + (f"   ->  {surd}" if surd else ""))
    if all(f"{n}_surd" in res for n in "zab"):
        p = 4096
        params = SeriesParams(3, *(surd_parse(res[f"{n}_surd"]).evaluate(p) for n in "zab"))
        residual, _ = pi_residual(params, p)
        with working(64) as ctx:
            bits = -ctx.log(abs(ctx.mpf(residual.value)), 2) if residual.value else float("inf")
        print(f"   exact surds at {p} bits: |sum - 1/pi| about 2^-{int(bits)}")
