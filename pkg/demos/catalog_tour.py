"""Check every series in the built-in catalog and recover r where possible.

Run:  python demos/catalog_tour.py
"""

from ramanujan3.builder import recover_r
from ramanujan3.catalog import builtin
from ramanujan3.errors import Level3Error
from ramanujan3.series import pi_residual

cat = builtin()
for entry in cat.series():
    if entry.is_placeholder:
        print(f"{entry.id:18} placeholder (r = {entry.r_value}), {entry.citation}")
        continue
    params = cat.series_params(entry, 256)
    residual, summed = pi_residual(params, 256)
    line = f"{entry.id:18} s = {entry.s}  sum - 1/pi = {residual.to_decimal(3):>11}  ({summed.terms} terms)"
    if entry.s == 3:
        try:
            line += f"  r = {recover_r(params).r}"
        except Level3Error as exc:
            line += f"  recover_r: {exc}"
    print(line)
