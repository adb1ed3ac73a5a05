"""
Truncated series and the limiting loop equation
===============================================

Evaluate f_0 of a square as a truncated series, see where the tail bound is
certified, and check the limiting equation order by order.
"""

import mpmath

from lstring.lattice import loop_sequence
from lstring.series import f_value, is_certified, master_residual_limit, reduced_f0_residual

p = loop_sequence("@(0,0) +1 +2 -1 -2")

for beta in ("1e-4", "1e-19"):
    v = f_value(0, p, beta, 3, 2)
    print(f"beta={beta}: f_0 = {mpmath.nstr(v.value, 12)}  tail <= {mpmath.nstr(v.tail_bound, 4)}"
          f"  certified={v.certified}")

# the certified radius from the coefficient bound is tiny: 2|beta| (2048)^5 < 1
print("certified at 1e-17?", is_certified(0, "1e-17", 2), " at 1e-18?", is_certified(0, "1e-18", 2))

for k in (0, 1):
    r = master_residual_limit(p, k, "1e-4", 3, 2)
    print(f"k={k}: coefficients of the residual {[str(c) for c in r.exact_coefficients]}")

red = reduced_f0_residual(p, "0.01", 3, 2)
print("reduced f_0 equation at 2 beta, coefficients", [str(c) for c in red.exact_coefficients])
