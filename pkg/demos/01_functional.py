"""Evaluate the Čebyšev functional three ways and compare.

Run: python3 demos/01_functional.py
"""

from chebdiff import IntervalConfig, parse_function
from chebdiff.integrate import chebyshev_functional, chebyshev_via_identity, functional_difference

f = parse_function("x^2", (0, 1))
g = parse_function("sin(3*x)", (0, 1))

direct = chebyshev_functional(f, g, 0, 1)
print(f"T(x^2, sin 3x) on [0,1] from the definition: {direct.value:.15f} ± {direct.err_est:.1e}")
for which in ("cerone", "dragomir"):
    r = chebyshev_via_identity(f, g, 0, 1, which)
    print(f"  via the {which} kernel:                    {r.value:.15f} ± {r.err_est:.1e}")

# a step integrator is handled by summing the kernel over its jumps
step = parse_function("sign(x - 0.5)", (0, 1))
ident = parse_function("x", (0, 1))
print(f"\nT(sign(x - 1/2), x): definition {chebyshev_functional(step, ident, 0, 1).value:.15f}, "
      f"jump sum {chebyshev_via_identity(step, ident, 0, 1).value:.15f} (exact 1/4)")

# two overlapping windows [a, v] and [u, b]
cfg = IntervalConfig(0.0, 0.2, 0.7, 1.0)
d = functional_difference(f, g, cfg)
print(f"\nT on [0, 0.7] = {d.t_left.value:.10f}, T on [0.2, 1] = {d.t_right.value:.10f}, "
      f"|difference| = {d.diff_abs:.10f}")
