"""Limits of the two-window bounds.

Collapsing the windows (v -> u) should recover the one-point corollary
forms, and merging them into [a, b] should recover the single-interval
pre-Grüss bound.

Run: python3 demos/04_limits.py
"""

from chebdiff import bounds as bd
from chebdiff import verify as vf
from chebdiff.funcmodel import IntervalConfig

cases = {
    "thm4.5.1/Linf": {"V": 1.0, "ginf": 1.0},
    "thm4.5.3/form1": {"V": 1.0, "H": 1.0, "p": 0.5},
    "thm4.5.5": {"V": 1.0, "ga": 0.0, "gu": 0.5, "gb": 1.0},
    "thm4.5.7/Linf": {"L": 1.0, "ginf": 1.0},
    "thm4.5.9": {"L": 1.0, "H": 1.0, "p": 1.0},
    "thm4.5.12/Lp": {"falpha": 1.0, "gp": 1.0, "alpha": 2.0, "p": 2.0},
}
print("general bound at u = 1/2, v = u + 1e-6 on [0, 1] with unit constants")
print(f"{'bound':<16} {'general':>10} {'collapsed':>10} {'midpoint':>10}")
for theorem, consts in cases.items():
    c = dict(consts, gv=0.5 + 1e-6)  # g = x for the monotone case
    general = bd.evaluate(theorem, IntervalConfig(0, 0.5, 0.5 + 1e-6, 1), c).rhs
    collapsed = bd.evaluate_corollary(theorem, 0, 0.5, 1, c).rhs
    midpoint = bd.evaluate_corollary(theorem, 0, 0.5, 1, c, midpoint=True).rhs
    print(f"{theorem:<16} {general:10.6f} {collapsed:10.6f} {midpoint:10.6f}")

entry = vf.entry_from_sources("x^2", "sin(3*x)")
print("\nf = x^2, g = sin 3x, first window [a, v], second window [a, b]")
for side, label in (("left", "v = a + eps"), ("right", "v = b - eps")):
    rep = vf.limit_consistency(entry, "thm4/eq2.2", "merge_to_full", (1e-1, 1e-2, 1e-3, 1e-4), side=side)
    print(f"  {label}: single-interval bound {rep.target:.6f}")
    for eps, value in zip(rep.eps, rep.values):
        print(f"    eps {eps:7.0e}   two-window level {value:.6f}")
