"""Compare each two-window bound with the actual difference for one pair.

Run: python3 demos/02_bounds.py
"""

from chebdiff import bounds as bd
from chebdiff import verify as vf
from chebdiff.funcmodel import IntervalConfig

entry = vf.generate_corpus(seed=42, size=1, families=("polynomial",))[0]
print("f =", entry.f.source)
print("g =", entry.g.source)

cfg = IntervalConfig(0.0, 0.3, 0.8, 1.0)
print(f"\nwindows [a, v] = [0, 0.8] and [u, b] = [0.3, 1]\n")
print(f"{'bound':<18} {'lhs':>12} {'rhs':>12} {'lhs/rhs':>9}")
for theorem in bd.THEOREMS:
    rec = vf.check_theorem(entry, theorem, cfg)
    if rec is None:
        continue
    ratio = f"{rec.tightness:.4f}" if isinstance(rec.tightness, float) else rec.tightness
    print(f"{theorem:<18} {rec.lhs:12.6g} {rec.rhs:12.6g} {ratio:>9}")

# the classical equality witnesses
print()
for theorem, f_src in (("thm1/chebyshev", "x"), ("thm1/gruss", "sign(x - 0.5)")):
    from chebdiff.funcmodel import ClassConstants
    consts = ClassConstants(lp_norms={float("inf"): 1.0}, range_bounds=(-1.0, 1.0))
    e = vf.entry_from_sources(f_src, f_src, f_consts=consts, g_consts=consts)
    rec = vf.check_theorem(e, theorem, IntervalConfig(0, 0, 1, 1))
    print(f"{theorem} with f = g = {f_src}: lhs {rec.lhs:.12f}, rhs {rec.rhs:.12f}")
