"""Where the printed closed forms fail, and the estimates they came from.

A small sweep finds configurations where the printed thm4.5.7 bound is
smaller than the actual difference.  The second part builds the extremal
function for the Lp mean-difference bound and evaluates it through the
library: its mean difference exceeds the printed bound and equals the
exact kernel norm.

Run: python3 demos/03_printed_vs_proof.py
"""

from chebdiff import bounds as bd
from chebdiff import verify as vf
from chebdiff.analyze import lp_norm
from chebdiff.funcmodel import differentiate, parse_function
from chebdiff.integrate import mean_difference

corpus = vf.generate_corpus(42, 30)
theorems = ("thm4.5.7/Linf", "thm4.5.9", "cer4.3.2/Lp")
for form in ("printed", "proof"):
    report = vf.tightness_report(vf.sweep(corpus, theorems, cfg_count=10, form=form))
    print(f"form={form}")
    for th, s in report.items():
        print(f"  {th:<14} violations {s['violations']:>3}   max lhs/rhs {s['max_tightness']:.4f}")

# f' equals the kernel of the mean difference for [c, d] = [0.2, 0.5] in [0, 1]
# unary minus binds tighter than ^, hence -(x^2)
src = ("piecewise((x < 0.2, -(x^2)/2), (x < 0.5, -(x^2)/2 + (x - 0.2)^2/0.6), "
       "x - x^2/2 - 0.35)")
f = parse_function(src, (0, 1))
exps = bd.ExponentPair.of(2.0)
norm = lp_norm(differentiate(f), 2).value
lhs = mean_difference(f, 0, 1, 0.2, 0.5).value
printed = bd.mean_diff_bound(0, 1, 0.2, 0.5, "Lp", norm=norm, exps=exps).rhs
proof = bd.mean_diff_bound(0, 1, 0.2, 0.5, "Lp", norm=norm, exps=exps, form="proof").rhs
print(f"\nextremal f on [0,1], [c,d] = [0.2, 0.5], p = 2, ||f'||_2 = {norm:.6f}")
print(f"  mean difference {lhs:.6f}")
print(f"  printed bound   {printed:.6f}")
print(f"  exact bound     {proof:.6f}")
