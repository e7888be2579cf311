import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate

from chebdiff import bounds as bd
from chebdiff.errors import MissingConstantError, PreconditionError
from chebdiff.funcmodel import ClassConstants, IntervalConfig, parse_function
from chebdiff.integrate import chebyshev_functional, functional_difference, mean_difference

CFG = IntervalConfig(0, 0.25, 0.75, 1)


def fn(src, consts=None):
    return parse_function(src, (0.0, 1.0), consts)


class TestClassical:
    def test_chebyshev_witness_is_sharp(self):
        c = ClassConstants(lp_norms={math.inf: 1.0})
        f = fn("x", c)
        (r,) = bd.classical_bounds(f, f, 0, 1, ("chebyshev",))
        lhs = chebyshev_functional(f, f, 0, 1).value
        assert r.rhs == pytest.approx(1 / 12, rel=1e-15)
        assert abs(lhs - r.rhs) <= 1e-8

    def test_gruss_witness_is_sharp(self):
        f = fn("sign(x - 0.5)", ClassConstants(range_bounds=(-1.0, 1.0)))
        (r,) = bd.classical_bounds(f, f, 0, 1, ("gruss",))
        assert r.rhs == 1.0
        assert abs(chebyshev_functional(f, f, 0, 1).value - r.rhs) <= 1e-8

    def test_constant_f_gives_zero(self):
        f = fn("3", ClassConstants(lp_norms={math.inf: 0.0}))
        g = fn("x", ClassConstants(lp_norms={math.inf: 1.0}))
        (r,) = bd.classical_bounds(f, g, 0, 1, ("chebyshev",))
        assert r.rhs == 0.0

    def test_formulas(self):
        assert bd.lupas_bound(0, 2, 1, 1).rhs == pytest.approx(2 / math.pi ** 2)
        assert bd.ostrowski_bound(0, 1, -1, 1, 2).rhs == pytest.approx(0.5)

    def test_missing_constants(self):
        f = fn("x")
        assert bd.classical_bounds(f, f, 0, 1) == []
        with pytest.raises(MissingConstantError):
            bd.classical_bounds(f, f, 0, 1, ("lupas",))


class TestPreGruss:
    def test_equal_functions(self):
        f = fn("x")
        lv = bd.pre_gruss_bound(f, f, 0, 1)
        assert lv.level1 == pytest.approx(1 / 12, abs=1e-12)
        assert lv.level2 == pytest.approx(1 / 12, abs=1e-12)

    def test_distinct_functions(self):
        f, g = fn("x"), fn("x^2")
        lv = bd.pre_gruss_bound(f, g, 0, 1)
        assert lv.level1 == pytest.approx(math.sqrt(1 / 12) * math.sqrt(4 / 45), abs=1e-12)
        assert chebyshev_functional(f, g, 0, 1).value <= lv.level1
        assert lv.level1 <= lv.level2 + 1e-12

    def test_constant_gives_zero(self):
        assert bd.pre_gruss_bound(fn("2"), fn("x"), 0, 1).level1 == 0.0

    def test_generalized(self):
        f = fn("x")
        lv = bd.generalized_pre_gruss(f, f, CFG)
        assert lv.level1 == pytest.approx(3 / 32, abs=1e-12)
        assert lv.level2 == pytest.approx(3 / 32, abs=1e-12)

    def test_generalized_full_interval_is_twice_the_single_bound(self):
        f, g = fn("sin(3*x)"), fn("x^2")
        single = bd.pre_gruss_bound(f, g, 0, 1).level1
        assert bd.generalized_pre_gruss(f, g, IntervalConfig(0, 0, 1, 1)).level1 == pytest.approx(2 * single)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.0, 0.45), st.floats(0.55, 1.0))
    def test_levels_are_ordered(self, u, v):
        f, g = fn("abs(x - 0.37)^0.25"), fn("cos(2*x)")
        lv = bd.generalized_pre_gruss(f, g, IntervalConfig(0, u, v, 1))
        assert lv.level1 <= lv.level2 + 1e-12
        assert functional_difference(f, g, IntervalConfig(0, u, v, 1)).diff_abs <= lv.level1 + lv.err_est + 1e-9


def _kernel_norm(a, b, c, d, q):
    # K with mean_[a,b] f - mean_[c,d] f = int K f'
    def k(t):
        base = -(t - a) / (b - a)
        if c <= t <= d:
            base += (t - c) / (d - c)
        elif t > d:
            base += 1.0
        return abs(base) ** q

    val, _ = sp_integrate.quad(k, a, b, points=[c, d], epsabs=1e-14, epsrel=1e-13)
    return val ** (1 / q)


class TestMeanDifference:
    def test_linf_is_attained(self):
        r = bd.mean_diff_bound(0, 1, 0, 0.5, "Linf", norm=1.0)
        assert r.rhs == pytest.approx(0.25)
        assert mean_difference(fn("x"), 0, 1, 0, 0.5).value == pytest.approx(0.25)
        assert bd.mean_diff_bound(0, 1, 0, 0.5, "Linf", norm=1.0, coarse=True).rhs >= r.rhs

    def test_holder_and_bv_reductions(self):
        assert bd.mean_diff_bound(0, 1, 0.2, 0.5, "holder", H=0.0, order=0.5).rhs == 0.0
        # midpoints coincide: only the half-gap term remains
        r = bd.mean_diff_bound(0, 1, 0.25, 0.75, "bv", V=2.0)
        assert r.rhs == pytest.approx((1 - 0.5) / 2 * 2.0)

    def test_degenerate_denominator(self):
        with pytest.raises(PreconditionError):
            bd.mean_diff_bound(0, 1, 0, 1, "Linf", norm=1.0)
        with pytest.raises(PreconditionError):
            bd.mean_diff_bound(0, 1, 0.6, 0.4, "L1", norm=1.0)

    @pytest.mark.parametrize("c, d, p", [(0.2, 0.5, 2.0), (0.1, 0.3, 3.0), (0.0, 0.4, 1.5), (0.3, 0.9, 2.0)])
    def test_lp_proof_form_is_the_kernel_norm(self, c, d, p):
        exps = bd.ExponentPair.of(p)
        r = bd.mean_diff_bound(0, 1, c, d, "Lp", norm=1.0, exps=exps, form="proof")
        assert r.rhs == pytest.approx(_kernel_norm(0, 1, c, d, exps.q), rel=1e-9)

    def test_kernel_represents_the_mean_difference(self):
        # f = x^2, f' = 2t: int K f' must equal the mean difference
        a, b, c, d = 0.0, 1.0, 0.2, 0.5
        def kf(t):
            base = -(t - a) / (b - a) + ((t - c) / (d - c) if c <= t <= d else (1.0 if t > d else 0.0))
            return base * 2 * t
        val, _ = sp_integrate.quad(kf, a, b, points=[c, d], epsabs=1e-14)
        assert val == pytest.approx(mean_difference(fn("x^2"), a, b, c, d).value, abs=1e-12)

    def test_printed_lp_form_falls_below_the_attained_value(self):
        exps = bd.ExponentPair.of(2.0)
        printed = bd.mean_diff_bound(0, 1, 0.2, 0.5, "Lp", norm=1.0, exps=exps).rhs
        assert printed < _kernel_norm(0, 1, 0.2, 0.5, 2.0) - 1e-3


class TestTwoIntervalBounds:
    def test_bv_abscont_examples(self):
        r = bd.bound_bv_abscont(1.0, CFG, "Linf", 1.0)
        assert r.rhs == pytest.approx(3 / 32)
        assert functional_difference(fn("x"), fn("x"), CFG).diff_abs <= r.rhs
        for case in ("Linf", "Lp", "L1"):
            assert bd.bound_bv_abscont(1.0, CFG, case, 0.0, bd.ExponentPair.of(2)).rhs == 0.0
        assert bd.bv_abscont_corollary(1.0, 0, 0.5, 1, "Linf", 1.0, midpoint=True).rhs == pytest.approx(1 / 16)

    def test_bv_holder_examples(self):
        f1, f2 = bd.bound_bv_holder(1.0, 1.0, 1.0, CFG)
        assert f1.rhs == pytest.approx(3 / 16) and f2.rhs == pytest.approx(3 / 16)
        assert all(r.rhs == 0 for r in bd.bound_bv_holder(1.0, 0.0, 0.5, CFG))
        (mid,) = bd.bv_holder_corollary(1.0, 1.0, 0.5, 0, 0.5, 1, midpoint=True)
        g1, g2 = bd.bv_holder_corollary(1.0, 1.0, 0.5, 0, 0.5, 1)
        assert g1.rhs == pytest.approx(mid.rhs) and g2.rhs == pytest.approx(mid.rhs)

    def test_bv_monotone_examples(self):
        g_at = {"ga": 0.0, "gu": 0.25, "gv": 0.75, "gb": 1.0}
        assert bd.bound_bv_monotone(1.0, g_at, CFG).rhs == pytest.approx(3 / 16)
        assert bd.bound_bv_monotone(1.0, dict.fromkeys(g_at, 2.0), CFG).rhs == 0.0
        assert bd.bv_monotone_corollary(1.0, 0.0, 0.5, 1.0, midpoint=True).rhs == pytest.approx(0.5)
        bad = bd.bound_bv_monotone(1.0, {"ga": 0.0, "gu": 0.5, "gv": 0.25, "gb": 1.0}, CFG)
        assert not bad.preconditions_ok

    def test_lip_abscont_examples(self):
        assert bd.bound_lip_abscont(1.0, CFG, "Linf", 1.0).rhs == pytest.approx(1 / 48)
        assert bd.bound_lip_abscont(1.0, CFG, "Linf", 0.0).rhs == 0.0
        assert bd.lip_abscont_corollary(1.0, 0, 0.5, 1, "Linf", 1.0, midpoint=True).rhs == pytest.approx(1 / 24)
        r = bd.bound_lip_abscont(1.0, IntervalConfig(0, 0, 1, 1), "Linf", 1.0)
        assert r.rhs == 0.0 and bd.DEGENERATE in r.notes

    def test_lip_abscont_proof_form_dominates_witness(self):
        cfg = IntervalConfig(0, 0.1, 0.3, 1)
        lhs = functional_difference(fn("x"), fn("x"), cfg).diff_abs
        assert lhs <= bd.bound_lip_abscont(1.0, cfg, "Linf", 1.0, form="proof").rhs

    def test_lip_holder_examples(self):
        r = bd.bound_lip_holder(1.0, 1.0, 1.0, CFG)
        assert r.rhs == pytest.approx(1 / 12 * 0.75 ** 2)
        assert bd.lip_holder_corollary(1.0, 1.0, 1.0, 0, 0.5, 1, midpoint=True).rhs == pytest.approx(1 / 24)
        assert bd.bound_lip_holder(1.0, 0.0, 0.5, CFG).rhs == 0.0
        with pytest.raises(PreconditionError):
            bd.bound_lip_holder(1.0, 1.0, 1.5, CFG)

    def test_abscont_pair_examples(self):
        two = bd.ExponentPair.of(2.0)
        mid = bd.abscont_pair_corollary(1.0, two, 0, 0.5, 1, "Linf", 1.0, midpoint=True)
        assert mid.rhs == pytest.approx(1 / math.sqrt(2) / math.sqrt(30), rel=1e-12)
        r = bd.abscont_pair_matched(1.0, two, CFG, 1.0, "alpha=p")
        brute_beta, _ = sp_integrate.quad(lambda t: t ** 2 * (1 - t), 0, 1)
        expected = 2 * 0.75 ** 1.5 / math.sqrt(3) * math.sqrt(brute_beta)
        assert r.rhs == pytest.approx(expected, rel=1e-12)
        for case in ("Linf", "Lp", "L1"):
            assert bd.bound_abscont_pair(0.0, two, CFG, case, 1.0, two).rhs == 0.0

    def test_exponent_pairs(self):
        with pytest.raises(PreconditionError):
            bd.ExponentPair(2.0, 3.0)
        assert bd.ExponentPair.of(3.0).q == pytest.approx(1.5)


LEBESGUE = {"V": 1.3, "L": 0.7, "finf": 1.1, "ginf": 0.9, "gp": 1.2, "g1": 0.8, "fp": 1.4, "f1": 0.6,
            "f2": 1.05, "g2": 0.95, "falpha": 1.15, "p": 2.0, "alpha": 3.0}
HOLDER = {"V": 1.3, "L": 0.7, "H": 1.7, "p": 0.5}
LINEAR_KEYS = {
    "thm1/chebyshev": ("finf", "ginf"), "thm1/lupas": ("f2", "g2"),
    "bar4.3.1": ("finf",), "bar4.3.1/coarse": ("finf",), "cer4.3.2/Lp": ("fp",), "cer4.3.2/L1": ("f1",),
    "cer4.3.3": ("H",), "cer4.3.4/bv": ("V",), "cer4.3.4/lipschitz": ("L",),
    "thm4.5.1/Linf": ("V", "ginf"), "thm4.5.1/Lp": ("V", "gp"), "thm4.5.1/L1": ("V", "g1"),
    "thm4.5.3/form1": ("V", "H"), "thm4.5.3/form2": ("V", "H"),
    "thm4.5.7/Linf": ("L", "ginf"), "thm4.5.7/Lp": ("L", "gp"), "thm4.5.9": ("L", "H"),
    "thm4.5.12/Linf": ("falpha", "ginf"), "thm4.5.12/Lp": ("falpha", "gp"), "thm4.5.12/L1": ("falpha", "g1"),
}


def _consts(theorem):
    return HOLDER if theorem in ("cer4.3.3", "thm4.5.3/form1", "thm4.5.3/form2", "thm4.5.9") else LEBESGUE


configs = st.tuples(st.floats(0.0, 1.0), st.floats(0.0, 1.0)).map(lambda t: (0.0, min(t), max(t)))


class TestProperties:
    @pytest.mark.parametrize("theorem", sorted(LINEAR_KEYS))
    @settings(max_examples=20, deadline=None)
    @given(configs)
    def test_linear_in_each_constant_and_nonnegative(self, theorem, pts):
        u, v = pts[1], pts[2]
        if v - u < 1e-3 or 1 - (v - u) < 1e-6:
            return
        cfg = IntervalConfig(0, u, v, 1)
        base = _consts(theorem)
        r = bd.evaluate(theorem, cfg, base)
        assert r.rhs >= 0
        for key in LINEAR_KEYS[theorem]:
            doubled = bd.evaluate(theorem, cfg, {**base, key: 2 * base[key]})
            assert doubled.rhs == pytest.approx(2 * r.rhs, rel=1e-12, abs=1e-300)

    def test_evaluate_covers_every_identifier(self):
        extra = {"m1": -1.0, "M1": 1.0, "m2": 0.0, "M2": 2.0, "m": 0.0, "M": 1.0,
                 "ga": 0.0, "gu": 0.2, "gv": 0.6, "gb": 1.0, "fa": 0.0, "fb": 1.0, "fs0": 0.5}
        cfg = IntervalConfig(0, 0.2, 0.6, 1)
        for theorem in bd.THEOREMS:
            if theorem in ("eq2.1", "thm4/eq2.2"):
                continue
            r = bd.evaluate(theorem, cfg, {**_consts(theorem), **extra})
            assert r.theorem == theorem and r.rhs >= 0

    def test_unknown_identifier_and_missing_constant(self):
        with pytest.raises(PreconditionError):
            bd.evaluate("thm9", CFG, {})
        with pytest.raises(MissingConstantError):
            bd.evaluate("thm4.5.9", CFG, {"L": 1.0})

    def test_nested_printed_thm457_is_clamped(self):
        cfg = IntervalConfig(0, 0.1, 0.2, 1, "nested")
        r = bd.evaluate("thm4.5.7/Linf", cfg, LEBESGUE)
        assert r.rhs >= 0

    def test_proof_forms_for_nested_thm451(self):
        cfg = IntervalConfig(0, 0.1, 0.3, 1, "nested")
        printed = bd.evaluate("thm4.5.1/Lp", cfg, LEBESGUE).rhs
        proof = bd.evaluate("thm4.5.1/Lp", cfg, LEBESGUE, form="proof")
        assert "proof form" in proof.notes and proof.rhs != printed

    @pytest.mark.parametrize("theorem", ["thm4.5.1/Linf", "thm4.5.3/form1", "thm4.5.3/form2", "thm4.5.7/Linf"])
    def test_corollary_limit(self, theorem):
        base = _consts(theorem)
        a, b, u = 0.0, 1.0, 0.3
        general = bd.evaluate(theorem, IntervalConfig(a, u, u + 1e-6, b), base).rhs
        corollary = bd.evaluate_corollary(theorem, a, u, b, base).rhs
        assert general == pytest.approx(corollary, rel=1e-4)

    def test_scaled_result(self):
        r = bd.chebyshev_bound(0, 1, 1, 1).scaled(0.5)
        assert r.rhs == pytest.approx(1 / 24) and r.notes
        assert r.to_dict()["theorem"] == "thm1/chebyshev"
