import json
import math

import pytest

from chebdiff import analyze as an
from chebdiff import bounds as bd
from chebdiff import verify as vf
from chebdiff.errors import PreconditionError
from chebdiff.funcmodel import ClassConstants, IntervalConfig


def _lip_consts(slope):
    return ClassConstants(total_variation=slope, lipschitz=slope, holder=(1.0, slope),
                          lp_norms={1.0: slope, 2.0: slope, math.inf: slope}, monotone_nondecreasing=True,
                          range_bounds=(0.0, slope))


class TestCorpus:
    def test_deterministic(self):
        a = vf.generate_corpus(7, 12)
        b = vf.generate_corpus(7, 12)
        assert [e.params for e in a] == [e.params for e in b]
        assert [e.f.constants for e in a] == [e.f.constants for e in b]

    def test_polynomial_entries(self):
        (e,) = vf.generate_corpus(1, 1, ("polynomial",))
        assert e.families == ("polynomial", "polynomial")
        assert e.f.constants.norm(math.inf) is not None and e.g.constants.norm(math.inf) is not None

    @pytest.mark.parametrize("family", vf.ALL_FAMILIES)
    def test_declared_constants_are_sound(self, family):
        for e in vf.generate_corpus(11, 6, (family,)):
            for spec in (e.f, e.g):
                assert an.audit_constants(spec) == [], (family, spec.source)

    def test_holder_root_constants(self):
        for e in vf.generate_corpus(3, 8, ("holder-root",)):
            p = e.params["f"]
            order, H = e.f.constants.holder
            assert order == p["order"] and order in vf.HOLDER_ORDERS
            assert abs(p["scale"]) <= H <= abs(p["scale"]) + 1e-8

    def test_errors(self):
        with pytest.raises(PreconditionError):
            vf.generate_corpus(1, 1, ())
        with pytest.raises(PreconditionError):
            vf.generate_corpus(1, 0)
        with pytest.raises(PreconditionError):
            vf.generate_corpus(1, 1, ("fractal",))

    def test_config_sampler(self):
        cfgs = vf.sample_configs(5, 50)
        assert cfgs == vf.sample_configs(5, 50)
        assert all(c.a <= c.u < c.v <= c.b and c.v - c.u >= 1e-3 for c in cfgs)
        assert vf.sample_configs(5, 5, stream=1) != cfgs[:5]


class TestCheckTheorem:
    def test_chebyshev_witness(self):
        e = vf.entry_from_sources("x", "x", f_consts=_lip_consts(1.0), g_consts=_lip_consts(1.0))
        r = vf.check_theorem(e, "thm1/chebyshev", IntervalConfig(0, 0, 1, 1))
        assert r.lhs == pytest.approx(1 / 12, abs=1e-12) and r.rhs == pytest.approx(1 / 12)
        assert r.passed and r.tightness == pytest.approx(1.0, abs=1e-6)

    def test_gruss_witness(self):
        c = ClassConstants(range_bounds=(-1.0, 1.0))
        e = vf.entry_from_sources("sign(x - 0.5)", "sign(x - 0.5)", f_consts=c, g_consts=c)
        r = vf.check_theorem(e, "thm1/gruss", IntervalConfig(0, 0, 1, 1))
        assert r.passed and r.tightness == pytest.approx(1.0, abs=1e-6)

    def test_identical_intervals_give_zero(self):
        for e in vf.generate_corpus(4, 5, ("polynomial", "holder-root")):
            r = vf.check_theorem(e, "thm4.5.9", IntervalConfig(0, 0, 1, 1))
            if r is not None:
                assert r.lhs == 0.0 and r.passed

    def test_missing_constants_are_skipped(self):
        e = vf.entry_from_sources("x", "x")
        assert vf.check_theorem(e, "thm4.5.1/Linf", IntervalConfig(0, 0.2, 0.6, 1)) is None

    def test_monotone_hypothesis_is_flagged(self):
        e = vf.entry_from_sources("x", "sin(6*x)", f_consts=_lip_consts(1.0),
                                  g_consts=ClassConstants(lp_norms={math.inf: 6.0}))
        r = vf.check_theorem(e, "thm4.5.5", IntervalConfig(0, 0.2, 0.6, 1))
        assert r is not None and not r.hypothesis_ok and not r.certified

    def test_record_round_trip(self):
        e = vf.generate_corpus(2, 1, ("trig",))[0]
        r = vf.check_theorem(e, "thm4/eq2.2", IntervalConfig(0, 0.3, 0.8, 1))
        back = vf.VerificationRecord.from_dict(json.loads(json.dumps(r.to_dict())))
        assert back == r


class TestSweep:
    def test_cardinality_and_order(self):
        corpus = vf.generate_corpus(5, 10, ("polynomial", "trig"))
        ths = ("thm1/chebyshev", "eq2.1", "thm4/eq2.2")
        recs = vf.sweep(corpus, ths, cfg_count=5)
        assert len(recs) == 150
        keys = [(r.entry, ths.index(r.theorem), r.cfg_index) for r in recs]
        assert keys == sorted(keys)

    def test_constant_corpus_all_pass(self):
        corpus = vf.generate_corpus(9, 4, ("constant",))
        recs = vf.sweep(corpus, cfg_count=3)
        assert recs and all(r.lhs == 0 and r.passed for r in recs)
        summary = vf.tightness_report(recs)
        assert all(s["pass_rate"] in (1.0, None) for s in summary.values())

    def test_deterministic(self):
        corpus = vf.generate_corpus(6, 3)
        a = [json.dumps(r.to_dict()) for r in vf.sweep(corpus, cfg_count=2)]
        b = [json.dumps(r.to_dict()) for r in vf.sweep(corpus, cfg_count=2)]
        assert a == b

    def test_pass_is_monotone_in_rhs(self):
        # with g = f the eq2.1 bound is attained, so halving it must fail
        corpus = vf.generate_corpus(8, 3, ("polynomial", "piecewise-linear"), same_pair=True)
        ths = ("eq2.1", "thm4.5.1/Linf", "bar4.3.1")
        by_scale = {s: vf.sweep(corpus, ths, cfg_count=4, scale_rhs=s) for s in (0.5, 1.0, 2.0)}
        for lo, hi in ((0.5, 1.0), (1.0, 2.0)):
            for r_lo, r_hi in zip(by_scale[lo], by_scale[hi]):
                assert not (r_lo.passed and not r_hi.passed)
        assert any(r.violation for r in by_scale[0.5])

    def test_bad_inputs(self):
        with pytest.raises(PreconditionError):
            vf.sweep([], cfg_count=1)
        with pytest.raises(PreconditionError):
            vf.sweep(vf.generate_corpus(1, 1), ("thm99",))

    def test_equal_pair_am_gm(self):
        for e in vf.generate_corpus(12, 4, same_pair=True):
            lv = bd.generalized_pre_gruss(e.f, e.g, IntervalConfig(0, 0.3, 0.7, 1))
            assert abs(lv.level1 - lv.level2) <= 1e-9


class TestLimits:
    def test_corollary_limit_decreases(self):
        e = vf.generate_corpus(2, 4, ("holder-root",))[0]
        rep = vf.limit_consistency(e, "thm4.5.3/form1", "v_to_u", u=0.3)
        assert rep.decreasing and rep.errors[-1] <= 1e-4 * rep.target

    def test_constant_entry_limits_are_zero(self):
        e = vf.generate_corpus(3, 1, ("constant",))[0]
        rep = vf.limit_consistency(e, "thm4/eq2.2", "merge_to_full")
        assert rep.values == (0.0, 0.0, 0.0) and rep.target == 0.0

    def test_left_merge_converges(self):
        e = vf.entry_from_sources("x^2", "sin(3*x)")
        rep = vf.limit_consistency(e, "thm4/eq2.2", "merge_to_full", side="left")
        assert rep.converged

    def test_schedule_must_decrease(self):
        e = vf.entry_from_sources("x", "x")
        with pytest.raises(PreconditionError):
            vf.limit_consistency(e, "thm4/eq2.2", "merge_to_full", eps_schedule=(1e-4, 1e-2))


class TestReport:
    def test_witness_max_tightness(self):
        e = vf.entry_from_sources("x", "x", f_consts=_lip_consts(1.0), g_consts=_lip_consts(1.0))
        recs = [vf.check_theorem(e, "thm1/chebyshev", IntervalConfig(0, 0, 1, 1)),
                vf.check_theorem(e, "thm1/chebyshev", IntervalConfig(0, 0.2, 0.6, 1), cfg_index=1)]
        rep = vf.tightness_report(recs)
        assert set(rep) == {"thm1/chebyshev"}
        assert rep["thm1/chebyshev"]["max_tightness"] == pytest.approx(1.0, abs=1e-6)
        assert rep["thm1/chebyshev"]["pass_rate"] == 1.0

    def test_empty(self):
        with pytest.raises(PreconditionError):
            vf.tightness_report([])
