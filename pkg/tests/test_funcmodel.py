import math

import numpy as np
import pytest

from chebdiff.errors import DomainViolationError, NonDifferentiableError, PreconditionError
from chebdiff.funcmodel import (ClassConstants, IntervalConfig, derivative_discrepancy, differentiate,
                                evaluate, parse_function)


def test_parse_and_evaluate():
    f = parse_function("x^2", (0, 1))
    assert evaluate(f, 0.5) == 0.25
    np.testing.assert_allclose(evaluate(f, [0.0, 1.0]), [0.0, 1.0])
    with pytest.raises(DomainViolationError):
        evaluate(f, 1.5)


@pytest.mark.parametrize("src, domain", [
    ("log(x)", (0, 1)),
    ("1/(x - 0.5)", (0, 1)),
    ("sqrt(x - 0.5)", (0, 1)),
    ("1/x", (-1, 1)),
])
def test_domain_violations(src, domain):
    with pytest.raises(DomainViolationError):
        parse_function(src, domain)


def test_degenerate_domain():
    with pytest.raises(PreconditionError):
        parse_function("x", (1, 1))


@pytest.mark.parametrize("src, expected", [
    ("abs(x - 0.3)", [0.3]),
    ("sign(x - 0.25) + abs(x - 0.75)", [0.25, 0.75]),
    ("piecewise((x < 0.4, 1), 2)", [0.4]),
    ("abs(x - 0.37)^0.25", [0.37]),
    ("x^2 + 1", []),
])
def test_breakpoints_are_found(src, expected):
    f = parse_function(src, (0, 1))
    np.testing.assert_allclose(f.breakpoints, expected, rtol=0, atol=1e-15)


def test_affine_breakpoint_is_exact():
    # the root of x - 0.1 must be the float 0.1 itself, not a neighbour
    f = parse_function("abs(x - 0.1)^0.5", (0, 1))
    assert f.breakpoints == (0.1,)


def test_jumps_and_step_detection():
    step = parse_function("sign(x - 0.5)", (0, 1))
    assert step.jumps == ((0.5, pytest.approx(2.0)),)
    assert step.is_step and not step.is_continuous
    kink = parse_function("abs(x - 0.5)", (0, 1))
    assert kink.jumps == () and kink.is_continuous and not kink.is_step
    root = parse_function("abs(x - 0.5)^0.25", (0, 1))
    assert root.is_continuous


@pytest.mark.parametrize("src", ["x^3 - x", "sin(4*x) + x", "abs(x - 0.3)^1.5", "exp(x) * cos(x)"])
def test_symbolic_derivative_agrees_with_finite_differences(src):
    assert derivative_discrepancy(parse_function(src, (0, 1))) < 1e-6


def test_derivative_is_cached_and_skips_domain_check():
    f = parse_function("sqrt(abs(x - 0.5))", (0, 1))
    d = differentiate(f)
    assert differentiate(f) is d
    assert d.breakpoints == (0.5,)


def test_unresolvable_breakpoints():
    # infinitely many sign changes near 0 cannot be isolated
    f = parse_function("abs(sin(1/(x + 1e-9)))", (0, 1))
    with pytest.raises(NonDifferentiableError):
        differentiate(f)


def test_offset_evaluation_matches_plain_away_from_breakpoints():
    f = parse_function("0.7*abs(x - 0.37)^0.25 + x", (0, 1))
    t = np.linspace(0, 1, 17)
    np.testing.assert_allclose(f.eval_offset(t, np.zeros_like(t)), f(t), rtol=1e-15)


def test_function_spec_is_immutable():
    f = parse_function("x", (0, 1))
    with pytest.raises(AttributeError):
        f.domain = (0, 2)


class TestClassConstants:
    def test_validation(self):
        with pytest.raises(PreconditionError):
            ClassConstants(total_variation=-1)
        with pytest.raises(PreconditionError):
            ClassConstants(holder=(1.5, 1.0))
        with pytest.raises(PreconditionError):
            ClassConstants(lp_norms={0.5: 1.0})
        with pytest.raises(PreconditionError):
            ClassConstants(range_bounds=(1.0, 0.0))

    def test_round_trip_through_dict(self):
        c = ClassConstants(total_variation=2.0, lipschitz=3.0, holder=(0.5, 1.0),
                           lp_norms={1.0: 1.0, 2.0: 1.5, math.inf: 3.0}, monotone_nondecreasing=True,
                           range_bounds=(-1.0, 1.0))
        back = ClassConstants.from_dict(c.to_dict())
        assert back == c
        assert back.norm(math.inf) == 3.0 and back.norm(2) == 1.5 and back.norm(3) is None


class TestIntervalConfig:
    def test_overlap_and_nested_intervals(self):
        cfg = IntervalConfig(0, 0.25, 0.75, 1)
        assert cfg.first == (0, 0.75) and cfg.second == (0.25, 1)
        assert cfg.formula_points() == (0, 0.25, 0.75, 1)
        nested = IntervalConfig(0, 0.25, 0.75, 1, "nested")
        assert nested.first == (0.25, 0.75) and nested.second == (0, 1)
        assert nested.formula_points() == (0.25, 0, 0.75, 1)

    def test_ordering_is_enforced(self):
        with pytest.raises(PreconditionError):
            IntervalConfig(0, 0.5, 0.5, 1)
        with pytest.raises(PreconditionError):
            IntervalConfig(0, 0.6, 0.4, 1)
        with pytest.raises(PreconditionError):
            IntervalConfig(0, 0.2, 0.4, 1, "sideways")

    def test_degenerate_and_midpoint(self):
        assert IntervalConfig(0, 0, 1, 1).degenerate
        m = IntervalConfig.midpoint(0, 2, 1e-3)
        assert (m.u, m.v) == (1.0, 1.001)
