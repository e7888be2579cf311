"""Estimators for the class quantities consumed by the bound formulas.

Sup-norm, variation, Lipschitz and Hölder estimates are sampled maxima over
nested uniform grids (2**k + 1 points, k = 8..16) plus the breakpoints, so
they are lower bounds for the true quantities and never decrease when the
grid is refined.  Sampled extrema are polished by a bounded scalar search
for the sup norm and the variation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import PreconditionError
from .funcmodel import FunctionSpec, differentiate
from .integrate import DEFAULT_TOL, quad

EXACT = "exact-declared"
ESTIMATE = "numeric-estimate"
LEVELS = range(8, 17)
STOP_REL = 1e-8


@dataclass(frozen=True)
class NormValue:
    exponent: float
    value: float
    kind: str


def _check_exponent(p: float):
    if not p >= 1:
        raise PreconditionError(f"norm exponent must lie in [1, inf], got {p}")


def _grid(f: FunctionSpec, lo: float, hi: float, k: int) -> np.ndarray:
    """Nested grid of level ``k`` plus breakpoints and points just beside them."""
    t = np.linspace(lo, hi, 2 ** k + 1)
    if f.breakpoints:
        h = 1e-12 * max(hi - lo, 1.0)
        bp = np.array([x for x in f.breakpoints if lo <= x <= hi])
        t = np.union1d(t, np.clip(np.concatenate([bp - h, bp, bp + h]), lo, hi))
    return t


def _refine_levels(step: Callable[[int], float]) -> float:
    """Running maximum of ``step(k)`` over the level schedule, stopping once
    successive values agree to STOP_REL."""
    best = -math.inf
    for k in LEVELS:
        new = max(best, step(k))
        if best > -math.inf and abs(new - best) <= STOP_REL * max(abs(new), 1e-300):
            return new
        best = new
    return best


def lp_norm(f: FunctionSpec, p: float, lo: float | None = None, hi: float | None = None,
            tol: float = DEFAULT_TOL) -> NormValue:
    """``||f||_p`` on [lo, hi] (default: the domain of ``f``)."""
    _check_exponent(p)
    lo = f.domain[0] if lo is None else lo
    hi = f.domain[1] if hi is None else hi
    if math.isinf(p):
        return NormValue(math.inf, sup_abs(f, lo, hi), ESTIMATE)
    scale = max(1.0, float(np.max(np.abs(f(np.linspace(lo, hi, 33))))) ** p * (hi - lo))
    res = quad(lambda t, t_lo: np.abs(f.eval_offset(t, t_lo)) ** p, lo, hi, tol * scale,
               f.breakpoints, graded=True)
    return NormValue(float(p), max(res.value, 0.0) ** (1.0 / p), ESTIMATE)


def sup_abs(f: FunctionSpec, lo: float, hi: float) -> float:
    """Sampled maximum of |f|, polished around the best sample by a bounded
    scalar search."""
    def level(k):
        t = _grid(f, lo, hi, k)
        y = np.abs(f(t))
        y = np.where(np.isfinite(y), y, -np.inf)
        i = int(np.argmax(y))
        best = float(y[i])
        a, b = t[max(i - 1, 0)], t[min(i + 1, t.size - 1)]
        if b > a:
            r = minimize_scalar(lambda s: -abs(float(f(s))), bounds=(a, b), method="bounded",
                                options={"xatol": 1e-14 * max(1.0, abs(b))})
            if np.isfinite(r.fun):
                best = max(best, -float(r.fun))
        return best

    return _refine_levels(level)


def derivative_norm(f: FunctionSpec, p: float, lo: float | None = None, hi: float | None = None) -> NormValue:
    """``||f'||_p``: the declared constant when it covers the requested
    interval, a numeric value otherwise."""
    _check_exponent(p)
    lo = f.domain[0] if lo is None else lo
    hi = f.domain[1] if hi is None else hi
    declared = f.constants.norm(p)
    if declared is not None and (lo, hi) == f.domain:
        return NormValue(float(p), declared, EXACT)
    return lp_norm(differentiate(f), p, lo, hi)


def total_variation(f: FunctionSpec, lo: float | None = None, hi: float | None = None) -> NormValue:
    """Variation of ``f`` over [lo, hi]; declared value if available."""
    lo = f.domain[0] if lo is None else lo
    hi = f.domain[1] if hi is None else hi
    if f.constants.total_variation is not None and (lo, hi) == f.domain:
        return NormValue(1.0, f.constants.total_variation, EXACT)

    def level(k):
        t = _grid(f, lo, hi, k)
        return float(np.sum(np.abs(np.diff(f(_polish_extrema(f, t))))))

    return NormValue(1.0, _refine_levels(level), ESTIMATE)


def _polish_extrema(f: FunctionSpec, t: np.ndarray, limit: int = 512) -> np.ndarray:
    """Add to the grid ``t`` the refined location of every sampled local
    extremum, so the variation sum does not stall on a coarse grid."""
    y = f(t)
    dy = np.diff(y)
    turns = np.nonzero(dy[:-1] * dy[1:] < 0)[0] + 1
    extra = []
    for i in turns[:limit]:
        sign = 1.0 if dy[i - 1] > 0 else -1.0
        r = minimize_scalar(lambda s: -sign * float(f(s)), bounds=(t[i - 1], t[i + 1]), method="bounded",
                            options={"xatol": 1e-14 * max(1.0, abs(t[i]))})
        if np.isfinite(r.fun):
            extra.append(float(r.x))
    return np.union1d(t, extra) if extra else t


def _max_ratio(f: FunctionSpec, lo: float, hi: float, order: float, k: int) -> float:
    t = _grid(f, lo, hi, k)
    y = f(t)
    # round-off in each sample; removing it keeps the quotient a lower bound
    noise = 4 * np.finfo(float).eps * float(np.max(np.abs(y), initial=0.0))
    best = 0.0
    lag = 1
    while lag < t.size:
        dt = t[lag:] - t[:-lag]
        ok = dt > 0
        ratio = np.maximum(np.abs(y[lag:] - y[:-lag])[ok] - noise, 0.0) / dt[ok] ** order
        if ratio.size:
            best = max(best, float(np.max(ratio)))
        lag *= 2
    return best


def lipschitz_estimate(f: FunctionSpec, lo: float | None = None, hi: float | None = None) -> NormValue:
    """Largest sampled difference quotient (a lower bound for L)."""
    lo = f.domain[0] if lo is None else lo
    hi = f.domain[1] if hi is None else hi
    return NormValue(math.inf, _refine_levels(lambda k: _max_ratio(f, lo, hi, 1.0, k)), ESTIMATE)


def holder_estimate(f: FunctionSpec, order: float, lo: float | None = None, hi: float | None = None) -> NormValue:
    """Largest sampled ``|f(x) - f(y)| / |x - y|**order`` over pairs at
    power-of-two separations on each grid."""
    if not 0 < order <= 1:
        raise PreconditionError(f"Hölder order must lie in (0, 1], got {order}")
    lo = f.domain[0] if lo is None else lo
    hi = f.domain[1] if hi is None else hi
    return NormValue(order, _refine_levels(lambda k: _max_ratio(f, lo, hi, order, k)), ESTIMATE)


def beta(x: float, y: float) -> float:
    """Euler Beta function Γ(x)Γ(y)/Γ(x+y)."""
    if not (x > 0 and y > 0):
        raise PreconditionError(f"Beta needs positive arguments, got ({x}, {y})")
    if x + y < 100:
        return math.gamma(x) * math.gamma(y) / math.gamma(x + y)
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def audit_constants(f: FunctionSpec, slack: float = 1e-9) -> list[str]:
    """Declared constants of ``f`` that a sampled witness exceeds.

    An empty list means every declared value is at least its numeric
    estimate (up to ``slack``, relative to 1 + the value).
    """
    c = f.constants
    lo, hi = f.domain
    problems = []

    def check(name, declared, estimate):
        if estimate > declared + slack * (1 + abs(declared)):
            problems.append(f"{name}: declared {declared!r} < sampled {estimate!r}")

    if c.total_variation is not None:
        check("total_variation", c.total_variation, total_variation(f.with_constants(type(c)())).value)
    if c.lipschitz is not None:
        check("lipschitz", c.lipschitz, lipschitz_estimate(f).value)
    if c.holder is not None:
        check(f"holder{c.holder[0]}", c.holder[1], holder_estimate(f, c.holder[0]).value)
    if c.range_bounds is not None:
        y = f(_grid(f, lo, hi, 12))
        m, M = c.range_bounds
        check("range_min", -m, float(-np.min(y)))
        check("range_max", M, float(np.max(y)))
    if c.lp_norms:
        d = differentiate(f)
        for p, declared in sorted(c.lp_norms.items()):
            est = sup_abs(d, lo, hi) if math.isinf(p) else lp_norm(d, p, lo, hi, tol=1e-12).value
            check(f"norm{p}", declared, est)
    return problems
