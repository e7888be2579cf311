"""Adaptive quadrature and the functionals built on it.

The core rule is a 7/15-point Gauss-Kronrod pair applied to many panels at
once.  Panels are pre-split at the breakpoints of the integrand, refined by
bisection, and the run stops as soon as the summed error estimate is below
the tolerance.  Error estimates are heuristic (|K15 - G7| with a round-off
floor), not rigorous enclosures.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import expr as ex
from .errors import DomainViolationError, NonDifferentiableError, PreconditionError, QuadratureError
from .funcmodel import FunctionSpec, IntervalConfig, differentiate

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 1_000_000
GRADING = 4

_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
                0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327])
NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
W_KRONROD = np.concatenate([_WK[:-1], _WK[::-1]])
W_GAUSS = np.concatenate([_WG[:-1], _WG[::-1]])
_EPS = np.finfo(float).eps


def eval_budget() -> int:
    """Evaluation budget per call; the CHEB_BUDGET environment variable overrides it."""
    raw = os.environ.get("CHEB_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    evals: int
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class TwoFunctionalDiff:
    t_left: QuadResult
    t_right: QuadResult
    diff_abs: float
    err_total: float
    flags: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class Panels:
    """Accepted panels of an adaptive run, sorted left to right."""

    lo: np.ndarray
    hi: np.ndarray
    value: np.ndarray
    err: np.ndarray


def _gk(fn: Callable, lo: np.ndarray, hi: np.ndarray):
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    t = c[:, None] + h[:, None] * NODES[None, :]
    with np.errstate(all="ignore"):
        y = np.asarray(fn(t.ravel()), dtype=float).reshape(t.shape)
    bad = ~np.isfinite(y)
    nonfinite = bool(bad.any())
    if nonfinite:
        y = np.where(bad, 0.0, y)
    k = h * (y @ W_KRONROD)
    g = h * (y @ W_GAUSS)
    absint = np.abs(h) * (np.abs(y) @ W_KRONROD)
    err = np.maximum(np.abs(k - g), 50 * _EPS * absint)
    return k, err, absint, nonfinite


def adaptive(fn: Callable, edges: Sequence[float], tol: float, budget: int | None = None,
             keep_panels: bool = False) -> tuple[QuadResult, Panels | None]:
    """Integrate a vectorised ``fn`` over ``[edges[0], edges[-1]]``.

    ``edges`` are the initial panel boundaries (breakpoints included).
    """
    if not tol > 0:
        raise PreconditionError(f"tolerance must be positive, got {tol}")
    budget = eval_budget() if budget is None else budget
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    width = float(edges[-1] - edges[0])
    flags: set[str] = set()
    done_val: list[np.ndarray] = []
    done_err: list[np.ndarray] = []
    done_lo: list[np.ndarray] = []
    done_hi: list[np.ndarray] = []
    acc_err = 0.0
    evals = 0
    first = True
    while lo.size:
        if evals + lo.size * NODES.size > budget:
            raise QuadratureError(
                f"tolerance {tol:g} not reached within {budget} evaluations "
                f"({lo.size} panels still open)")
        k, err, absint, nonfinite = _gk(fn, lo, hi)
        evals += lo.size * NODES.size
        if nonfinite:
            flags.add("nonfinite samples ignored")
        if first:
            first = False
            floor = 100 * _EPS * float(np.sum(absint))
            if floor > tol:
                tol = floor
                flags.add("tolerance raised to round-off level")
        if acc_err + float(np.sum(err)) <= tol:
            done_val.append(k), done_err.append(err), done_lo.append(lo), done_hi.append(hi)
            acc_err += float(np.sum(err))
            lo = lo[:0]
            break
        local = tol * (hi - lo) / width
        mid = 0.5 * (lo + hi)
        tiny = (mid <= lo) | (mid >= hi)
        accept = (err <= local) | tiny
        if np.any(tiny & (err > local)):
            flags.add("unsplittable panel")
        done_val.append(k[accept]), done_err.append(err[accept])
        done_lo.append(lo[accept]), done_hi.append(hi[accept])
        acc_err += float(np.sum(err[accept]))
        lo, hi, mid = lo[~accept], hi[~accept], mid[~accept]
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    if acc_err > tol * (1 + 1e-12):
        raise QuadratureError(f"tolerance {tol:g} not reached (error estimate {acc_err:g})")
    vals = np.concatenate(done_val)
    result = QuadResult(math.fsum(vals.tolist()), acc_err, evals, tuple(sorted(flags)))
    panels = None
    if keep_panels:
        plo, phi = np.concatenate(done_lo), np.concatenate(done_hi)
        order = np.argsort(plo, kind="stable")
        panels = Panels(plo[order], phi[order], vals[order], np.concatenate(done_err)[order])
    return result, panels


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _graded(fn: Callable, edges: np.ndarray) -> Callable:
    """Integrand over [0, n] whose unit pieces map onto the pieces of ``edges``
    through a map with vanishing derivatives at both ends, which absorbs
    algebraic end-point singularities.

    ``fn(x, x_lo)`` receives each point as a float plus a correction, so that
    points closer to a piece end than its float spacing stay distinct.
    """
    left, right = edges[:-1], edges[1:]
    w = right - left
    n = w.size
    m = GRADING

    def mapped(tau):
        k = np.clip(np.floor(tau).astype(int), 0, n - 1)
        s = tau - k
        sm, rm = s ** m, (1 - s) ** m
        den = sm + rm
        near_left = s <= 0.5
        x_l, lo_l = _two_sum(left[k], w[k] * (sm / den))
        x_r, lo_r = _two_sum(right[k], -w[k] * (rm / den))
        x = np.where(near_left, x_l, x_r)
        x_lo = np.where(near_left, lo_l, lo_r)
        jac = w[k] * m * s ** (m - 1) * (1 - s) ** (m - 1) / den ** 2
        return fn(x, x_lo) * jac

    return mapped


def quad(fn: Callable, lo: float, hi: float, tol: float = DEFAULT_TOL, breakpoints: Sequence[float] = (),
         graded: bool = False, budget: int | None = None) -> QuadResult:
    """Integral of a vectorised callable over [lo, hi], split first at ``breakpoints``.

    ``graded=True`` integrates every piece through a smoothing change of
    variables; use it when the integrand has integrable singularities at
    piece ends.  In that mode ``fn`` is called as ``fn(x, x_lo)``.
    """
    if hi == lo:
        return QuadResult(0.0, 0.0, 0)
    if not hi > lo:
        raise PreconditionError(f"integration bounds need lo <= hi, got [{lo}, {hi}]")
    edges = np.array([lo] + sorted(t for t in set(breakpoints) if lo < t < hi) + [hi], dtype=float)
    if graded:
        res, _ = adaptive(_graded(fn, edges), np.arange(edges.size, dtype=float), tol, budget)
        return res
    res, _ = adaptive(fn, edges, tol, budget)
    return res


def _check_cover(f: FunctionSpec, lo: float, hi: float):
    if lo < f.domain[0] or hi > f.domain[1]:
        raise DomainViolationError(f"[{lo}, {hi}] is not inside the domain {f.domain} of {f.source!r}")


def integrate(f: FunctionSpec, lo: float, hi: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """``∫_lo^hi f`` with breakpoint-aware adaptive refinement."""
    _check_cover(f, lo, hi)
    return quad(f, lo, hi, tol, f.breakpoints)


def _coarse_mean_abs(f: FunctionSpec, lo: float, hi: float) -> float:
    t = np.linspace(lo, hi, 33)
    return float(np.mean(np.abs(f(t))))


def chebyshev_functional(f: FunctionSpec, g: FunctionSpec, lo: float, hi: float,
                         tol: float = DEFAULT_TOL) -> QuadResult:
    """mean(fg) - mean(f)·mean(g) over [lo, hi] from three adaptive integrals.

    Each integral gets a third of the error budget, scaled by a coarse
    magnitude estimate of the factor it is multiplied by.
    """
    if not hi > lo:
        raise PreconditionError(f"degenerate interval [{lo}, {hi}]")
    _check_cover(f, lo, hi)
    _check_cover(g, lo, hi)
    if ex.is_constant(f.expr) or ex.is_constant(g.expr):
        # the functional annihilates constants
        return QuadResult(0.0, 0.0, 0, ("near-zero; tolerance-dominated",))
    w = hi - lo
    bps = tuple(set(f.breakpoints) | set(g.breakpoints))
    mf, mg = _coarse_mean_abs(f, lo, hi), _coarse_mean_abs(g, lo, hi)
    share = tol / 3
    r_fg = quad(lambda t: f(t) * g(t), lo, hi, share * w, bps)
    r_f = quad(f, lo, hi, share * w / max(1.0, 2 * mg), f.breakpoints)
    r_g = quad(g, lo, hi, share * w / max(1.0, 2 * mf), g.breakpoints)
    mean_f, mean_g = r_f.value / w, r_g.value / w
    value = r_fg.value / w - mean_f * mean_g
    err = (r_fg.err_est + abs(mean_g) * r_f.err_est + abs(mean_f) * r_g.err_est
           + r_f.err_est * r_g.err_est / w) / w
    flags = set(r_fg.flags) | set(r_f.flags) | set(r_g.flags)
    if abs(value) < 10 * err:
        flags.add("near-zero; tolerance-dominated")
    return QuadResult(value, err, r_fg.evals + r_f.evals + r_g.evals, tuple(sorted(flags)))


def functional_difference(f: FunctionSpec, g: FunctionSpec, cfg: IntervalConfig,
                          tol: float = DEFAULT_TOL) -> TwoFunctionalDiff:
    """|T(first interval) - T(second interval)|; [a, v] and [u, b] in overlap mode."""
    left = chebyshev_functional(f, g, *cfg.first, tol / 2)
    right = left if cfg.degenerate else chebyshev_functional(f, g, *cfg.second, tol / 2)
    err = left.err_est + right.err_est
    return TwoFunctionalDiff(left, right, abs(left.value - right.value), err)


def mean_difference(f: FunctionSpec, a: float, b: float, c: float, d: float,
                    tol: float = DEFAULT_TOL) -> QuadResult:
    """(1/(b-a))∫_a^b f - (1/(d-c))∫_c^d f for a <= c < d <= b."""
    if not (a < b and a <= c < d <= b):
        raise PreconditionError(f"need a <= c < d <= b with a < b, got a={a}, b={b}, c={c}, d={d}")
    _check_cover(f, a, b)
    full = quad(f, a, b, tol * (b - a) / 2, f.breakpoints)
    part = full if (c, d) == (a, b) else quad(f, c, d, tol * (d - c) / 2, f.breakpoints)
    value = full.value / (b - a) - part.value / (d - c)
    err = full.err_est / (b - a) + part.err_est / (d - c)
    if (c, d) == (a, b) or ex.is_constant(f.expr):
        value, err = 0.0, 0.0
    return QuadResult(value, err, full.evals + part.evals, tuple(sorted(set(full.flags) | set(part.flags))))


class Antiderivative:
    """``G(t) = ∫_lo^t g`` (or ``∫_t^hi g`` with ``from_right``) at many points.

    An adaptive partition of [lo, hi] is built once; a query sums the
    accepted panels before ``t`` and adds one 15-point rule on the partial
    panel.
    """

    def __init__(self, g: FunctionSpec, lo: float, hi: float, tol: float = DEFAULT_TOL,
                 from_right: bool = False):
        _check_cover(g, lo, hi)
        self.g, self.lo, self.hi, self.from_right = g, lo, hi, from_right
        edges = [lo] + [t for t in g.breakpoints if lo < t < hi] + [hi]
        res, panels = adaptive(g, edges, tol, keep_panels=True)
        self.total = res.value
        self.err = res.err_est
        self.evals = res.evals
        self._lo, self._hi = panels.lo, panels.hi
        vals = panels.value
        if from_right:
            self._cum = np.concatenate([np.cumsum(vals[::-1])[::-1][1:], [0.0]])  # ∫ from panel hi to hi
        else:
            self._cum = np.concatenate([[0.0], np.cumsum(vals)[:-1]])  # ∫ from lo to panel lo

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        k = np.clip(np.searchsorted(self._lo, flat, side="right") - 1, 0, self._lo.size - 1)
        if self.from_right:
            start, stop = flat, self._hi[k]
        else:
            start, stop = self._lo[k], flat
        c, h = 0.5 * (start + stop), 0.5 * (stop - start)
        pts = c[:, None] + h[:, None] * NODES[None, :]
        with np.errstate(all="ignore"):
            y = np.asarray(self.g(pts.ravel()), dtype=float).reshape(pts.shape)
        part = h * (y @ W_KRONROD)
        self.evals += pts.size
        return (self._cum[k] + part).reshape(t.shape)


def psi(g: FunctionSpec, t: float, alpha: float, beta: float, tol: float = DEFAULT_TOL) -> QuadResult:
    """∫_alpha^t g - ((t - alpha)/(beta - alpha))·∫_alpha^beta g."""
    if not beta > alpha:
        raise PreconditionError(f"need alpha < beta, got [{alpha}, {beta}]")
    if not alpha <= t <= beta:
        raise PreconditionError(f"t={t} outside [{alpha}, {beta}]")
    part = quad(g, alpha, t, tol / 2, g.breakpoints)
    full = quad(g, alpha, beta, tol / 2, g.breakpoints)
    lam = (t - alpha) / (beta - alpha)
    return QuadResult(part.value - lam * full.value, part.err_est + lam * full.err_est,
                      part.evals + full.evals, tuple(sorted(set(part.flags) | set(full.flags))))


def chebyshev_via_identity(f: FunctionSpec, g: FunctionSpec, lo: float, hi: float, which: str = "dragomir",
                           tol: float = DEFAULT_TOL) -> QuadResult:
    """The functional as a Stieltjes integral of a kernel built from ``g``
    against ``df``.

    ``cerone`` builds the kernel from the running integrals of ``g`` from
    both ends; ``dragomir`` from the running integral from the left and the
    total.  ``f`` must be either absolutely continuous (the integral becomes
    ``∫ kernel·f'``) or a step function (a sum over its jumps).
    """
    if which not in ("cerone", "dragomir"):
        raise PreconditionError(f"unknown identity {which!r}")
    if not hi > lo:
        raise PreconditionError(f"degenerate interval [{lo}, {hi}]")
    _check_cover(f, lo, hi)
    w = hi - lo
    flags: set[str] = set()
    left = Antiderivative(g, lo, hi, tol / 4)
    if which == "cerone":
        right = Antiderivative(g, lo, hi, tol / 4, from_right=True)

        def kernel(t):
            return ((t - lo) * right(t) - (hi - t) * left(t)) / w ** 2

        g_err = left.err + right.err
        if not g.is_continuous:
            flags.add("hypothesis: g not continuous")
    else:
        total = left.total

        def kernel(t):
            return ((t - lo) * total - w * left(t)) / w ** 2

        g_err = 2 * left.err
    jumps = [(t, j) for t, j in f.jumps if lo < t < hi]
    if jumps:
        if not f.is_step:
            raise NonDifferentiableError(
                f"{f.source!r} has jumps but is not piecewise constant; only absolutely "
                f"continuous or step integrators are supported")
        ts = np.array([t for t, _ in jumps])
        js = np.array([j for _, j in jumps])
        value = float(np.sum(kernel(ts) * js))
        err = g_err / w * float(np.sum(np.abs(js)))
        return QuadResult(value, err, left.evals, tuple(sorted(flags)))
    df = differentiate(f)
    bps = tuple(set(f.breakpoints) | set(g.breakpoints))
    res = quad(lambda t, t_lo: kernel(t + t_lo) * df.eval_offset(t, t_lo), lo, hi, tol / 2, bps, graded=True)
    variation = quad(lambda t, t_lo: np.abs(df.eval_offset(t, t_lo)), lo, hi, 1e-6 * (1 + w), bps, graded=True)
    err = res.err_est + g_err / w * (variation.value + variation.err_est)
    flags |= set(res.flags)
    return QuadResult(res.value, err, res.evals + left.evals, tuple(sorted(flags)))
