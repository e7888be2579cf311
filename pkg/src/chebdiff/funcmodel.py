"""Input functions: parsed expressions on a closed interval plus the
smoothness-class constants the bound formulas consume."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import brentq

from . import expr as ex
from .errors import DomainViolationError, NonDifferentiableError, PreconditionError

SAMPLE_POINTS = 1024
_ROOT_SCAN = 4097
_MAX_ROOTS = 256


@dataclass(frozen=True)
class ClassConstants:
    """Declared class constants of a function on its domain.

    ``lp_norms`` maps an exponent (``math.inf`` for the sup norm) to the norm
    of the *derivative*.  Every value is an upper bound; it may exceed the
    sharp constant but never undercut it.
    """

    total_variation: float | None = None
    lipschitz: float | None = None
    holder: tuple[float, float] | None = None  # (order, H)
    lp_norms: Mapping[float, float] = field(default_factory=dict)
    monotone_nondecreasing: bool = False
    range_bounds: tuple[float, float] | None = None  # (m, M)

    def __post_init__(self):
        for name in ("total_variation", "lipschitz"):
            v = getattr(self, name)
            if v is not None and not v >= 0:
                raise PreconditionError(f"{name} must be nonnegative, got {v}")
        if self.holder is not None:
            order, h = self.holder
            if not 0 < order <= 1:
                raise PreconditionError(f"Hölder order must lie in (0, 1], got {order}")
            if not h >= 0:
                raise PreconditionError(f"Hölder constant must be nonnegative, got {h}")
        for p, n in self.lp_norms.items():
            if not p >= 1:
                raise PreconditionError(f"norm exponent must be >= 1, got {p}")
            if not n >= 0:
                raise PreconditionError(f"norm value must be nonnegative, got {n}")
        if self.range_bounds is not None and not self.range_bounds[0] <= self.range_bounds[1]:
            raise PreconditionError(f"range bounds need m <= M, got {self.range_bounds}")

    def norm(self, p: float) -> float | None:
        """Declared ``||f'||_p`` or None."""
        return self.lp_norms.get(float(p))

    def replace(self, **changes) -> "ClassConstants":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "total_variation": self.total_variation,
            "lipschitz": self.lipschitz,
            "holder": list(self.holder) if self.holder else None,
            "lp_norms": {("inf" if math.isinf(p) else repr(p)): v for p, v in sorted(self.lp_norms.items())},
            "monotone_nondecreasing": self.monotone_nondecreasing,
            "range_bounds": list(self.range_bounds) if self.range_bounds else None,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ClassConstants":
        norms = {math.inf if k in ("inf", "Infinity") else float(k): float(v)
                 for k, v in (d.get("lp_norms") or {}).items()}
        holder = d.get("holder")
        rb = d.get("range_bounds")
        return cls(
            total_variation=d.get("total_variation"),
            lipschitz=d.get("lipschitz"),
            holder=tuple(holder) if holder else None,
            lp_norms=norms,
            monotone_nondecreasing=bool(d.get("monotone_nondecreasing", False)),
            range_bounds=tuple(rb) if rb else None,
        )


@dataclass(frozen=True)
class IntervalConfig:
    """The geometry ``a <= u < v <= b``.

    In ``overlap`` mode the two intervals are [a, v] and [u, b].  In
    ``nested`` mode they are [u, v] and [a, b], and bound formulas are
    evaluated with the roles of ``a`` and ``u`` exchanged.
    """

    a: float
    u: float
    v: float
    b: float
    mode: str = "overlap"

    def __post_init__(self):
        if self.mode not in ("overlap", "nested"):
            raise PreconditionError(f"unknown interval mode {self.mode!r}")
        if not (self.a <= self.u < self.v <= self.b):
            raise PreconditionError(
                f"interval configuration needs a <= u < v <= b, got "
                f"a={self.a}, u={self.u}, v={self.v}, b={self.b}")

    @property
    def first(self) -> tuple[float, float]:
        return (self.a, self.v) if self.mode == "overlap" else (self.u, self.v)

    @property
    def second(self) -> tuple[float, float]:
        return (self.u, self.b) if self.mode == "overlap" else (self.a, self.b)

    @property
    def degenerate(self) -> bool:
        """Both intervals coincide, so the difference vanishes identically."""
        return self.first == self.second

    def formula_points(self) -> tuple[float, float, float, float]:
        """(a, u, v, b) as substituted into the bound formulas."""
        if self.mode == "nested":
            return self.u, self.a, self.v, self.b
        return self.a, self.u, self.v, self.b

    @classmethod
    def midpoint(cls, a: float, b: float, eps: float, mode: str = "overlap") -> "IntervalConfig":
        """u = (a+b)/2, v = u + eps."""
        u = 0.5 * (a + b)
        return cls(a, u, u + eps, b, mode)


class FunctionSpec:
    """An immutable univariate function on ``[lo, hi]``.

    Calling the object evaluates it on scalars or arrays without a domain
    check; use :func:`evaluate` for the checked path.
    """

    __slots__ = ("expr", "domain", "constants", "breakpoints", "source",
                 "breakpoints_resolved", "_kernel", "_offset_kernel", "_jumps", "_deriv")

    def __init__(self, tree: ex.Node, domain: Sequence[float], constants: ClassConstants | None = None,
                 breakpoints: Sequence[float] = (), *, source: str | None = None, check: bool = True):
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise PreconditionError(f"domain must satisfy lo < hi, got [{lo}, {hi}]")
        set_ = object.__setattr__
        set_(self, "expr", tree)
        set_(self, "domain", (lo, hi))
        set_(self, "constants", constants or ClassConstants())
        set_(self, "source", source if source is not None else ex.to_source(tree))
        set_(self, "_kernel", ex.compile_node(tree))
        set_(self, "_offset_kernel", ex.compile_offset(tree))
        set_(self, "_jumps", None)
        set_(self, "_deriv", None)
        found, resolved = _find_breakpoints(tree, lo, hi)
        pts = {float(t) for t in breakpoints if lo < t < hi} | found
        set_(self, "breakpoints", tuple(sorted(pts)))
        set_(self, "breakpoints_resolved", resolved)
        if check:
            self._check_domain()

    def __setattr__(self, name, value):
        raise AttributeError("FunctionSpec is immutable")

    def __repr__(self) -> str:
        return f"FunctionSpec({self.source!r}, domain={self.domain})"

    def __call__(self, t):
        with np.errstate(all="ignore"):
            t_arr = np.asarray(t, dtype=float)
            out = np.broadcast_to(np.asarray(self._kernel(t_arr), dtype=float), t_arr.shape)
        return out if out.ndim else float(out)

    def eval_offset(self, t, t_lo):
        """Value at ``t + t_lo`` where ``t_lo`` is below the float spacing of ``t``."""
        with np.errstate(all="ignore"):
            t_arr = np.asarray(t, dtype=float)
            out = np.broadcast_to(np.asarray(self._offset_kernel(t_arr, np.asarray(t_lo, dtype=float)),
                                             dtype=float), t_arr.shape)
        return out if out.ndim else float(out)

    def with_constants(self, constants: ClassConstants) -> "FunctionSpec":
        return FunctionSpec(self.expr, self.domain, constants, self.breakpoints,
                            source=self.source, check=False)

    def _check_domain(self):
        lo, hi = self.domain
        ts = np.union1d(np.linspace(lo, hi, SAMPLE_POINTS), np.asarray(self.breakpoints, dtype=float))
        vals = self(ts)
        bad = ~np.isfinite(vals)
        if np.any(bad):
            t0 = ts[np.argmax(bad)]
            raise DomainViolationError(f"{self.source!r} is not finite at x={t0!r} in [{lo}, {hi}]")
        for node in ex.walk(self.expr):
            if isinstance(node, ex.BinOp) and node.op == "/" and ex.has_var(node.right):
                roots, _ = _roots(node.right, lo, hi)
                if roots:
                    raise DomainViolationError(
                        f"division by zero in {self.source!r} at x={min(roots)!r}")

    # -- jumps -----------------------------------------------------------

    @property
    def jumps(self) -> tuple[tuple[float, float], ...]:
        """``(t, f(t+) - f(t-))`` for every interior breakpoint with a jump."""
        if self._jumps is None:
            out = []
            for t in self.breakpoints:
                j = jump_at(self, t)
                if j != 0.0:
                    out.append((t, j))
            object.__setattr__(self, "_jumps", tuple(out))
        return self._jumps

    @property
    def is_continuous(self) -> bool:
        return not self.jumps

    @property
    def is_step(self) -> bool:
        """Piecewise constant between breakpoints (derivative identically 0)."""
        try:
            d = differentiate(self)
        except NonDifferentiableError:
            return False
        return isinstance(d.expr, ex.Num) and d.expr.value == 0.0 or _all_zero_branches(d.expr)


def _all_zero_branches(node: ex.Node) -> bool:
    if isinstance(node, ex.Num):
        return node.value == 0.0
    if isinstance(node, ex.Piecewise):
        return all(_all_zero_branches(b.expr) for b in node.branches) and _all_zero_branches(node.otherwise)
    return False


def _roots(node: ex.Node, lo: float, hi: float) -> tuple[set[float], bool]:
    """Zeros of ``node`` in [lo, hi]; the flag is False when they could not be
    isolated (too many, or the expression vanishes on a subinterval)."""
    if not ex.has_var(node):
        return set(), True
    kern = ex.compile_node(node)

    def fn(t):
        with np.errstate(all="ignore"):
            return np.broadcast_to(np.asarray(kern(np.asarray(t, dtype=float)), dtype=float),
                                   np.shape(t))

    slope_tree = ex.derivative(node)
    if not ex.has_var(slope_tree) and isinstance(slope_tree, ex.Num):
        s = slope_tree.value
        if s == 0.0:
            return set(), True
        t0 = 0.5 * (lo + hi)
        r = t0 - float(fn(t0)) / s
        r -= float(fn(r)) / s  # one more step makes "x - c" land exactly on c
        return ({r} if lo <= r <= hi else set()), True
    ts = np.linspace(lo, hi, _ROOT_SCAN)
    ys = fn(ts)
    roots = set(ts[ys == 0.0].tolist())
    if len(roots) > 2:
        # vanishes on a whole stretch: not an isolated breakpoint
        return roots, False
    sgn = np.sign(ys)
    idx = np.nonzero((sgn[:-1] * sgn[1:]) < 0)[0]
    if len(idx) > _MAX_ROOTS:
        return roots, False
    # a 4x finer nested scan must see the same sign changes, otherwise
    # roots are clustering faster than the grid resolves them
    fine = np.sign(fn(np.linspace(lo, hi, 4 * (_ROOT_SCAN - 1) + 1)))
    if np.count_nonzero(fine[:-1] * fine[1:] < 0) != len(idx):
        return roots, False
    for i in idx:
        if np.isfinite(ys[i]) and np.isfinite(ys[i + 1]):
            roots.add(brentq(lambda t: float(fn(t)), ts[i], ts[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return roots, True


def _find_breakpoints(tree: ex.Node, lo: float, hi: float) -> tuple[set[float], bool]:
    pts: set[float] = set()
    resolved = True
    for node in ex.walk(tree):
        if isinstance(node, ex.Piecewise):
            pts.update(b.threshold for b in node.branches)
        elif isinstance(node, ex.Call) and node.fn in ("abs", "sign", "sqrt"):
            r, ok = _roots(node.arg, lo, hi)
            pts |= r
            resolved &= ok
        elif isinstance(node, ex.BinOp) and node.op == "^" and not (
                isinstance(node.right, ex.Num) and float(node.right.value).is_integer() and node.right.value >= 0):
            # fractional/negative powers are singular where the base vanishes
            r, ok = _roots(node.left, lo, hi)
            pts |= r
            resolved &= ok
    return {t for t in pts if lo < t < hi}, resolved


def jump_at(f: FunctionSpec, t: float) -> float:
    """``f(t+) - f(t-)`` at an interior point, 0.0 where f is continuous.

    The difference is sampled at two shrinking offsets; a genuine jump keeps
    its size while a continuous (even Hölder-singular) point shrinks.
    """
    lo, hi = f.domain
    w = hi - lo
    h1, h2 = 1e-8 * w, 1e-12 * max(w, abs(t))
    d1 = float(f(t + h1)) - float(f(t - h1))
    d2 = float(f(t + h2)) - float(f(t - h2))
    scale = 1.0 + abs(float(f(t)))
    if abs(d2) <= 1e-9 * scale or abs(d2) < 0.5 * abs(d1):
        return 0.0
    return d2


def parse_function(source: str, domain: Sequence[float], constants: ClassConstants | None = None,
                   breakpoints: Sequence[float] = ()) -> FunctionSpec:
    """Parse an expression in ``x`` and validate it on ``domain``.

    Raises ExpressionSyntaxError / UnknownIdentifierError for bad source and
    DomainViolationError if the expression is not finite on the domain.
    """
    tree = ex.parse(source)
    return FunctionSpec(tree, domain, constants, breakpoints, source=source)


def differentiate(f: FunctionSpec) -> FunctionSpec:
    """Symbolic derivative, valid away from ``f.breakpoints``.

    The result may be unbounded at a breakpoint (e.g. ``sqrt(abs(x))``), so it
    is not sampled for finiteness.
    """
    if f._deriv is not None:
        return f._deriv
    if not f.breakpoints_resolved:
        raise NonDifferentiableError(
            f"cannot isolate the kinks/jumps of {f.source!r}; pass breakpoints explicitly")
    d = FunctionSpec(ex.derivative(f.expr), f.domain, None, f.breakpoints, check=False)
    object.__setattr__(f, "_deriv", d)
    return d


def evaluate(f: FunctionSpec, t):
    """Value of ``f`` at ``t`` (scalar or array); ``t`` must lie in the domain."""
    lo, hi = f.domain
    arr = np.asarray(t, dtype=float)
    if np.any((arr < lo) | (arr > hi)) or np.any(np.isnan(arr)):
        raise DomainViolationError(f"point(s) outside domain [{lo}, {hi}] of {f.source!r}")
    return f(t)


def derivative_discrepancy(f: FunctionSpec, n: int = 64, h: float | None = None) -> float:
    """Largest ``|f'(t) - central_difference(t)| / (1 + |f'(t)|)`` over ``n``
    interior points kept away from breakpoints."""
    lo, hi = f.domain
    w = hi - lo
    h = h or 1e-5 * w
    ts = np.linspace(lo, hi, n + 2)[1:-1]
    if f.breakpoints:
        bp = np.asarray(f.breakpoints)
        ts = ts[np.min(np.abs(ts[:, None] - bp[None, :]), axis=1) > 1e-3 * w]
    d = differentiate(f)(ts)
    fd = (f(ts + h) - f(ts - h)) / (2 * h)
    return float(np.max(np.abs(d - fd) / (1 + np.abs(d)))) if len(ts) else 0.0
