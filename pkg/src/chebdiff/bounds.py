"""Right-hand sides of the Čebyšev-difference inequalities.

Every evaluator takes plain numbers (class constants and interval points) and
returns a :class:`BoundResult`.  Bracketed maxima are computed in the
average-plus-half-difference shape they are printed in; a debug assertion
checks each against ``max``.

Two evaluators accept ``form="proof"``: the Lipschitz/absolutely-continuous
pair and the Lipschitz/Hölder pair.  Their printed closed forms do not follow
from the preceding estimate, and the proof form returns that estimate
instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .analyze import beta
from .errors import MissingConstantError, PreconditionError
from .funcmodel import FunctionSpec, IntervalConfig

THEOREMS = (
    "thm1/chebyshev", "thm1/gruss", "thm1/lupas", "thm1/ostrowski",
    "eq2.1", "thm4/eq2.2",
    "bar4.3.1", "bar4.3.1/coarse", "cer4.3.2/Lp", "cer4.3.2/L1", "cer4.3.3",
    "cer4.3.4/bv", "cer4.3.4/lipschitz", "cer4.3.4/monotone",
    "thm4.5.1/Linf", "thm4.5.1/Lp", "thm4.5.1/L1",
    "thm4.5.3/form1", "thm4.5.3/form2",
    "thm4.5.5",
    "thm4.5.7/Linf", "thm4.5.7/Lp",
    "thm4.5.9",
    "thm4.5.12/Linf", "thm4.5.12/Lp", "thm4.5.12/L1",
)

INTERMEDIATE = "intermediate-step bound"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class BoundResult:
    theorem: str
    rhs: float
    inputs: Mapping[str, float] = field(default_factory=dict)
    preconditions_ok: bool = True
    checked: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def case(self) -> str:
        head, _, tail = self.theorem.partition("/")
        return tail

    def scaled(self, factor: float) -> "BoundResult":
        return BoundResult(self.theorem, self.rhs * factor, self.inputs, self.preconditions_ok,
                           self.checked, self.notes + (f"rhs scaled by {factor!r}",))

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "rhs": self.rhs, "inputs": dict(self.inputs),
                "preconditions_ok": self.preconditions_ok, "checked": list(self.checked),
                "notes": list(self.notes)}


@dataclass(frozen=True)
class ExponentPair:
    """Conjugate exponents ``1/p + 1/q = 1`` with ``p, q > 1``."""

    p: float
    q: float

    def __post_init__(self):
        if not (self.p > 1 and self.q > 1):
            raise PreconditionError(f"conjugate exponents must exceed 1, got ({self.p}, {self.q})")
        if abs(1 / self.p + 1 / self.q - 1) > 1e-12:
            raise PreconditionError(f"exponents ({self.p}, {self.q}) are not conjugate")

    @classmethod
    def of(cls, p: float) -> "ExponentPair":
        if not p > 1:
            raise PreconditionError(f"exponent must exceed 1, got {p}")
        return cls(p, p / (p - 1))


@dataclass(frozen=True)
class Levels:
    """The two levels of a pre-Grüss type bound and the functionals behind them."""

    level1: float
    level2: float
    err_est: float
    parts: Mapping[str, float] = field(default_factory=dict)


# -- helpers -------------------------------------------------------------


def _bracket(x: float, y: float) -> float:
    """(x + y)/2 + |x - y|/2, which is max(x, y)."""
    r = (x + y) / 2 + abs(x - y) / 2
    assert abs(r - max(x, y)) <= 1e-12 * (1 + abs(max(x, y))), (x, y, r)
    return r


def _nonneg(**values):
    for name, v in values.items():
        if v is None:
            raise MissingConstantError(name)
        if not v >= 0:
            raise PreconditionError(f"{name} must be nonnegative, got {v}")


def _holder_order(p: float):
    if not 0 < p <= 1:
        raise PreconditionError(f"Hölder order p must lie in (0, 1], got {p}")


def _points(cfg: IntervalConfig):
    return cfg.formula_points()


def _result(theorem, rhs, inputs, checked=(), notes=(), ok=True) -> BoundResult:
    notes = tuple(notes)
    if not rhs >= 0:
        notes += (f"formula evaluated to {rhs!r}; clamped to 0",)
        rhs, ok = 0.0, False
    return BoundResult(theorem, float(rhs), dict(inputs), ok, tuple(checked), notes)


# -- full-interval bounds ------------------------------------------------


def chebyshev_bound(a: float, b: float, f_inf: float, g_inf: float) -> BoundResult:
    _nonneg(f_inf=f_inf, g_inf=g_inf)
    return _result("thm1/chebyshev", (b - a) ** 2 / 12 * f_inf * g_inf,
                   {"a": a, "b": b, "finf": f_inf, "ginf": g_inf}, ("f' in L_inf", "g' in L_inf"))


def gruss_bound(m1: float, M1: float, m2: float, M2: float) -> BoundResult:
    if not (m1 <= M1 and m2 <= M2):
        raise PreconditionError("range bounds need m <= M")
    return _result("thm1/gruss", (M1 - m1) * (M2 - m2) / 4,
                   {"m1": m1, "M1": M1, "m2": m2, "M2": M2}, ("m1 <= f <= M1", "m2 <= g <= M2"))


def lupas_bound(a: float, b: float, f_2: float, g_2: float) -> BoundResult:
    _nonneg(f_2=f_2, g_2=g_2)
    return _result("thm1/lupas", (b - a) / math.pi ** 2 * f_2 * g_2,
                   {"a": a, "b": b, "f2": f_2, "g2": g_2}, ("f' in L_2", "g' in L_2"))


def ostrowski_bound(a: float, b: float, m: float, M: float, g_inf: float) -> BoundResult:
    if not m <= M:
        raise PreconditionError("range bounds need m <= M")
    _nonneg(g_inf=g_inf)
    return _result("thm1/ostrowski", (b - a) * (M - m) * g_inf / 8,
                   {"a": a, "b": b, "m": m, "M": M, "ginf": g_inf}, ("m <= f <= M", "g' in L_inf"))


def classical_bounds(f: FunctionSpec, g: FunctionSpec, a: float, b: float,
                     cases: tuple[str, ...] | None = None) -> list[BoundResult]:
    """The four classical bounds from the declared constants of ``f`` and ``g``.

    With ``cases=None`` the cases whose constants are missing are skipped;
    an explicitly requested case with missing constants raises
    MissingConstantError.
    """
    fc, gc = f.constants, g.constants
    makers = {
        "chebyshev": lambda: chebyshev_bound(a, b, _need(fc.norm(math.inf), "f' sup norm"),
                                             _need(gc.norm(math.inf), "g' sup norm")),
        "gruss": lambda: gruss_bound(*_need(fc.range_bounds, "f range"), *_need(gc.range_bounds, "g range")),
        "lupas": lambda: lupas_bound(a, b, _need(fc.norm(2), "f' L2 norm"), _need(gc.norm(2), "g' L2 norm")),
        "ostrowski": lambda: ostrowski_bound(a, b, *_need(fc.range_bounds, "f range"),
                                             _need(gc.norm(math.inf), "g' sup norm")),
    }
    out = []
    for name in cases or tuple(makers):
        if name not in makers:
            raise PreconditionError(f"unknown classical case {name!r}")
        try:
            out.append(makers[name]())
        except MissingConstantError:
            if cases is not None:
                raise
    return out


def _need(value, name):
    if value is None:
        raise MissingConstantError(name)
    return value


def pre_gruss_bound(f: FunctionSpec, g: FunctionSpec, a: float, b: float, tol: float = 1e-10) -> Levels:
    """sqrt(T(f,f))·sqrt(T(g,g)) and its arithmetic-mean majorant on [a, b]."""
    from .integrate import chebyshev_functional

    tff = chebyshev_functional(f, f, a, b, tol / 2)
    tgg = tff if g is f else chebyshev_functional(g, g, a, b, tol / 2)
    ff, gg = _self_value(tff), _self_value(tgg)
    return Levels(math.sqrt(ff) * math.sqrt(gg), (ff + gg) / 2, tff.err_est + tgg.err_est,
                  {"Tff": ff, "Tgg": gg})


def _self_value(res) -> float:
    if res.value < -(10 * res.err_est + 1e-15):
        from .errors import QuadratureError
        raise QuadratureError(f"negative self-functional {res.value!r} beyond noise {res.err_est!r}")
    return max(res.value, 0.0)


def generalized_pre_gruss(f: FunctionSpec, g: FunctionSpec, cfg: IntervalConfig, tol: float = 1e-10) -> Levels:
    """Both levels of the two-interval pre-Grüss bound."""
    left = pre_gruss_bound(f, g, *cfg.first, tol / 2)
    right = pre_gruss_bound(f, g, *cfg.second, tol / 2)
    l1 = left.level1 + right.level1
    l2 = (left.parts["Tff"] + left.parts["Tgg"] + right.parts["Tff"] + right.parts["Tgg"]) / 2
    return Levels(l1, l2, left.err_est + right.err_est,
                  {"Tff_first": left.parts["Tff"], "Tgg_first": left.parts["Tgg"],
                   "Tff_second": right.parts["Tff"], "Tgg_second": right.parts["Tgg"]})


# -- difference of two integral means --------------------------------------


def s0(a: float, b: float, c: float, d: float) -> float:
    """(cb - ad)/((b - a) - (d - c)), the interior point of the monotone case."""
    den = (b - a) - (d - c)
    if den == 0:
        raise PreconditionError("degenerate denominator (b - a) - (d - c) = 0")
    return (c * b - a * d) / den


def mean_diff_bound(a: float, b: float, c: float, d: float, case: str, *, norm: float | None = None,
                    exps: ExponentPair | None = None, H: float | None = None, order: float | None = None,
                    V: float | None = None, L: float | None = None, fa: float | None = None,
                    fb: float | None = None, fs0: float | None = None, coarse: bool = False,
                    form: str = "printed") -> BoundResult:
    """Bound on |mean over [a,b] - mean over [c,d]| for ``a <= c < d <= b``.

    ``case`` is one of Linf, Lp, L1 (``norm`` is the matching norm of f'),
    holder (``H``, ``order``), bv (``V``), lipschitz (``L``) or monotone
    (``fa``, ``fb``, ``fs0``).

    For Lp, ``form="proof"`` gives the exact q-norm of the representation
    kernel, (b-a)^(1/q) [(1 + rho/(1-rho)) (nu^(q+1) + lam^(q+1)) / (q+1)]^(1/q),
    which is attained; the printed form differs and can fall below it.
    """
    if not (a <= c < d <= b and a < b):
        raise PreconditionError(f"need a <= c < d <= b, got a={a}, b={b}, c={c}, d={d}")
    span, sub = b - a, d - c
    gap = span - sub
    needs_gap = case in ("Linf", "holder", "lipschitz", "monotone") or (case == "Lp")
    if needs_gap and gap == 0:
        raise PreconditionError("degenerate denominator: [c, d] = [a, b]")
    inputs = {"a": a, "b": b, "c": c, "d": d}
    if case == "Linf":
        _nonneg(norm=norm)
        if coarse:
            return _result("bar4.3.1/coarse", gap * norm / 2, {**inputs, "finf": norm})
        shift = ((a + b) / 2 - (c + d) / 2) / gap
        return _result("bar4.3.1", (0.25 + shift ** 2) * gap * norm, {**inputs, "finf": norm})
    if case == "Lp":
        _nonneg(norm=norm)
        if exps is None:
            raise MissingConstantError("exponent pair (p, q)")
        q = exps.q
        nu, rho, lam = (c - a) / span, sub / span, (b - d) / span
        tail = (nu ** (q + 1) + lam ** (q + 1)) ** (1 / q) * norm
        if form == "proof":
            rhs = (span * (1 + rho / (1 - rho)) / (q + 1)) ** (1 / q) * tail
        elif form == "printed":
            rhs = span / (q + 1) ** (1 / q) * (1 + (rho / (1 - rho)) ** q) ** (1 / q) * tail
        else:
            raise PreconditionError(f"form must be 'printed' or 'proof', got {form!r}")
        return _result("cer4.3.2/Lp", rhs, {**inputs, "p": exps.p, "q": q, "fp": norm})
    if case == "L1":
        _nonneg(norm=norm)
        nu, rho, lam = (c - a) / span, sub / span, (b - d) / span
        return _result("cer4.3.2/L1", 0.5 * (1 - rho + abs(nu - lam)) * norm, {**inputs, "f1": norm})
    if case == "holder":
        _nonneg(H=H)
        if order is None:
            raise MissingConstantError("order")
        _holder_order(order)
        rhs = H * ((c - a) ** (order + 1) + (b - d) ** (order + 1)) / ((order + 1) * gap)
        return _result("cer4.3.3", rhs, {**inputs, "H": H, "order": order})
    if case == "bv":
        _nonneg(V=V)
        rhs = ((span - sub) / 2 + abs((c + d) / 2 - (a + b) / 2)) * V / span
        return _result("cer4.3.4/bv", rhs, {**inputs, "V": V})
    if case == "lipschitz":
        _nonneg(L=L)
        return _result("cer4.3.4/lipschitz", L * ((c - a) ** 2 + (b - d) ** 2) / (2 * gap), {**inputs, "L": L})
    if case == "monotone":
        for name, val in (("fa", fa), ("fb", fb), ("fs0", fs0)):
            if val is None:
                raise MissingConstantError(name)
        ok = fa <= fs0 <= fb
        rhs = (b - d) / span * fb - (c - a) / span * fa + (c + d - (a + b)) / span * fs0
        return _result("cer4.3.4/monotone", rhs, {**inputs, "fa": fa, "fb": fb, "fs0": fs0, "s0": s0(a, b, c, d)},
                       ("f(a) <= f(s0) <= f(b)",), () if ok else ("monotonicity sample check failed",), ok)
    raise PreconditionError(f"unknown mean-difference case {case!r}")


# -- bounded-variation integrators ------------------------------------------


def _lp_exps(exps: ExponentPair | None) -> ExponentPair:
    if exps is None:
        raise MissingConstantError("exponent pair (p, q)")
    return exps


def bound_bv_abscont(V: float, cfg: IntervalConfig, case: str, g_norm: float,
                     exps: ExponentPair | None = None, form: str = "printed") -> BoundResult:
    """f of bounded variation (total variation ``V``), g absolutely continuous;
    ``g_norm`` is the ``case`` norm of g' on [a, b].

    For Lp, ``form="proof"`` replaces the printed bracket
    (b-a)/2 + |v - (a+b)/2| = max(v-a, b-v) by max(v-a, b-u), the
    lengths of the two subintervals.
    """
    if form not in ("printed", "proof"):
        raise PreconditionError(f"unknown form {form!r}")
    _nonneg(V=V, g_norm=g_norm)
    a, u, v, b = _points(cfg)
    inputs = {"a": a, "u": u, "v": v, "b": b, "V": V}
    if case == "Linf":
        rhs = V * _bracket(v - a, b - u) / 8 * g_norm
        return _result("thm4.5.1/Linf", rhs, {**inputs, "ginf": g_norm})
    if case == "Lp":
        e = _lp_exps(exps)
        lever = _bracket(v - a, b - u) if form == "proof" else (b - a) / 2 + abs(v - (a + b) / 2)
        rhs = V / (2 * (e.q + 1) ** (1 / e.q)) * lever * g_norm
        notes = ("proof form",) if form == "proof" else ()
        return _result("thm4.5.1/Lp", rhs, {**inputs, "p": e.p, "q": e.q, "gp": g_norm}, notes=notes)
    if case == "L1":
        return _result("thm4.5.1/L1", V * g_norm / 2, {**inputs, "g1": g_norm})
    raise PreconditionError(f"unknown case {case!r}")


def bv_abscont_corollary(V: float, a: float, u: float, b: float, case: str, g_norm: float,
                         exps: ExponentPair | None = None, midpoint: bool = False) -> BoundResult:
    """The v -> u form; with ``midpoint`` the printed u = (a+b)/2 specialisation."""
    _nonneg(V=V, g_norm=g_norm)
    inputs = {"a": a, "u": u, "b": b, "V": V}
    tag = "midpoint" if midpoint else "corollary"
    lever = (b - a) / 2 + abs(u - (a + b) / 2)
    if case == "Linf":
        rhs = V * (b - a) / 16 * g_norm if midpoint else V * lever / 8 * g_norm
        return _result(f"thm4.5.1/Linf/{tag}", rhs, {**inputs, "ginf": g_norm})
    if case == "Lp":
        e = _lp_exps(exps)
        k = (e.q + 1) ** (1 / e.q)
        rhs = V * (b - a) / (4 * k) * g_norm if midpoint else V * lever / (2 * k) * g_norm
        return _result(f"thm4.5.1/Lp/{tag}", rhs, {**inputs, "p": e.p, "q": e.q, "gp": g_norm})
    if case == "L1":
        return _result(f"thm4.5.1/L1/{tag}", V * g_norm / 2, {**inputs, "g1": g_norm})
    raise PreconditionError(f"unknown case {case!r}")


def bound_bv_holder(V: float, H: float, p: float, cfg: IntervalConfig,
                    intermediate: Mapping[str, float] | None = None) -> tuple[BoundResult, BoundResult]:
    """f of bounded variation, g of p-H-Hölder type.

    ``intermediate`` may supply the variations ``V_first``/``V_second`` of f
    over the two subintervals; form1 then returns the estimate before they
    are coarsened to ``V``.
    """
    _holder_order(p)
    _nonneg(V=V, H=H)
    a, u, v, b = _points(cfg)
    inputs = {"a": a, "u": u, "v": v, "b": b, "V": V, "H": H, "p": p}
    c1 = H / (2 ** (p + 1) * (p + 1))
    if intermediate is not None:
        rhs1 = c1 * ((v - a) ** p * intermediate["V_first"] + (b - u) ** p * intermediate["V_second"])
        form1 = _result("thm4.5.3/form1", rhs1, {**inputs, **intermediate}, notes=(INTERMEDIATE,))
    else:
        form1 = _result("thm4.5.3/form1", c1 * ((v - a) ** p + (b - u) ** p) * V, inputs)
    form2 = _result("thm4.5.3/form2", H / (2 ** p * (p + 1)) * _bracket(v - a, b - u) ** p * V, inputs)
    return form1, form2


def bv_holder_corollary(V: float, H: float, p: float, a: float, u: float, b: float,
                        midpoint: bool = False) -> tuple[BoundResult, ...]:
    """The two v -> u forms, or the single printed midpoint form."""
    _holder_order(p)
    _nonneg(V=V, H=H)
    inputs = {"a": a, "u": u, "b": b, "V": V, "H": H, "p": p}
    if midpoint:
        return (_result("thm4.5.3/midpoint", H * (b - a) ** p / (2 ** (2 * p) * (p + 1)) * V, inputs),)
    f1 = H * ((u - a) ** p + (b - u) ** p) / (2 ** (p + 1) * (p + 1)) * V
    f2 = H / (2 ** p * (p + 1)) * ((b - a) / 2 + abs(u - (a + b) / 2)) ** p * V
    return (_result("thm4.5.3/form1/corollary", f1, inputs), _result("thm4.5.3/form2/corollary", f2, inputs))


def bound_bv_monotone(V: float, g_at: Mapping[str, float], cfg: IntervalConfig,
                      intermediate: Mapping[str, float] | None = None) -> BoundResult:
    """f of bounded variation, g nondecreasing; ``g_at`` holds g at a, u, v, b
    under the keys ``ga``, ``gu``, ``gv``, ``gb`` (in formula order)."""
    _nonneg(V=V)
    a, u, v, b = _points(cfg)
    ga, gu, gv, gb = (g_at[k] for k in ("ga", "gu", "gv", "gb"))
    ok = ga <= gu <= gv <= gb
    inputs = {"a": a, "u": u, "v": v, "b": b, "V": V, "ga": ga, "gu": gu, "gv": gv, "gb": gb}
    notes = () if ok else ("g(a) <= g(u) <= g(v) <= g(b) violated",)
    checked = ("g nondecreasing at a, u, v, b",)
    if intermediate is not None:
        rhs = ((gv - ga) * intermediate["V_first"] + (gb - gu) * intermediate["V_second"]) / 4
        return _result("thm4.5.5", rhs, {**inputs, **intermediate}, checked, notes + (INTERMEDIATE,), ok)
    brace = ((gv - ga) + (gb - gu)) / 2 + abs((gv + gu) / 2 - (ga + gb) / 2)
    assert abs(brace - max(gv - ga, gb - gu)) <= 1e-12 * (1 + abs(brace))
    return _result("thm4.5.5", brace * V / 4, inputs, checked, notes, ok)


def bv_monotone_corollary(V: float, ga: float, gu: float, gb: float, midpoint: bool = False) -> BoundResult:
    """The printed v -> u form (``gu`` is g at u, or at (a+b)/2 with ``midpoint``)."""
    _nonneg(V=V)
    rhs = ((gb - ga) / 2 + abs(gu - (ga + gb) / 2)) * V
    tag = "midpoint" if midpoint else "corollary"
    return _result(f"thm4.5.5/{tag}", rhs, {"V": V, "ga": ga, "gu": gu, "gb": gb})


# -- Lipschitz integrators ---------------------------------------------------


def bound_lip_abscont(L: float, cfg: IntervalConfig, case: str, g_norm: float,
                      exps: ExponentPair | None = None, form: str = "printed",
                      intermediate: Mapping[str, float] | None = None) -> BoundResult:
    """f L-Lipschitz, g absolutely continuous.

    ``form="proof"`` returns the estimate the closed form is derived from:
    ``L·||g'||_inf·((v-a)^2 + (b-u)^2)/12`` and
    ``L·||g'||_p·B(2, 1+1/q)·((v-a)^2 + (b-u)^2)/(q+1)^(1/q)``.
    ``intermediate`` (Lp case, proof form) may give ``gp_first`` and
    ``gp_second``, the norms of g' on the two subintervals.
    """
    _nonneg(L=L, g_norm=g_norm)
    if form not in ("printed", "proof"):
        raise PreconditionError(f"unknown form {form!r}")
    a, u, v, b = _points(cfg)
    inputs = {"a": a, "u": u, "v": v, "b": b, "L": L}
    theorem = f"thm4.5.7/{case}"
    if case not in ("Linf", "Lp"):
        raise PreconditionError(f"unknown case {case!r}")
    norm_key = "ginf" if case == "Linf" else "gp"
    inputs[norm_key] = g_norm
    notes = () if form == "printed" else ("proof form",)
    if case == "Lp":
        e = _lp_exps(exps)
        inputs.update(p=e.p, q=e.q)
        lp_const = beta(2, 1 + 1 / e.q) / (e.q + 1) ** (1 / e.q)
    if form == "proof":
        squares = (v - a) ** 2 + (b - u) ** 2
        if case == "Linf":
            return _result(theorem, L * g_norm * squares / 12, inputs, notes=notes)
        if intermediate is not None:
            rhs = L * lp_const * ((v - a) ** 2 * intermediate["gp_first"] + (b - u) ** 2 * intermediate["gp_second"])
            return _result(theorem, rhs, {**inputs, **intermediate}, notes=notes + (INTERMEDIATE,))
        return _result(theorem, L * lp_const * squares * g_norm, inputs, notes=notes)
    gap = (b - a) - (v - u)
    if cfg.degenerate or gap == 0:
        return _result(theorem, 0.0, inputs, notes=(DEGENERATE,))
    shape = gap * (0.25 + (((a + b) / 2 - (u + v) / 2) / gap) ** 2)
    if case == "Linf":
        return _result(theorem, L * shape / 6 * g_norm, inputs)
    return _result(theorem, L * 2 * shape * lp_const * g_norm, inputs)


def lip_abscont_corollary(L: float, a: float, u: float, b: float, case: str, g_norm: float,
                          exps: ExponentPair | None = None, midpoint: bool = False) -> BoundResult:
    """The printed v -> u forms, and their u = (a+b)/2 specialisations."""
    _nonneg(L=L, g_norm=g_norm)
    tag = "midpoint" if midpoint else "corollary"
    inputs = {"a": a, "u": u, "b": b, "L": L}
    squares = (u - a) ** 2 + (b - u) ** 2
    if case == "Linf":
        rhs = L * (b - a) ** 2 / 24 * g_norm if midpoint else L * g_norm * squares / 12
        return _result(f"thm4.5.7/Linf/{tag}", rhs, {**inputs, "ginf": g_norm})
    if case == "Lp":
        e = _lp_exps(exps)
        k = beta(2, 1 + 1 / e.q) / (e.q + 1) ** (1 / e.q)
        rhs = L * (b - a) ** 2 / 2 * k * g_norm if midpoint else L * squares * k * g_norm
        return _result(f"thm4.5.7/Lp/{tag}", rhs, {**inputs, "p": e.p, "q": e.q, "gp": g_norm})
    raise PreconditionError(f"unknown case {case!r}")


def bound_lip_holder(L: float, H: float, p: float, cfg: IntervalConfig, form: str = "printed") -> BoundResult:
    """f L-Lipschitz, g of p-H-Hölder type.

    ``form="proof"`` returns ``LH((v-a)^(p+1) + (b-u)^(p+1))/((p+1)^2 (p+2))``,
    the sum the printed maximum replaces.
    """
    _holder_order(p)
    _nonneg(L=L, H=H)
    if form not in ("printed", "proof"):
        raise PreconditionError(f"unknown form {form!r}")
    a, u, v, b = _points(cfg)
    inputs = {"a": a, "u": u, "v": v, "b": b, "L": L, "H": H, "p": p}
    c = L * H / ((p + 1) ** 2 * (p + 2))
    if form == "proof":
        return _result("thm4.5.9", c * ((v - a) ** (p + 1) + (b - u) ** (p + 1)), inputs, notes=("proof form",))
    br = ((b - a) + (v - u)) / 2 + abs((u + v) / 2 - (a + b) / 2)
    assert abs(br - max(v - a, b - u)) <= 1e-12 * (1 + br)
    return _result("thm4.5.9", c * br ** (p + 1), inputs)


def lip_holder_corollary(L: float, H: float, p: float, a: float, u: float, b: float,
                         midpoint: bool = False) -> BoundResult:
    """The collapsed v -> u form; ``midpoint`` gives the printed p = 1 case
    at u = (a+b)/2, which needs ``p == 1``."""
    _holder_order(p)
    _nonneg(L=L, H=H)
    inputs = {"a": a, "u": u, "b": b, "L": L, "H": H, "p": p}
    if midpoint:
        if p != 1:
            raise PreconditionError("the midpoint form is stated for p = 1 only")
        return _result("thm4.5.9/midpoint", L * H * (b - a) ** 2 / 24, inputs)
    lever = (b - a) / 2 + abs(u - (a + b) / 2)
    return _result("thm4.5.9/corollary", L * H / ((p + 1) ** 2 * (p + 2)) * lever ** (p + 1), inputs)


# -- two absolutely continuous functions ------------------------------------


def bound_abscont_pair(f_norm: float, ab: ExponentPair, cfg: IntervalConfig, case: str, g_norm: float,
                       pq: ExponentPair | None = None) -> BoundResult:
    """f' in L_alpha (``f_norm`` = its norm), ``ab`` = (alpha, beta); ``g_norm``
    is the ``case`` norm of g'; the Lp case also needs ``pq``."""
    _nonneg(f_norm=f_norm, g_norm=g_norm)
    a, u, v, b = _points(cfg)
    bt = ab.q
    inputs = {"a": a, "u": u, "v": v, "b": b, "alpha": ab.p, "beta": bt, "falpha": f_norm}
    if case == "Linf":
        rhs = ((v - a) ** (1 / bt) + (b - u) ** (1 / bt)) / 2 * beta(bt + 1, bt + 1) ** (1 / bt) * f_norm * g_norm
        return _result("thm4.5.12/Linf", rhs, {**inputs, "ginf": g_norm})
    lengths = (v - a) ** (1 + 1 / bt) + (b - u) ** (1 + 1 / bt)
    if case == "Lp":
        e = _lp_exps(pq)
        rhs = lengths / (e.q + 1) ** (1 / e.q) * beta(bt + 1, bt / e.q + 1) ** (1 / bt) * g_norm * f_norm
        return _result("thm4.5.12/Lp", rhs, {**inputs, "p": e.p, "q": e.q, "gp": g_norm})
    if case == "L1":
        rhs = lengths * beta(bt + 1, bt + 1) ** (1 / bt) * g_norm * f_norm
        return _result("thm4.5.12/L1", rhs, {**inputs, "g1": g_norm})
    raise PreconditionError(f"unknown case {case!r}")


def abscont_pair_matched(f_norm: float, pq: ExponentPair, cfg: IntervalConfig, g_norm: float,
                        variant: str) -> BoundResult:
    """The Lp case with (alpha, beta) = (p, q) (``variant="alpha=p"``) or
    (q, p) (``variant="alpha=q"``)."""
    if variant == "alpha=p":
        ab = pq
    elif variant == "alpha=q":
        ab = ExponentPair(pq.q, pq.p)
    else:
        raise PreconditionError(f"unknown variant {variant!r}")
    r = bound_abscont_pair(f_norm, ab, cfg, "Lp", g_norm, pq)
    return BoundResult(r.theorem, r.rhs, r.inputs, r.preconditions_ok, r.checked, r.notes + (variant,))


def abscont_pair_corollary(f_norm: float, ab: ExponentPair, a: float, u: float, b: float, case: str,
                           g_norm: float, pq: ExponentPair | None = None, midpoint: bool = False) -> BoundResult:
    """The printed v -> u forms and their u = (a+b)/2 specialisations."""
    _nonneg(f_norm=f_norm, g_norm=g_norm)
    bt = ab.q
    tag = "midpoint" if midpoint else "corollary"
    inputs = {"a": a, "u": u, "b": b, "alpha": ab.p, "beta": bt, "falpha": f_norm}
    half = (b - a) / 2
    if case == "Linf":
        lengths = half ** (1 / bt) if midpoint else ((u - a) ** (1 / bt) + (b - u) ** (1 / bt)) / 2
        rhs = lengths * beta(bt + 1, bt + 1) ** (1 / bt) * f_norm * g_norm
        return _result(f"thm4.5.12/Linf/{tag}", rhs, {**inputs, "ginf": g_norm})
    if case == "Lp":
        e = _lp_exps(pq)
        if midpoint:
            lengths = (b - a) ** (1 + 1 / bt) / 2 ** (1 + 1 / bt)
        else:
            lengths = (u - a) ** (1 + 1 / bt) + (b - u) ** (1 + 1 / bt)
        rhs = lengths / (e.q + 1) ** (1 / e.q) * beta(bt + 1, bt / e.q + 1) ** (1 / bt) * g_norm * f_norm
        return _result(f"thm4.5.12/Lp/{tag}", rhs, {**inputs, "p": e.p, "q": e.q, "gp": g_norm})
    if case == "L1":
        lengths = half ** (1 + 1 / bt) if midpoint else (u - a) ** (1 + 1 / bt) + (b - u) ** (1 + 1 / bt)
        rhs = lengths * beta(bt + 1, bt + 1) ** (1 / bt) * g_norm * f_norm
        return _result(f"thm4.5.12/L1/{tag}", rhs, {**inputs, "g1": g_norm})
    raise PreconditionError(f"unknown case {case!r}")


# -- dispatch by identifier ----------------------------------------------------


def _exps_from(consts: Mapping[str, float], p_key: str = "p", q_key: str = "q") -> ExponentPair:
    p, q = consts.get(p_key), consts.get(q_key)
    if p is None and q is None:
        raise MissingConstantError(f"{p_key} or {q_key}")
    if p is None:
        return ExponentPair(q / (q - 1), q) if q > 1 else ExponentPair(q, q)
    if q is None:
        return ExponentPair.of(p)
    return ExponentPair(p, q)


def _get(consts: Mapping[str, float], key: str) -> float:
    if consts.get(key) is None:
        raise MissingConstantError(key)
    return float(consts[key])


def evaluate(theorem: str, cfg: IntervalConfig, consts: Mapping[str, float], form: str = "printed") -> BoundResult:
    """Evaluate a bound by identifier from named constants.

    Constant names: V, L, H, p, q, alpha, beta, finf, f2, falpha, ginf, gp,
    g1, g2, m1, M1, m2, M2, m, M, ga, gu, gv, gb, fa, fb, fs0.  ``p`` is the
    Hölder order for thm4.5.3 / thm4.5.9 and cer4.3.3 and the Lebesgue
    exponent elsewhere.  Full-interval and mean-difference bounds use
    [a, b] = [cfg.a, cfg.b] and [c, d] = [cfg.u, cfg.v].
    """
    c = consts
    a, u, v, b = cfg.a, cfg.u, cfg.v, cfg.b
    head, _, case = theorem.partition("/")
    if theorem == "thm1/chebyshev":
        return chebyshev_bound(a, b, _get(c, "finf"), _get(c, "ginf"))
    if theorem == "thm1/gruss":
        return gruss_bound(_get(c, "m1"), _get(c, "M1"), _get(c, "m2"), _get(c, "M2"))
    if theorem == "thm1/lupas":
        return lupas_bound(a, b, _get(c, "f2"), _get(c, "g2"))
    if theorem == "thm1/ostrowski":
        return ostrowski_bound(a, b, _get(c, "m"), _get(c, "M"), _get(c, "ginf"))
    if theorem == "bar4.3.1":
        return mean_diff_bound(a, b, u, v, "Linf", norm=_get(c, "finf"))
    if theorem == "bar4.3.1/coarse":
        return mean_diff_bound(a, b, u, v, "Linf", norm=_get(c, "finf"), coarse=True)
    if theorem == "cer4.3.2/Lp":
        return mean_diff_bound(a, b, u, v, "Lp", norm=_get(c, "fp"), exps=_exps_from(c), form=form)
    if theorem == "cer4.3.2/L1":
        return mean_diff_bound(a, b, u, v, "L1", norm=_get(c, "f1"))
    if theorem == "cer4.3.3":
        return mean_diff_bound(a, b, u, v, "holder", H=_get(c, "H"), order=_get(c, "p"))
    if theorem == "cer4.3.4/bv":
        return mean_diff_bound(a, b, u, v, "bv", V=_get(c, "V"))
    if theorem == "cer4.3.4/lipschitz":
        return mean_diff_bound(a, b, u, v, "lipschitz", L=_get(c, "L"))
    if theorem == "cer4.3.4/monotone":
        return mean_diff_bound(a, b, u, v, "monotone", fa=_get(c, "fa"), fb=_get(c, "fb"), fs0=_get(c, "fs0"))
    if head == "thm4.5.1":
        key = {"Linf": "ginf", "Lp": "gp", "L1": "g1"}.get(case)
        if key is None:
            raise PreconditionError(f"unknown theorem id {theorem!r}")
        exps = _exps_from(c) if case == "Lp" else None
        return bound_bv_abscont(_get(c, "V"), cfg, case, _get(c, key), exps, form=form)
    if head == "thm4.5.3":
        if case not in ("form1", "form2"):
            raise PreconditionError(f"unknown theorem id {theorem!r}")
        f1, f2 = bound_bv_holder(_get(c, "V"), _get(c, "H"), _get(c, "p"), cfg)
        return f1 if case == "form1" else f2
    if theorem == "thm4.5.5":
        return bound_bv_monotone(_get(c, "V"), {k: _get(c, k) for k in ("ga", "gu", "gv", "gb")}, cfg)
    if head == "thm4.5.7":
        key = {"Linf": "ginf", "Lp": "gp"}.get(case)
        if key is None:
            raise PreconditionError(f"unknown theorem id {theorem!r}")
        exps = _exps_from(c) if case == "Lp" else None
        return bound_lip_abscont(_get(c, "L"), cfg, case, _get(c, key), exps, form=form)
    if theorem == "thm4.5.9":
        return bound_lip_holder(_get(c, "L"), _get(c, "H"), _get(c, "p"), cfg, form=form)
    if head == "thm4.5.12":
        key = {"Linf": "ginf", "Lp": "gp", "L1": "g1"}.get(case)
        if key is None:
            raise PreconditionError(f"unknown theorem id {theorem!r}")
        ab = _exps_from(c, "alpha", "beta")
        pq = _exps_from(c) if case == "Lp" else None
        return bound_abscont_pair(_get(c, "falpha"), ab, cfg, case, _get(c, key), pq)
    raise PreconditionError(f"unknown theorem id {theorem!r}")


def evaluate_corollary(theorem: str, a: float, u: float, b: float, consts: Mapping[str, float],
                       midpoint: bool = False) -> BoundResult:
    """The v -> u corollary of a theorem/case id (the printed midpoint form
    with ``midpoint``, which takes u = (a+b)/2).  For thm4.5.5 ``gu`` is g at u."""
    c = consts
    head, _, case = theorem.partition("/")
    if midpoint:
        u = (a + b) / 2
    if head == "thm4.5.1":
        key = {"Linf": "ginf", "Lp": "gp", "L1": "g1"}[case]
        exps = _exps_from(c) if case == "Lp" else None
        return bv_abscont_corollary(_get(c, "V"), a, u, b, case, _get(c, key), exps, midpoint)
    if head == "thm4.5.3":
        forms = bv_holder_corollary(_get(c, "V"), _get(c, "H"), _get(c, "p"), a, u, b, midpoint)
        return forms[0] if midpoint or case == "form1" else forms[1]
    if head == "thm4.5.5":
        return bv_monotone_corollary(_get(c, "V"), _get(c, "ga"), _get(c, "gu"), _get(c, "gb"), midpoint)
    if head == "thm4.5.7":
        key = {"Linf": "ginf", "Lp": "gp"}[case]
        exps = _exps_from(c) if case == "Lp" else None
        return lip_abscont_corollary(_get(c, "L"), a, u, b, case, _get(c, key), exps, midpoint)
    if head == "thm4.5.9":
        return lip_holder_corollary(_get(c, "L"), _get(c, "H"), _get(c, "p"), a, u, b, midpoint)
    if head == "thm4.5.12":
        key = {"Linf": "ginf", "Lp": "gp", "L1": "g1"}[case]
        pq = _exps_from(c) if case == "Lp" else None
        return abscont_pair_corollary(_get(c, "falpha"), _exps_from(c, "alpha", "beta"), a, u, b, case,
                                      _get(c, key), pq, midpoint)
    raise PreconditionError(f"no corollary form for {theorem!r}")
