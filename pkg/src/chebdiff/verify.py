"""Randomised verification of the bounds against quadrature.

A corpus pairs functions from closed-form families whose class constants are
known exactly (rounded outward by 1e-9).  A sweep draws interval
configurations per entry, computes the left-hand side by quadrature and the
right-hand side from the declared constants, and records the comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate as sp_integrate

from . import bounds as bd
from .errors import ChebError, MissingConstantError, PreconditionError, QuadratureError
from .funcmodel import ClassConstants, FunctionSpec, IntervalConfig, parse_function
from .integrate import DEFAULT_TOL, chebyshev_functional, functional_difference, mean_difference

FAMILIES = ("polynomial", "trig", "step", "piecewise-linear", "holder-root")
ALL_FAMILIES = FAMILIES + ("constant",)
NORM_EXPONENTS = (1.0, 1.5, 2.0, 3.0, math.inf)
EXPONENT_CYCLE = (2.0, 3.0, 1.5)
HOLDER_ORDERS = (0.25, 0.5, 0.75, 1.0)
ROUND = 1e-9
DEFAULT_DOMAIN = (0.0, 1.0)


def _up(x: float) -> float:
    return x + ROUND * (1 + abs(x))


def _down(x: float) -> float:
    return x - ROUND * (1 + abs(x))


@dataclass(frozen=True)
class CorpusEntry:
    f: FunctionSpec
    g: FunctionSpec
    families: tuple[str, str]
    params: Mapping[str, Mapping]
    seed: int
    index: int

    @property
    def family(self) -> str:
        return "|".join(self.families)


@dataclass(frozen=True)
class VerificationRecord:
    theorem: str
    cfg: IntervalConfig
    lhs: float | None
    lhs_err: float | None
    rhs: float | None
    passed: bool | None
    tightness: float | str | None
    hypothesis_ok: bool
    preconditions_ok: bool = True
    family: str = ""
    seed: int = 0
    entry: int = 0
    cfg_index: int = 0
    params: Mapping[str, float] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        return self.hypothesis_ok and self.preconditions_ok

    @property
    def violation(self) -> bool:
        return self.certified and self.passed is False

    @property
    def case(self) -> str:
        return self.theorem.partition("/")[2]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem, "case": self.case, "entry": self.entry, "cfg": self.cfg_index,
            "mode": self.cfg.mode, "a": self.cfg.a, "u": self.cfg.u, "v": self.cfg.v, "b": self.cfg.b,
            "lhs": self.lhs, "lhs_err": self.lhs_err, "rhs": self.rhs, "pass": self.passed,
            "tightness": self.tightness, "hypothesis_ok": self.hypothesis_ok,
            "preconditions_ok": self.preconditions_ok, "family": self.family, "seed": self.seed,
            "params": dict(self.params), "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "VerificationRecord":
        cfg = IntervalConfig(d["a"], d["u"], d["v"], d["b"], d.get("mode", "overlap"))
        return cls(d["theorem"], cfg, d["lhs"], d["lhs_err"], d["rhs"], d["pass"], d["tightness"],
                   d["hypothesis_ok"], d.get("preconditions_ok", True), d.get("family", ""),
                   d.get("seed", 0), d.get("entry", 0), d.get("cfg", 0), d.get("params", {}),
                   tuple(d.get("notes", ())))


# -- corpus families -----------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def _poly_source(coefs: Sequence[float]) -> str:
    terms = [_fmt(coefs[0])]
    for k, c in enumerate(coefs[1:], start=1):
        terms.append(f"{_fmt(c)}*x" if k == 1 else f"{_fmt(c)}*x^{k}")
    return " + ".join(terms)


def _roots_in(poly: Polynomial, lo: float, hi: float) -> list[float]:
    if poly.degree() < 1 or not np.any(poly.coef):
        return []
    r = poly.roots()
    real = r[np.abs(r.imag) <= 1e-12 * (1 + np.abs(r.real))].real
    return sorted(float(t) for t in real if lo < t < hi)


def _deriv_norms(df: Callable[[float], float], lo: float, hi: float, cuts: Sequence[float],
                 sup: float) -> dict[float, float]:
    """L^p norms of a derivative (exponents in NORM_EXPONENTS) by scipy
    quadrature split at ``cuts``; ``sup`` is the closed-form sup norm."""
    pts = [lo] + sorted(c for c in cuts if lo < c < hi) + [hi]
    out = {}
    for p in NORM_EXPONENTS:
        if math.isinf(p):
            out[p] = _up(sup)
            continue
        total = 0.0
        for x0, x1 in zip(pts[:-1], pts[1:]):
            val, _ = sp_integrate.quad(lambda t: abs(df(t)) ** p, x0, x1, epsabs=1e-14, epsrel=1e-13, limit=200)
            total += val
        out[p] = _up(total ** (1 / p))
    return out


def _constants_from_extrema(values: Sequence[float], deriv_norms: dict, lipschitz: float | None) -> ClassConstants:
    vals = np.asarray(values, dtype=float)
    diffs = np.diff(vals)
    return ClassConstants(
        total_variation=_up(float(np.sum(np.abs(diffs)))),
        lipschitz=None if lipschitz is None else _up(lipschitz),
        holder=None if lipschitz is None else (1.0, _up(lipschitz)),
        lp_norms=deriv_norms,
        monotone_nondecreasing=bool(np.all(diffs >= 0)),
        range_bounds=(_down(float(vals.min())), _up(float(vals.max()))),
    )


def make_polynomial(rng: np.random.Generator, domain=DEFAULT_DOMAIN):
    lo, hi = domain
    deg = int(rng.integers(1, 6))
    coefs = [round(float(c), 4) for c in rng.uniform(-2, 2, deg + 1)]
    poly = Polynomial(coefs)
    d1, d2 = poly.deriv(), poly.deriv(2)
    crit = _roots_in(d1, lo, hi)
    extrema = [poly(t) for t in [lo] + crit + [hi]]
    slope_pts = [lo] + _roots_in(d2, lo, hi) + [hi]
    sup = max(abs(d1(t)) for t in slope_pts)
    norms = _deriv_norms(lambda t: d1(t), lo, hi, crit, sup)
    consts = _constants_from_extrema(extrema, norms, sup)
    return _poly_source(coefs), consts, {"coefficients": coefs}


def make_trig(rng: np.random.Generator, domain=DEFAULT_DOMAIN):
    lo, hi = domain
    amp = round(float(rng.uniform(0.2, 1.5) * rng.choice([-1, 1])), 4)
    k = round(float(rng.uniform(0.5, 4 * math.pi)), 4)
    phi = round(float(rng.uniform(-math.pi, math.pi)), 4)
    c = round(float(rng.uniform(-1, 1)), 4)
    src = f"{_fmt(amp)}*sin({_fmt(k)}*x + {_fmt(phi)}) + {_fmt(c)}"

    def points(offset):
        # solutions of k x + phi = offset + n pi inside (lo, hi)
        n0 = math.ceil((k * lo + phi - offset) / math.pi)
        n1 = math.floor((k * hi + phi - offset) / math.pi)
        return [(offset + n * math.pi - phi) / k for n in range(n0, n1 + 1)
                if lo < (offset + n * math.pi - phi) / k < hi]

    f = lambda t: amp * math.sin(k * t + phi) + c
    df = lambda t: amp * k * math.cos(k * t + phi)
    crit = points(math.pi / 2)
    extrema = [f(t) for t in [lo] + crit + [hi]]
    sup = max(abs(df(t)) for t in [lo] + points(0.0) + [hi])
    norms = _deriv_norms(df, lo, hi, crit, sup)
    consts = _constants_from_extrema(extrema, norms, sup)
    return src, consts, {"amplitude": amp, "frequency": k, "phase": phi, "offset": c}


def make_step(rng: np.random.Generator, domain=DEFAULT_DOMAIN):
    lo, hi = domain
    w = hi - lo
    n = int(rng.integers(1, 4))
    cuts = sorted({round(float(t), 3) for t in rng.uniform(lo + 0.05 * w, hi - 0.05 * w, n)})
    vals = [round(float(v), 3) for v in rng.uniform(-1.5, 1.5, len(cuts) + 1)]
    if len(cuts) == 1 and rng.random() < 0.5:
        vals.sort()
    branches = ", ".join(f"(x < {_fmt(t)}, {_fmt(v)})" for t, v in zip(cuts, vals[:-1]))
    src = f"piecewise({branches}, {_fmt(vals[-1])})"
    diffs = np.diff(vals)
    consts = ClassConstants(
        total_variation=_up(float(np.sum(np.abs(diffs)))),
        monotone_nondecreasing=bool(np.all(diffs >= 0)),
        range_bounds=(_down(min(vals)), _up(max(vals))),
    )
    return src, consts, {"cuts": cuts, "values": vals}


def make_piecewise_linear(rng: np.random.Generator, domain=DEFAULT_DOMAIN):
    lo, hi = domain
    w = hi - lo
    n = int(rng.integers(1, 4))
    knots = [lo] + sorted({round(float(t), 3) for t in rng.uniform(lo + 0.05 * w, hi - 0.05 * w, n)}) + [hi]
    ys = [round(float(y), 3) for y in rng.uniform(-1.5, 1.5, len(knots))]
    if rng.random() < 0.3:
        ys.sort()
    slopes = [(ys[i + 1] - ys[i]) / (knots[i + 1] - knots[i]) for i in range(len(knots) - 1)]
    pieces = [f"{_fmt(ys[i])} + {_fmt(slopes[i])}*(x - {_fmt(knots[i])})" for i in range(len(slopes))]
    branches = ", ".join(f"(x < {_fmt(knots[i + 1])}, {pieces[i]})" for i in range(len(pieces) - 1))
    src = f"piecewise({branches}, {pieces[-1]})" if branches else pieces[0]
    lens = np.diff(knots)
    s = np.abs(slopes)
    norms = {p: _up(float(np.max(s))) if math.isinf(p) else _up(float(np.sum(s ** p * lens)) ** (1 / p))
             for p in NORM_EXPONENTS}
    consts = _constants_from_extrema(ys, norms, float(np.max(s)))
    return src, consts, {"knots": knots, "values": ys}


def make_holder_root(rng: np.random.Generator, domain=DEFAULT_DOMAIN):
    lo, hi = domain
    w = hi - lo
    r = float(rng.choice(HOLDER_ORDERS))
    c = round(float(rng.uniform(0.2, 1.5) * rng.choice([-1, 1])), 4)
    x0 = round(float(rng.uniform(lo + 0.1 * w, hi - 0.1 * w)), 3)
    d = round(float(rng.uniform(-0.5, 0.5)), 3)
    src = f"{_fmt(c)}*abs(x - {_fmt(x0)})^{_fmt(r)} + {_fmt(d)}"
    left, right = x0 - lo, hi - x0
    ends = [c * left ** r + d, d, c * right ** r + d]
    norms = {}
    for p in NORM_EXPONENTS:
        if math.isinf(p):
            if r == 1.0:
                norms[p] = _up(abs(c))
            continue
        e = p * (r - 1) + 1
        if e > 0:
            norms[p] = _up((abs(c) * r) * ((left ** e + right ** e) / e) ** (1 / p))
    consts = ClassConstants(
        total_variation=_up(abs(c) * (left ** r + right ** r)),
        lipschitz=_up(abs(c)) if r == 1.0 else None,
        holder=(r, _up(abs(c))),
        lp_norms=norms,
        monotone_nondecreasing=False,
        range_bounds=(_down(min(ends)), _up(max(ends))),
    )
    return src, consts, {"order": r, "scale": c, "center": x0, "offset": d}


def make_constant(rng: np.random.Generator, domain=DEFAULT_DOMAIN):
    c = round(float(rng.uniform(-2, 2)), 4)
    consts = ClassConstants(total_variation=0.0, lipschitz=0.0, holder=(1.0, 0.0),
                            lp_norms={p: 0.0 for p in NORM_EXPONENTS}, monotone_nondecreasing=True,
                            range_bounds=(c, c))
    return _fmt(c), consts, {"value": c}


GENERATORS: dict[str, Callable] = {
    "polynomial": make_polynomial,
    "trig": make_trig,
    "step": make_step,
    "piecewise-linear": make_piecewise_linear,
    "holder-root": make_holder_root,
    "constant": make_constant,
}


def make_function(family: str, rng: np.random.Generator, domain=DEFAULT_DOMAIN) -> tuple[FunctionSpec, dict]:
    src, consts, params = GENERATORS[family](rng, domain)
    return parse_function(src, domain, consts), {"family": family, "source": src, **params}


def generate_corpus(seed: int, size: int, families: Iterable[str] = FAMILIES,
                    domain=DEFAULT_DOMAIN, same_pair: bool = False) -> list[CorpusEntry]:
    """``size`` entries, each pairing independently drawn f and g (or g = f
    with ``same_pair``); deterministic for a fixed seed."""
    fams = tuple(families)
    if not fams:
        raise PreconditionError("empty family set")
    unknown = set(fams) - set(GENERATORS)
    if unknown:
        raise PreconditionError(f"unknown families {sorted(unknown)}")
    if size < 1:
        raise PreconditionError("corpus size must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    for i in range(size):
        ff = fams[int(rng.integers(len(fams)))]
        f, fp = make_function(ff, rng, domain)
        if same_pair:
            g, gp, gf = f, fp, ff
        else:
            gf = fams[int(rng.integers(len(fams)))]
            g, gp = make_function(gf, rng, domain)
        out.append(CorpusEntry(f, g, (ff, gf), {"f": fp, "g": gp}, seed, i))
    return out


def entry_from_sources(f_src: str, g_src: str, domain=DEFAULT_DOMAIN, f_consts: ClassConstants | None = None,
                       g_consts: ClassConstants | None = None, index: int = 0) -> CorpusEntry:
    f = parse_function(f_src, domain, f_consts)
    g = parse_function(g_src, domain, g_consts)
    return CorpusEntry(f, g, ("custom", "custom"), {"f": {"source": f_src}, "g": {"source": g_src}}, 0, index)


# -- interval configurations ---------------------------------------------------


def sample_configs(seed: int, count: int, domain=DEFAULT_DOMAIN, mode: str = "overlap",
                   stream: int = 0) -> list[IntervalConfig]:
    """``count`` configurations with u < v drawn uniformly in the domain and
    v - u >= 1e-3 (b - a)."""
    a, b = domain
    rng = np.random.default_rng([seed, stream])
    out = []
    while len(out) < count:
        u, v = sorted(rng.uniform(a, b, 2).tolist())
        if v - u >= 1e-3 * (b - a):
            out.append(IntervalConfig(a, u, v, b, mode))
    return out


# -- checking one theorem --------------------------------------------------------


class _Lhs:
    """Quadrature results shared by all theorems for one (entry, cfg)."""

    def __init__(self, entry: CorpusEntry, cfg: IntervalConfig, tol: float):
        self.entry, self.cfg, self.tol = entry, cfg, tol
        self._memo: dict = {}

    def get(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def functional(self, which: str, lo: float, hi: float):
        f, g = self.entry.f, self.entry.g
        pair = {"fg": (f, g), "ff": (f, f), "gg": (g, g)}[which]
        return self.get(("T", which, lo, hi), lambda: chebyshev_functional(*pair, lo, hi, self.tol))

    def difference(self):
        return self.get("diff", lambda: functional_difference(self.entry.f, self.entry.g, self.cfg, self.tol))

    def mean_diff(self):
        c = self.cfg
        return self.get("mean", lambda: mean_difference(self.entry.f, c.a, c.b, c.u, c.v, self.tol))


def _sqrt_prod(x, y) -> float:
    return math.sqrt(max(x.value, 0.0)) * math.sqrt(max(y.value, 0.0))


def _sqrt_err(x, y) -> float:
    """First-order error of sqrt(x)·sqrt(y) from the errors of x and y."""
    xv, yv = max(x.value, 0.0), max(y.value, 0.0)
    if xv == 0.0 or yv == 0.0:
        return math.sqrt(x.err_est * (yv + y.err_est)) + math.sqrt(y.err_est * (xv + x.err_est))
    return 0.5 * math.sqrt(yv / xv) * x.err_est + 0.5 * math.sqrt(xv / yv) * y.err_est


def _required(*values):
    if any(v is None for v in values):
        raise MissingConstantError("constant not declared")


def _constants_for(entry: CorpusEntry, theorem: str, cfg: IntervalConfig, j: int):
    """Named constants for ``theorem``, plus the hypothesis flag.

    Raises MissingConstantError when the entry lacks what the bound needs.
    """
    fc, gc = entry.f.constants, entry.g.constants
    f, g = entry.f, entry.g
    p = EXPONENT_CYCLE[j % len(EXPONENT_CYCLE)]
    alpha = EXPONENT_CYCLE[(j + 1) % len(EXPONENT_CYCLE)]
    q = p / (p - 1)
    head, _, case = theorem.partition("/")
    g_norm_key = {"Linf": ("ginf", math.inf), "Lp": ("gp", p), "L1": ("g1", 1.0)}
    if theorem == "thm1/chebyshev":
        _required(fc.norm(math.inf), gc.norm(math.inf))
        return {"finf": fc.norm(math.inf), "ginf": gc.norm(math.inf)}, True
    if theorem == "thm1/gruss":
        _required(fc.range_bounds, gc.range_bounds)
        (m1, M1), (m2, M2) = fc.range_bounds, gc.range_bounds
        return {"m1": m1, "M1": M1, "m2": m2, "M2": M2}, True
    if theorem == "thm1/lupas":
        _required(fc.norm(2), gc.norm(2))
        return {"f2": fc.norm(2), "g2": gc.norm(2)}, True
    if theorem == "thm1/ostrowski":
        _required(fc.range_bounds, gc.norm(math.inf))
        m, M = fc.range_bounds
        return {"m": m, "M": M, "ginf": gc.norm(math.inf)}, True
    if theorem in ("eq2.1", "thm4/eq2.2"):
        return {}, True
    if head in ("bar4.3.1",):
        _required(fc.norm(math.inf))
        return {"finf": fc.norm(math.inf)}, True
    if theorem == "cer4.3.2/Lp":
        _required(fc.norm(p))
        return {"fp": fc.norm(p), "p": p, "q": q}, True
    if theorem == "cer4.3.2/L1":
        _required(fc.norm(1.0))
        return {"f1": fc.norm(1.0)}, True
    if theorem == "cer4.3.3":
        _required(fc.holder)
        return {"H": fc.holder[1], "p": fc.holder[0]}, True
    if theorem == "cer4.3.4/bv":
        _required(fc.total_variation)
        return {"V": fc.total_variation}, True
    if theorem == "cer4.3.4/lipschitz":
        _required(fc.lipschitz)
        return {"L": fc.lipschitz}, True
    if theorem == "cer4.3.4/monotone":
        s = bd.s0(cfg.a, cfg.b, cfg.u, cfg.v)
        return {"fa": f(cfg.a), "fb": f(cfg.b), "fs0": f(s)}, fc.monotone_nondecreasing
    if head == "thm4.5.1":
        key, e = g_norm_key[case]
        _required(fc.total_variation, gc.norm(e))
        out = {"V": fc.total_variation, key: gc.norm(e)}
        if case == "Lp":
            out.update(p=p, q=q)
        return out, True
    if head == "thm4.5.3":
        _required(fc.total_variation, gc.holder)
        return {"V": fc.total_variation, "H": gc.holder[1], "p": gc.holder[0]}, True
    if theorem == "thm4.5.5":
        _required(fc.total_variation)
        a, u, v, b = cfg.formula_points()
        return ({"V": fc.total_variation, "ga": g(a), "gu": g(u), "gv": g(v), "gb": g(b)},
                gc.monotone_nondecreasing)
    if head == "thm4.5.7":
        key, e = g_norm_key[case]
        _required(fc.lipschitz, gc.norm(e))
        out = {"L": fc.lipschitz, key: gc.norm(e)}
        if case == "Lp":
            out.update(p=p, q=q)
        return out, True
    if theorem == "thm4.5.9":
        _required(fc.lipschitz, gc.holder)
        return {"L": fc.lipschitz, "H": gc.holder[1], "p": gc.holder[0]}, True
    if head == "thm4.5.12":
        key, e = g_norm_key[case]
        _required(fc.norm(alpha), gc.norm(e))
        out = {"falpha": fc.norm(alpha), "alpha": alpha, "beta": alpha / (alpha - 1), key: gc.norm(e)}
        if case == "Lp":
            out.update(p=p, q=q)
        return out, True
    raise PreconditionError(f"unknown theorem id {theorem!r}")


def _lhs_for(theorem: str, lhs: _Lhs):
    """(lhs, lhs_err, rhs_override, rhs_err, flags) for a theorem."""
    cfg = lhs.cfg
    head = theorem.partition("/")[0]
    if head == "thm1" or theorem == "eq2.1":
        t = lhs.functional("fg", cfg.u, cfg.v)
        if theorem == "eq2.1":
            ff, gg = lhs.functional("ff", cfg.u, cfg.v), lhs.functional("gg", cfg.u, cfg.v)
            return abs(t.value), t.err_est, _sqrt_prod(ff, gg), _sqrt_err(ff, gg), t.flags
        return abs(t.value), t.err_est, None, 0.0, t.flags
    if head in ("bar4.3.1", "cer4.3.2", "cer4.3.3", "cer4.3.4"):
        m = lhs.mean_diff()
        return abs(m.value), m.err_est, None, 0.0, m.flags
    d = lhs.difference()
    flags = tuple(sorted(set(d.t_left.flags) | set(d.t_right.flags)))
    if theorem == "thm4/eq2.2":
        (a1, b1), (a2, b2) = cfg.first, cfg.second
        ff1, gg1 = lhs.functional("ff", a1, b1), lhs.functional("gg", a1, b1)
        ff2, gg2 = lhs.functional("ff", a2, b2), lhs.functional("gg", a2, b2)
        rhs = _sqrt_prod(ff1, gg1) + _sqrt_prod(ff2, gg2)
        return d.diff_abs, d.err_total, rhs, _sqrt_err(ff1, gg1) + _sqrt_err(ff2, gg2), flags
    return d.diff_abs, d.err_total, None, 0.0, flags


def _tightness(lhs: float, lhs_err: float, rhs: float):
    if rhs > 10 * lhs_err and abs(lhs) >= 10 * lhs_err and rhs > 0:
        return lhs / rhs
    return "indeterminate"


def check_theorem(entry: CorpusEntry, theorem: str, cfg: IntervalConfig, tol: float = DEFAULT_TOL,
                  cfg_index: int = 0, form: str = "printed", scale_rhs: float = 1.0,
                  _lhs: _Lhs | None = None) -> VerificationRecord | None:
    """Compare one bound with its quadrature left-hand side.

    Returns None when the entry does not declare the constants the bound
    needs (the bound cannot be evaluated at all).
    """
    try:
        consts, hyp = _constants_for(entry, theorem, cfg, cfg_index)
    except MissingConstantError:
        return None
    lhs_cache = _lhs or _Lhs(entry, cfg, tol)
    common = dict(family=entry.family, seed=entry.seed, entry=entry.index, cfg_index=cfg_index,
                  params={k: float(v) for k, v in consts.items()})
    try:
        lhs, lhs_err, rhs_numeric, rhs_err, flags = _lhs_for(theorem, lhs_cache)
    except (QuadratureError, ChebError) as exc:
        return VerificationRecord(theorem, cfg, None, None, None, None, None, hyp, True,
                                  notes=("lhs-failed", str(exc)), **common)
    notes = list(flags)
    ok = True
    if rhs_numeric is not None:
        rhs = rhs_numeric
        lhs_err = lhs_err + rhs_err
    else:
        head = theorem.partition("/")[0]
        bound_cfg = IntervalConfig(cfg.u, cfg.u, cfg.v, cfg.v) if head == "thm1" else cfg
        res = bd.evaluate(theorem, bound_cfg, consts, form=form)
        rhs, ok = res.rhs, res.preconditions_ok
        notes.extend(res.notes)
    rhs *= scale_rhs
    if scale_rhs != 1.0:
        notes.append(f"rhs scaled by {scale_rhs!r}")
    passed = lhs <= rhs + lhs_err + 1e-9
    return VerificationRecord(theorem, cfg, lhs, lhs_err, rhs, passed, _tightness(lhs, lhs_err, rhs),
                              hyp, ok, notes=tuple(notes), **common)


def sweep(corpus: Sequence[CorpusEntry], theorems: Sequence[str] = bd.THEOREMS, cfg_seed: int = 42,
          cfg_count: int = 20, tol: float = DEFAULT_TOL, mode: str = "overlap", form: str = "printed",
          scale_rhs: float = 1.0, progress: Callable[[int, int], None] | None = None) -> list[VerificationRecord]:
    """Every (entry, theorem, cfg) combination, ordered by entry, theorem, cfg.

    Configurations are drawn per entry from ``cfg_seed`` and the entry index.
    Combinations whose constants are not declared are omitted.
    """
    if not corpus or not theorems:
        raise PreconditionError("sweep needs a nonempty corpus and theorem list")
    unknown = set(theorems) - set(bd.THEOREMS)
    if unknown:
        raise PreconditionError(f"unknown theorem ids {sorted(unknown)}")
    records = []
    for n, entry in enumerate(corpus):
        cfgs = sample_configs(cfg_seed, cfg_count, entry.f.domain, mode, stream=entry.index)
        for j, cfg in enumerate(cfgs):
            cache = _Lhs(entry, cfg, tol)
            for th in theorems:
                rec = check_theorem(entry, th, cfg, tol, j, form, scale_rhs, cache)
                if rec is not None:
                    records.append(rec)
        if progress:
            progress(n + 1, len(corpus))
    order = {th: i for i, th in enumerate(theorems)}
    records.sort(key=lambda r: (r.entry, order[r.theorem], r.cfg_index))
    return records


# -- limits --------------------------------------------------------------------


@dataclass(frozen=True)
class LimitReport:
    theorem: str
    mode: str
    eps: tuple[float, ...]
    values: tuple[float, ...]
    target: float
    errors: tuple[float, ...]
    decreasing: bool
    extra: Mapping[str, tuple] = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        """Errors shrink monotonically and the last one is small relative to
        the target scale."""
        scale = max(abs(self.target), 1e-12)
        return self.decreasing and self.errors[-1] <= 1e-3 * scale + 1e-12

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "mode": self.mode, "eps": list(self.eps), "values": list(self.values),
                "target": self.target, "errors": list(self.errors), "decreasing": self.decreasing,
                "converged": self.converged, **{k: list(v) for k, v in self.extra.items()}}


def _is_decreasing(errors: Sequence[float], floor: float = 1e-13) -> bool:
    """Strictly decreasing, except that values already at round-off level may tie."""
    return all(e1 < e0 or (e1 <= floor and e0 <= floor) for e0, e1 in zip(errors, errors[1:]))


def limit_consistency(entry: CorpusEntry, theorem: str, mode: str,
                      eps_schedule: Sequence[float] = (1e-2, 1e-4, 1e-6), side: str = "right",
                      u: float | None = None, midpoint: bool = False, tol: float = DEFAULT_TOL) -> LimitReport:
    """Convergence of a bound (or of the functional difference) in a limit.

    ``v_to_u``: the general RHS at v = u + eps against the corollary RHS at u
    (``midpoint`` selects the printed u = (a+b)/2 form).

    ``merge_to_full`` (theorem ``thm4/eq2.2``): with u = a, the first level of
    the two-interval pre-Grüss bound against the single-interval bound on
    [a, b], for v = b - eps (``side="right"``) or v = a + eps
    (``side="left"``).  The functional difference and |T_a^b| are reported
    alongside.
    """
    eps = tuple(float(e) for e in eps_schedule)
    if not eps or any(e <= 0 for e in eps) or any(e1 >= e0 for e0, e1 in zip(eps, eps[1:])):
        raise PreconditionError("eps schedule must be positive and strictly decreasing")
    a, b = entry.f.domain
    if mode == "v_to_u":
        u = (a + b) / 2 if u is None or midpoint else u
        fc, gc = entry.f.constants, entry.g.constants
        # constants at the limit point; the g values are those at u
        probe = IntervalConfig(a, u, min(u + eps[0], b), b)
        consts, _ = _constants_for(entry, theorem, probe, 0)
        consts = dict(consts)
        if theorem == "thm4.5.5":
            consts.update(ga=entry.g(a), gu=entry.g(u), gb=entry.g(b))
        pairs = []
        for e in eps:
            c = dict(consts)
            if theorem == "thm4.5.5":
                c["gv"] = entry.g(u + e)
            general = bd.evaluate(theorem, IntervalConfig(a, u, u + e, b), c).rhs
            pairs.append((general, bd.evaluate_corollary(theorem, a, u, b, c, midpoint).rhs))
        values = tuple(p[0] for p in pairs)
        target = pairs[-1][1]
        errors = tuple(abs(v - target) for v in values)
        return LimitReport(theorem, mode, eps, values, target, errors, _is_decreasing(errors))
    if mode == "merge_to_full":
        if theorem != "thm4/eq2.2":
            raise PreconditionError("merge_to_full is defined for thm4/eq2.2")
        if side not in ("left", "right"):
            raise PreconditionError(f"side must be 'left' or 'right', got {side!r}")
        full = bd.pre_gruss_bound(entry.f, entry.g, a, b, tol)
        t_full = chebyshev_functional(entry.f, entry.g, a, b, tol)
        levels, diffs = [], []
        for e in eps:
            v = b - e if side == "right" else a + e
            cfg = IntervalConfig(a, a, v, b)
            levels.append(bd.generalized_pre_gruss(entry.f, entry.g, cfg, tol).level1)
            diffs.append(functional_difference(entry.f, entry.g, cfg, tol).diff_abs)
        target = full.level1
        errors = tuple(abs(x - target) for x in levels)
        extra = {"lhs_values": tuple(diffs), "lhs_target": (abs(t_full.value),),
                 "lhs_errors": tuple(abs(d - abs(t_full.value)) for d in diffs)}
        return LimitReport(theorem, f"{mode}/{side}", eps, tuple(levels), target, errors,
                           _is_decreasing(errors, 1e-12), extra)
    raise PreconditionError(f"unknown limit mode {mode!r}")


# -- summaries ------------------------------------------------------------------


def tightness_report(records: Sequence[VerificationRecord]) -> dict[str, dict]:
    """Per theorem id: counts, pass rate over certified records, and the
    tightest certified record."""
    if not records:
        raise PreconditionError("no records to summarise")
    out: dict[str, dict] = {}
    for th in dict.fromkeys(r.theorem for r in records):
        rs = [r for r in records if r.theorem == th]
        cert = [r for r in rs if r.certified and r.passed is not None]
        numeric = [r for r in cert if isinstance(r.tightness, float)]
        best = max(numeric, key=lambda r: r.tightness, default=None)
        out[th] = {
            "records": len(rs),
            "certified": len(cert),
            "hypothesis_failed": sum(not r.hypothesis_ok for r in rs),
            "failed_evaluations": sum(r.passed is None for r in rs),
            "violations": sum(r.violation for r in rs),
            "pass_rate": (sum(bool(r.passed) for r in cert) / len(cert)) if cert else None,
            "max_tightness": best.tightness if best else None,
            "argmax": ({"entry": best.entry, "cfg": best.cfg_index, "a": best.cfg.a, "u": best.cfg.u,
                        "v": best.cfg.v, "b": best.cfg.b, "family": best.family} if best else None),
            "indeterminate": sum(r.tightness == "indeterminate" for r in cert),
        }
    return out
