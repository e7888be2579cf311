"""Command-line front end: ``eval``, ``bound``, ``verify`` and ``report``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Sequence

from . import bounds as bd
from . import verify as vf
from .errors import ChebError
from .funcmodel import IntervalConfig, parse_function
from .integrate import DEFAULT_TOL, chebyshev_functional, functional_difference

CONSTANT_NAMES = ("V", "L", "H", "p", "q", "alpha", "beta", "finf", "f2", "fp", "f1", "falpha",
                  "ginf", "gp", "g1", "g2", "m1", "M1", "m2", "M2", "m", "M",
                  "ga", "gu", "gv", "gb", "fa", "fb", "fs0")
CSV_FIELDS = ("theorem", "case", "entry", "cfg", "mode", "a", "u", "v", "b", "lhs", "lhs_err", "rhs",
              "pass", "tightness", "hypothesis_ok", "preconditions_ok", "family", "seed", "params", "notes")


@dataclass
class RunConfig:
    """Everything needed to reproduce a run."""

    command: str = "verify"
    f: str | None = None
    g: str | None = None
    constants: dict = field(default_factory=dict)
    a: float = 0.0
    u: float | None = None
    v: float | None = None
    b: float = 1.0
    theorems: list = field(default_factory=lambda: list(bd.THEOREMS))
    families: list = field(default_factory=lambda: list(vf.FAMILIES))
    seed: int = 42
    size: int = 200
    cfg_count: int = 20
    tol: float = DEFAULT_TOL
    form: str = "printed"
    nested: bool = False
    scale_rhs: float = 1.0
    out: str | None = None
    format: str = "jsonl"

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"config: unknown fields {sorted(unknown)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self):
        if self.size < 1 or self.cfg_count < 1:
            raise ValueError("config: size and cfg_count must be >= 1")
        if not self.tol > 0:
            raise ValueError("config: tol must be positive")
        if self.format not in ("jsonl", "csv"):
            raise ValueError(f"config: format must be jsonl or csv, got {self.format!r}")
        if self.form not in ("printed", "proof"):
            raise ValueError(f"config: form must be printed or proof, got {self.form!r}")
        if not isinstance(self.theorems, list) or not isinstance(self.families, list):
            raise ValueError("config: theorems and families must be lists")

    def to_dict(self) -> dict:
        return asdict(self)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


# -- eval ---------------------------------------------------------------------


def cmd_eval(cfg: RunConfig, stdout) -> int:
    if not cfg.b > cfg.a:
        raise ValueError(f"degenerate interval [{cfg.a}, {cfg.b}]")
    f = parse_function(cfg.f, (cfg.a, cfg.b))
    g = parse_function(cfg.g, (cfg.a, cfg.b))
    t = chebyshev_functional(f, g, cfg.a, cfg.b, cfg.tol)
    print(f"T = {t.value:.12g} ± {t.err_est:.2g}", file=stdout)
    if t.flags:
        print("flags: " + ", ".join(t.flags), file=stdout)
    if cfg.u is not None and cfg.v is not None:
        ic = IntervalConfig(cfg.a, cfg.u, cfg.v, cfg.b, "nested" if cfg.nested else "overlap")
        d = functional_difference(f, g, ic, cfg.tol)
        (a1, b1), (a2, b2) = ic.first, ic.second
        print(f"T[{a1:g},{b1:g}] = {d.t_left.value:.12g}", file=stdout)
        print(f"T[{a2:g},{b2:g}] = {d.t_right.value:.12g}", file=stdout)
        print(f"|difference| = {d.diff_abs:.12g} ± {d.err_total:.2g}", file=stdout)
    return 0


# -- bound --------------------------------------------------------------------


def cmd_bound(cfg: RunConfig, theorem: str, stdout, as_json: bool = False) -> int:
    u = cfg.a if cfg.u is None else cfg.u
    v = cfg.b if cfg.v is None else cfg.v
    if u == v:
        midpoint = math.isclose(u, (cfg.a + cfg.b) / 2, rel_tol=0, abs_tol=1e-15 * (1 + abs(u)))
        res = bd.evaluate_corollary(theorem, cfg.a, u, cfg.b, cfg.constants, midpoint)
    else:
        ic = IntervalConfig(cfg.a, u, v, cfg.b, "nested" if cfg.nested else "overlap")
        res = bd.evaluate(theorem, ic, cfg.constants, form=cfg.form)
    if as_json:
        print(json.dumps(res.to_dict()), file=stdout)
        return 0
    print(f"{res.theorem}: rhs = {res.rhs:.12g}", file=stdout)
    print("inputs: " + ", ".join(f"{k}={_fmt(v)}" for k, v in res.inputs.items()), file=stdout)
    print(f"preconditions_ok: {res.preconditions_ok}", file=stdout)
    for n in res.notes:
        print(f"note: {n}", file=stdout)
    return 0


# -- verify / report ----------------------------------------------------------


def write_records(records, out, fmt: str):
    if fmt == "jsonl":
        for r in records:
            out.write(json.dumps(r.to_dict()) + "\n")
        return
    w = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        d = r.to_dict()
        d["params"] = json.dumps(d["params"])
        d["notes"] = json.dumps(d["notes"])
        w.writerow(d)


def read_records(path: str) -> list[vf.VerificationRecord]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.startswith("theorem,"):
        rows = []
        for d in csv.DictReader(io.StringIO(text)):
            rows.append(_csv_row(d))
        return rows
    return [vf.VerificationRecord.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


def _csv_row(d: dict) -> vf.VerificationRecord:
    def num(x):
        return None if x == "" else float(x)

    def flag(x):
        return None if x == "" else x == "True"

    tight = d["tightness"]
    out = {
        "theorem": d["theorem"], "a": float(d["a"]), "u": float(d["u"]), "v": float(d["v"]),
        "b": float(d["b"]), "mode": d["mode"], "lhs": num(d["lhs"]), "lhs_err": num(d["lhs_err"]),
        "rhs": num(d["rhs"]), "pass": flag(d["pass"]),
        "tightness": tight if tight in ("indeterminate", "") else float(tight),
        "hypothesis_ok": d["hypothesis_ok"] == "True", "preconditions_ok": d["preconditions_ok"] == "True",
        "family": d["family"], "seed": int(d["seed"]), "entry": int(d["entry"]), "cfg": int(d["cfg"]),
        "params": json.loads(d["params"]), "notes": json.loads(d["notes"]),
    }
    if out["tightness"] == "":
        out["tightness"] = None
    return vf.VerificationRecord.from_dict(out)


def summary_table(summary: dict) -> str:
    head = f"{'theorem':<20} {'records':>7} {'certified':>9} {'violations':>10} {'pass_rate':>9} {'max_tight':>10} {'indet':>6}"
    lines = [head, "-" * len(head)]
    for th, s in summary.items():
        rate = "-" if s["pass_rate"] is None else f"{s['pass_rate']:.4f}"
        tight = "-" if s["max_tightness"] is None else f"{s['max_tightness']:.6f}"
        lines.append(f"{th:<20} {s['records']:>7} {s['certified']:>9} {s['violations']:>10} {rate:>9} "
                     f"{tight:>10} {s['indeterminate']:>6}")
    return "\n".join(lines)


def _exit_status(records) -> int:
    violations = sum(r.violation for r in records)
    failures = sum(r.passed is None for r in records)
    return 1 if violations or failures else 0


def cmd_verify(cfg: RunConfig, stdout, stderr) -> int:
    corpus = vf.generate_corpus(cfg.seed, cfg.size, cfg.families)
    records = vf.sweep(corpus, cfg.theorems, cfg_seed=cfg.seed, cfg_count=cfg.cfg_count, tol=cfg.tol,
                       mode="nested" if cfg.nested else "overlap", form=cfg.form, scale_rhs=cfg.scale_rhs)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            write_records(records, fh, cfg.format)
    else:
        write_records(records, stdout, cfg.format)
    summary = vf.tightness_report(records)
    print(summary_table(summary), file=stderr if not cfg.out else stdout)
    status = _exit_status(records)
    n_viol = sum(r.violation for r in records)
    n_fail = sum(r.passed is None for r in records)
    print(f"{len(records)} records, {n_viol} certified violations, {n_fail} failed evaluations",
          file=stderr if not cfg.out else stdout)
    return status


def cmd_report(path: str, stdout, as_json: bool = False) -> int:
    records = read_records(path)
    summary = vf.tightness_report(records)
    if as_json:
        print(json.dumps(summary, indent=2), file=stdout)
    else:
        print(summary_table(summary), file=stdout)
    return _exit_status(records)


# -- argument parsing ----------------------------------------------------------


def _add_interval(p, positional_ab: bool = False):
    p.add_argument("--a", type=float)
    p.add_argument("--u", type=float)
    p.add_argument("--v", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--nested", action="store_true", default=None, help="use [u,v] inside [a,b]")
    p.add_argument("--tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chebdiff", description="Differences of Čebyšev functionals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate T(f, g) on [a, b]")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("bounds", nargs="*", type=float, metavar="A B")
    _add_interval(p)

    p = sub.add_parser("bound", help="evaluate one bound from constants")
    p.add_argument("theorem")
    _add_interval(p)
    p.add_argument("--form", choices=("printed", "proof"))
    p.add_argument("--json", action="store_true")
    for name in CONSTANT_NAMES:
        p.add_argument(f"--{name}", type=float, dest=f"const_{name}")

    p = sub.add_parser("verify", help="run a verification sweep")
    p.add_argument("config", nargs="?", help="JSON RunConfig file")
    _add_interval(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--size", type=int)
    p.add_argument("--cfg-count", type=int, dest="cfg_count")
    p.add_argument("--theorems", nargs="+")
    p.add_argument("--families", nargs="+")
    p.add_argument("--form", choices=("printed", "proof"))
    p.add_argument("--scale-rhs", type=float, dest="scale_rhs", help="debug: multiply every RHS")
    p.add_argument("--format", choices=("jsonl", "csv"))
    p.add_argument("--out")

    p = sub.add_parser("report", help="summarise a JSONL or CSV report")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    return parser


def _config_from_args(args) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise ValueError("config: top level must be an object")
    cfg = RunConfig.from_dict({**base, "command": args.command})
    for name in ("a", "u", "v", "b", "tol", "seed", "size", "cfg_count", "theorems", "families", "form",
                 "scale_rhs", "format", "out", "nested"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    if args.command == "eval":
        cfg.f, cfg.g = args.f, args.g
        if args.bounds:
            if len(args.bounds) != 2:
                raise ValueError("eval takes the interval as two numbers A B")
            cfg.a, cfg.b = args.bounds
    if args.command == "bound":
        cfg.constants = {n: getattr(args, f"const_{n}") for n in CONSTANT_NAMES
                         if getattr(args, f"const_{n}") is not None}
    cfg.validate()
    return cfg


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            return cmd_report(args.path, stdout, args.json)
        cfg = _config_from_args(args)
        if args.command == "eval":
            return cmd_eval(cfg, stdout)
        if args.command == "bound":
            return cmd_bound(cfg, args.theorem, stdout, args.json)
        return cmd_verify(cfg, stdout, stderr)
    except (ChebError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
