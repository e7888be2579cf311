"""Expression trees for univariate real functions.

The grammar (whitespace insignificant)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := unary ("^" factor)?
    unary  := ("-")? atom
    atom   := number | "x" | fn "(" expr ")" | "(" expr ")" | piecewise
    fn     := "sin"|"cos"|"exp"|"log"|"abs"|"sign"|"sqrt"
    piecewise := "piecewise(" ("(" cond "," expr ")" ",")+ expr ")"
    cond   := "x" ("<"|"<=") number

Unary minus binds tighter than ``^``, so ``-x^2`` is ``(-x)^2``.  A minus
directly in front of a number literal is folded into the literal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import ExpressionSyntaxError, UnknownIdentifierError

FUNCTIONS = ("sin", "cos", "exp", "log", "abs", "sign", "sqrt")


class Node:
    """Base class of all expression nodes (immutable, structurally comparable)."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    fn: str
    arg: Node


@dataclass(frozen=True)
class Branch:
    op: str  # "<" or "<="
    threshold: float
    expr: Node


@dataclass(frozen=True)
class Piecewise(Node):
    branches: tuple[Branch, ...]
    otherwise: Node


# --------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<le><=)
  | (?P<op>[-+*/^(),<])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(source: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {source[pos]!r}", pos, source)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            toks.append(_Tok(text if kind in ("op", "le") else kind, text, pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(source)))
    return toks


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.toks = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            what = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExpressionSyntaxError(f"expected {kind!r}, found {what}", self.tok.pos, self.source)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.tok.text!r}", self.tok.pos, self.source)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self.tok.kind == "^":
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Node:
        if self.tok.kind == "-":
            self.advance()
            arg = self.atom()
            if isinstance(arg, Num):
                return Num(-arg.value)
            return Neg(arg)
        return self.atom()

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "name":
            if t.text == "x":
                self.advance()
                return Var()
            if t.text == "piecewise":
                return self.piecewise()
            if t.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            raise UnknownIdentifierError(f"unknown identifier {t.text!r}", t.pos, self.source)
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ExpressionSyntaxError(f"unexpected {what}", t.pos, self.source)

    def _at_condition(self) -> bool:
        toks = self.toks
        if self.i + 2 >= len(toks):
            return False
        return (
            toks[self.i].kind == "("
            and toks[self.i + 1].kind == "name"
            and toks[self.i + 1].text == "x"
            and toks[self.i + 2].kind in ("<", "<=")
        )

    def piecewise(self) -> Node:
        self.advance()
        self.expect("(")
        branches = []
        while self._at_condition():
            self.advance()
            self.advance()
            op = self.advance().kind
            sign = 1.0
            if self.tok.kind == "-":
                self.advance()
                sign = -1.0
            threshold = sign * float(self.expect("num").text)
            self.expect(",")
            body = self.expr()
            self.expect(")")
            self.expect(",")
            branches.append(Branch(op, threshold, body))
        if not branches:
            raise ExpressionSyntaxError("piecewise needs at least one (condition, expr) branch",
                                        self.tok.pos, self.source)
        otherwise = self.expr()
        self.expect(")")
        return Piecewise(tuple(branches), otherwise)


def parse(source: str) -> Node:
    """Parse ``source`` into an expression tree."""
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# printing

def _fmt_num(v: float) -> str:
    return repr(float(v))


def _wrap(node: Node) -> str:
    s = to_source(node)
    if isinstance(node, (BinOp, Neg)) or (isinstance(node, Num) and np.signbit(node.value)):
        return f"({s})"
    return s


def to_source(node: Node) -> str:
    """Render a tree as source text that reparses to an identical tree."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg)
    if isinstance(node, BinOp):
        return f"{_wrap(node.left)} {node.op} {_wrap(node.right)}"
    if isinstance(node, Call):
        return f"{node.fn}({to_source(node.arg)})"
    if isinstance(node, Piecewise):
        parts = [f"(x {b.op} {_fmt_num(b.threshold)}, {to_source(b.expr)})" for b in node.branches]
        parts.append(to_source(node.otherwise))
        return "piecewise(" + ", ".join(parts) + ")"
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# traversal and evaluation

def walk(node: Node) -> Iterator[Node]:
    yield node
    if isinstance(node, Neg):
        yield from walk(node.arg)
    elif isinstance(node, BinOp):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Call):
        yield from walk(node.arg)
    elif isinstance(node, Piecewise):
        for b in node.branches:
            yield from walk(b.expr)
        yield from walk(node.otherwise)


def has_var(node: Node) -> bool:
    """Whether ``x`` appears outside piecewise conditions (false means the
    derivative vanishes almost everywhere)."""
    return any(isinstance(n, Var) for n in walk(node))


def is_constant(node: Node) -> bool:
    """Whether the tree evaluates to the same value for every ``x``;
    piecewise conditions count as depending on ``x``."""
    return not any(isinstance(n, (Var, Piecewise)) for n in walk(node))


_UFUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
    "abs": np.abs,
    "sign": np.sign,
    "sqrt": np.sqrt,
}

_BINOPS = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": np.power,
}

Kernel = Callable[[np.ndarray], np.ndarray]


def compile_node(node: Node) -> Kernel:
    """Turn a tree into a closure evaluating it on float arrays.

    Invalid operations produce nan/inf rather than raising; callers decide
    whether that is an error.
    """
    if isinstance(node, Num):
        v = node.value
        return lambda x: v
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        inner = compile_node(node.arg)
        return lambda x: np.negative(inner(x))
    if isinstance(node, BinOp):
        fl, fr, op = compile_node(node.left), compile_node(node.right), _BINOPS[node.op]
        return lambda x: op(fl(x), fr(x))
    if isinstance(node, Call):
        inner, fn = compile_node(node.arg), _UFUNCS[node.fn]
        return lambda x: fn(inner(x))
    if isinstance(node, Piecewise):
        tests = [(np.less if b.op == "<" else np.less_equal, b.threshold) for b in node.branches]
        bodies = [compile_node(b.expr) for b in node.branches]
        other = compile_node(node.otherwise)

        def piecewise(x):
            x = np.asarray(x, dtype=float)
            out = np.broadcast_to(np.asarray(other(x), dtype=float), x.shape).copy()
            # fill back-to-front so the first matching branch wins
            for (test, thr), body in zip(reversed(tests), reversed(bodies)):
                mask = test(x, thr)
                if np.any(mask):
                    out[mask] = np.broadcast_to(np.asarray(body(x), dtype=float), x.shape)[mask]
            return out

        return piecewise
    raise TypeError(f"not an expression node: {node!r}")


OffsetKernel = Callable[[np.ndarray, np.ndarray], np.ndarray]


def compile_offset(node: Node) -> OffsetKernel:
    """Like :func:`compile_node`, but the point is given as ``x + x_lo`` with a
    small correction ``x_lo``.

    The correction is carried through negation, sums and products with
    constants, so that ``abs(x - c)`` stays accurate for points closer to
    ``c`` than the float spacing at ``c``.
    """
    pair = _compile_pair(node)

    def kernel(x, x_lo):
        v, lo = pair(x, x_lo)
        return v + lo

    return kernel


def _compile_pair(node: Node):
    if isinstance(node, Num):
        v = node.value
        return lambda x, lo: (v, 0.0)
    if isinstance(node, Var):
        return lambda x, lo: (x, lo)
    if isinstance(node, Neg):
        inner = _compile_pair(node.arg)

        def neg(x, lo):
            v, l = inner(x, lo)
            return -v, -l

        return neg
    if isinstance(node, BinOp) and node.op in ("+", "-"):
        fl, fr = _compile_pair(node.left), _compile_pair(node.right)
        sgn = 1.0 if node.op == "+" else -1.0

        def addsub(x, lo):
            v1, l1 = fl(x, lo)
            v2, l2 = fr(x, lo)
            return v1 + sgn * v2, l1 + sgn * l2

        return addsub
    if isinstance(node, BinOp) and node.op == "*" and (not has_var(node.left) or not has_var(node.right)):
        fl, fr = _compile_pair(node.left), _compile_pair(node.right)

        def mul(x, lo):
            v1, l1 = fl(x, lo)
            v2, l2 = fr(x, lo)
            return v1 * v2, l1 * v2 + l2 * v1

        return mul
    if isinstance(node, Piecewise):
        tests = [(np.less if b.op == "<" else np.less_equal, b.threshold) for b in node.branches]
        bodies = [_compile_pair(b.expr) for b in node.branches]
        other = _compile_pair(node.otherwise)

        def full(body, x, lo):
            v, l = body(x, lo)
            return np.broadcast_to(np.asarray(v + l, dtype=float), x.shape)

        def piecewise(x, lo):
            x = np.asarray(x, dtype=float)
            lo = np.broadcast_to(np.asarray(lo, dtype=float), x.shape)
            out = full(other, x, lo).copy()
            for (test, thr), body in zip(reversed(tests), reversed(bodies)):
                mask = test((x - thr) + lo, 0.0)
                if np.any(mask):
                    out[mask] = full(body, x, lo)[mask]
            return out, 0.0

        return piecewise
    if isinstance(node, BinOp):
        fl, fr, op = _compile_pair(node.left), _compile_pair(node.right), _BINOPS[node.op]

        def generic(x, lo):
            v1, l1 = fl(x, lo)
            v2, l2 = fr(x, lo)
            return op(v1 + l1, v2 + l2), 0.0

        return generic
    if isinstance(node, Call):
        inner, fn = _compile_pair(node.arg), _UFUNCS[node.fn]

        def call(x, lo):
            v, l = inner(x, lo)
            return fn(v + l), 0.0

        return call
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# symbolic differentiation

ZERO, ONE = Num(0.0), Num(1.0)


def _is(node: Node, v: float) -> bool:
    return isinstance(node, Num) and node.value == v


def _neg(a: Node) -> Node:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _add(a: Node, b: Node) -> Node:
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def _sub(a: Node, b: Node) -> Node:
    if _is(b, 0):
        return a
    if _is(a, 0):
        return _neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return BinOp("-", a, b)


def _mul(a: Node, b: Node) -> Node:
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def _div(a: Node, b: Node) -> Node:
    if _is(a, 0):
        return ZERO
    if _is(b, 1):
        return a
    return BinOp("/", a, b)


def _pow(a: Node, b: Node) -> Node:
    if _is(b, 1):
        return a
    if _is(b, 0):
        return ONE
    return BinOp("^", a, b)


def derivative(node: Node) -> Node:
    """Symbolic derivative in ``x``.

    ``sign`` differentiates to 0 and ``abs`` to ``sign(u)*u'``; both are only
    valid away from the zeros of their argument, which callers must track as
    breakpoints.
    """
    if isinstance(node, Num):
        return ZERO
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Neg):
        return _neg(derivative(node.arg))
    if isinstance(node, BinOp):
        u, v = node.left, node.right
        if node.op == "+":
            return _add(derivative(u), derivative(v))
        if node.op == "-":
            return _sub(derivative(u), derivative(v))
        if node.op == "*":
            return _add(_mul(derivative(u), v), _mul(u, derivative(v)))
        if node.op == "/":
            du, dv = derivative(u), derivative(v)
            if not has_var(v):
                return _div(du, v)
            return _div(_sub(_mul(du, v), _mul(u, dv)), _pow(v, Num(2.0)))
        if node.op == "^":
            if not has_var(v):
                expo = Num(v.value - 1.0) if isinstance(v, Num) else _sub(v, ONE)
                return _mul(_mul(v, _pow(u, expo)), derivative(u))
            if not has_var(u):
                return _mul(_mul(node, Call("log", u)), derivative(v))
            return _mul(node, _add(_mul(derivative(v), Call("log", u)),
                                   _div(_mul(v, derivative(u)), u)))
    if isinstance(node, Call):
        u = node.arg
        du = derivative(u)
        if _is(du, 0):
            return ZERO
        if node.fn == "sin":
            return _mul(Call("cos", u), du)
        if node.fn == "cos":
            return _neg(_mul(Call("sin", u), du))
        if node.fn == "exp":
            return _mul(node, du)
        if node.fn == "log":
            return _div(du, u)
        if node.fn == "sqrt":
            return _div(du, _mul(Num(2.0), node))
        if node.fn == "abs":
            return _mul(Call("sign", u), du)
        if node.fn == "sign":
            return ZERO
    if isinstance(node, Piecewise):
        return Piecewise(
            tuple(Branch(b.op, b.threshold, derivative(b.expr)) for b in node.branches),
            derivative(node.otherwise),
        )
    raise TypeError(f"not an expression node: {node!r}")
