"""Cost expression nodes, constructors and canonical text rendering."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

Number = Union[Fraction, float]
INF = math.inf


class CostExpr:
    """Base class of all expression nodes.

    Nodes are immutable and hashable.  Arithmetic operators build
    unsimplified trees; call ``simplify`` to get the canonical form.
    """

    __slots__ = ()

    def __add__(self, other):
        return Sum((self, as_expr(other)))

    def __radd__(self, other):
        return Sum((as_expr(other), self))

    def __sub__(self, other):
        return Sum((self, Prod((Const(Fraction(-1)), as_expr(other)))))

    def __rsub__(self, other):
        return Sum((as_expr(other), Prod((Const(Fraction(-1)), self))))

    def __mul__(self, other):
        return Prod((self, as_expr(other)))

    def __rmul__(self, other):
        return Prod((as_expr(other), self))

    def __neg__(self):
        return Prod((Const(Fraction(-1)), self))

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Const(CostExpr):
    value: Number

    @property
    def is_inf(self) -> bool:
        return isinstance(self.value, float) and math.isinf(self.value)


@dataclass(frozen=True)
class SizeVar(CostExpr):
    name: str


@dataclass(frozen=True)
class Sum(CostExpr):
    terms: tuple


@dataclass(frozen=True)
class Prod(CostExpr):
    factors: tuple


@dataclass(frozen=True)
class Max(CostExpr):
    args: tuple


@dataclass(frozen=True)
class Min(CostExpr):
    args: tuple


@dataclass(frozen=True)
class CeilDiv(CostExpr):
    num: CostExpr
    den: CostExpr


@dataclass(frozen=True)
class Pow(CostExpr):
    base: Fraction
    exponent: CostExpr


@dataclass(frozen=True)
class Fib(CostExpr):
    arg: CostExpr


@dataclass(frozen=True)
class Lucas(CostExpr):
    arg: CostExpr


@dataclass(frozen=True)
class RecCall(CostExpr):
    relation: str
    args: tuple


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
INFINITY = Const(INF)


def as_expr(x) -> CostExpr:
    if isinstance(x, CostExpr):
        return x
    if isinstance(x, str):
        return SizeVar(x)
    if isinstance(x, float) and math.isinf(x):
        return INFINITY
    return Const(Fraction(x))


def const(v) -> Const:
    return as_expr(v) if not isinstance(v, CostExpr) else v


def var(name: str) -> SizeVar:
    return SizeVar(name)


def add(*es) -> CostExpr:
    return Sum(tuple(as_expr(e) for e in es))


def mul(*es) -> CostExpr:
    return Prod(tuple(as_expr(e) for e in es))


def emax(*es) -> CostExpr:
    return Max(tuple(as_expr(e) for e in es))


def emin(*es) -> CostExpr:
    return Min(tuple(as_expr(e) for e in es))


def ceil_div(num, den) -> CostExpr:
    return CeilDiv(as_expr(num), as_expr(den))


def power(base, exponent) -> CostExpr:
    return Pow(Fraction(base), as_expr(exponent))


def fib(arg) -> CostExpr:
    return Fib(as_expr(arg))


def lucas(arg) -> CostExpr:
    return Lucas(as_expr(arg))


def rec(relation: str, *args) -> CostExpr:
    return RecCall(relation, tuple(as_expr(a) for a in args))


# -- traversal helpers ------------------------------------------------------

def children(e: CostExpr) -> tuple:
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Prod):
        return e.factors
    if isinstance(e, (Max, Min)):
        return e.args
    if isinstance(e, CeilDiv):
        return (e.num, e.den)
    if isinstance(e, Pow):
        return (e.exponent,)
    if isinstance(e, (Fib, Lucas)):
        return (e.arg,)
    if isinstance(e, RecCall):
        return e.args
    return ()


def rebuild(e: CostExpr, kids: tuple) -> CostExpr:
    if isinstance(e, Sum):
        return Sum(kids)
    if isinstance(e, Prod):
        return Prod(kids)
    if isinstance(e, Max):
        return Max(kids)
    if isinstance(e, Min):
        return Min(kids)
    if isinstance(e, CeilDiv):
        return CeilDiv(kids[0], kids[1])
    if isinstance(e, Pow):
        return Pow(e.base, kids[0])
    if isinstance(e, Fib):
        return Fib(kids[0])
    if isinstance(e, Lucas):
        return Lucas(kids[0])
    if isinstance(e, RecCall):
        return RecCall(e.relation, kids)
    return e


def transform(e: CostExpr, fn: Callable[[CostExpr], CostExpr | None]) -> CostExpr:
    """Bottom-up rewrite; ``fn`` returns a replacement or None to keep."""
    kids = children(e)
    if kids:
        new = tuple(transform(k, fn) for k in kids)
        if new != kids:
            e = rebuild(e, new)
    out = fn(e)
    return e if out is None else out


def walk(e: CostExpr) -> Iterable[CostExpr]:
    stack = [e]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(children(cur))


def free_vars(e: CostExpr) -> set[str]:
    return {n.name for n in walk(e) if isinstance(n, SizeVar)}


def reccalls(e: CostExpr) -> list[RecCall]:
    return [n for n in walk(e) if isinstance(n, RecCall)]


def has_reccall(e: CostExpr) -> bool:
    return any(isinstance(n, RecCall) for n in walk(e))


def substitute(e: CostExpr, mapping: dict) -> CostExpr:
    """Simultaneous substitution of size variables."""
    if not mapping:
        return e
    mapping = {k: as_expr(v) for k, v in mapping.items()}

    def fn(node):
        if isinstance(node, SizeVar) and node.name in mapping:
            return mapping[node.name]
        return None

    return transform(e, fn)


def replace_reccalls(e: CostExpr, fn: Callable[[RecCall], CostExpr]) -> CostExpr:
    def visit(node):
        if isinstance(node, RecCall):
            return fn(node)
        return None

    return transform(e, visit)


# -- rendering --------------------------------------------------------------

def _fmt_number(v: Number) -> str:
    if isinstance(v, float):
        return "inf" if v > 0 else "-inf"
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _is_negative_term(t: CostExpr) -> bool:
    if isinstance(t, Const):
        return not isinstance(t.value, float) and t.value < 0
    if isinstance(t, Prod) and t.factors and isinstance(t.factors[0], Const):
        v = t.factors[0].value
        return not isinstance(v, float) and v < 0
    return False


def _negate_term(t: CostExpr) -> CostExpr:
    if isinstance(t, Const):
        return Const(-t.value)
    c = -t.factors[0].value
    rest = t.factors[1:]
    if c == 1:
        return rest[0] if len(rest) == 1 else Prod(rest)
    return Prod((Const(c),) + rest)


def render(e: CostExpr) -> str:
    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, SizeVar):
        return e.name
    if isinstance(e, Sum):
        if not e.terms:
            return "0"
        parts = []
        for i, t in enumerate(e.terms):
            if i and _is_negative_term(t):
                parts.append(" - " + _render_factor(_negate_term(t), in_sum=True))
            else:
                parts.append((" + " if i else "") + _render_factor(t, in_sum=True))
        return "".join(parts)
    if isinstance(e, Prod):
        if not e.factors:
            return "1"
        if (len(e.factors) >= 2 and isinstance(e.factors[0], Const)
                and e.factors[0].value == -1):
            return "-" + "*".join(_render_factor(f) for f in e.factors[1:])
        return "*".join(_render_factor(f) for f in e.factors)
    if isinstance(e, Max):
        return "max(" + ", ".join(render(a) for a in e.args) + ")"
    if isinstance(e, Min):
        return "min(" + ", ".join(render(a) for a in e.args) + ")"
    if isinstance(e, CeilDiv):
        return f"ceil({_render_div_part(e.num, num=True)}/{_render_div_part(e.den, num=False)})"
    if isinstance(e, Pow):
        return f"exp({_fmt_number(e.base)},{render(e.exponent)})"
    if isinstance(e, Fib):
        return f"fib({render(e.arg)})"
    if isinstance(e, Lucas):
        return f"lucas({render(e.arg)})"
    if isinstance(e, RecCall):
        return f"{e.relation}(" + ", ".join(render(a) for a in e.args) + ")"
    raise TypeError(f"not a cost expression: {e!r}")


def _render_factor(f: CostExpr, in_sum: bool = False) -> str:
    if isinstance(f, Sum) and len(f.terms) > 1:
        return "(" + render(f) + ")"
    if isinstance(f, Const) and not in_sum:
        if not isinstance(f.value, float) and (f.value.denominator != 1 or f.value < 0):
            return "(" + _fmt_number(f.value) + ")" if f.value < 0 else _fmt_number(f.value)
    return render(f)


def _render_div_part(e: CostExpr, num: bool) -> str:
    if isinstance(e, Sum) and len(e.terms) > 1:
        return "(" + render(e) + ")"
    if not num and isinstance(e, Prod):
        return "(" + render(e) + ")"
    if isinstance(e, Const) and not isinstance(e.value, float) and e.value.denominator != 1:
        return "(" + render(e) + ")"
    return render(e)
