"""Parser for the canonical text rendering of cost expressions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .expr import (
    INFINITY, CeilDiv, Const, CostExpr, Fib, Lucas, Max, Min, Pow, Prod,
    RecCall, SizeVar, Sum,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ExprSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class _Div:
    num: CostExpr
    den: CostExpr


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, recnames: frozenset):
        self.toks = _tokens(text)
        self.i = 0
        self.recnames = recnames
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ExprSyntaxError(f"expected {expected or 'token'} in {self.text!r}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self):
        terms = [self.term()]
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            terms.append(t if op == "+" else Prod((Const(Fraction(-1)), _resolve(t))))
        if len(terms) == 1:
            return terms[0]
        return Sum(tuple(_resolve(t) for t in terms))

    def term(self):
        node = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                node = Prod((_resolve(node), _resolve(rhs)))
            else:
                node = _Div(_resolve(node), _resolve(rhs))
        return node

    def unary(self):
        if self.peek() == "-":
            self.take()
            return Prod((Const(Fraction(-1)), _resolve(self.unary())))
        return self.atom()

    def args(self):
        self.take("(")
        out = [self.expr()]
        while self.peek() == ",":
            self.take()
            out.append(self.expr())
        self.take(")")
        return out

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return Const(Fraction(int(tok)))
        if tok == "(":
            e = self.expr()
            self.take(")")
            return e
        if tok[0].isalpha() or tok[0] == "_":
            if tok == "inf":
                return INFINITY
            if self.peek() != "(":
                return SizeVar(tok)
            args = self.args()
            if tok == "ceil":
                if len(args) != 1 or not isinstance(args[0], _Div):
                    raise ExprSyntaxError("ceil expects a/b")
                return CeilDiv(args[0].num, args[0].den)
            args = [_resolve(a) for a in args]
            if tok in ("max", "min"):
                return (Max if tok == "max" else Min)(tuple(args))
            if tok == "exp":
                if len(args) != 2 or not isinstance(args[0], Const):
                    raise ExprSyntaxError("exp expects a constant base")
                return Pow(args[0].value, args[1])
            if tok in ("fib", "lucas"):
                if len(args) != 1:
                    raise ExprSyntaxError(f"{tok} expects one argument")
                return (Fib if tok == "fib" else Lucas)(args[0])
            return RecCall(tok, tuple(args))
        raise ExprSyntaxError(f"unexpected {tok!r} in {self.text!r}")


def _resolve(node):
    if isinstance(node, _Div):
        num, den = _resolve(node.num), _resolve(node.den)
        if isinstance(den, Const) and not den.is_inf and den.value != 0:
            return Prod((num, Const(1 / Fraction(den.value))))
        raise ExprSyntaxError("division by a non-constant outside ceil(...)")
    return node


def parse_expr(text: str, recnames: frozenset = frozenset()) -> CostExpr:
    p = _Parser(text, recnames)
    if not p.toks:
        raise ExprSyntaxError("empty expression")
    e = _resolve(p.expr())
    if p.peek() is not None:
        raise ExprSyntaxError(f"trailing input {p.peek()!r} in {text!r}")
    return e
