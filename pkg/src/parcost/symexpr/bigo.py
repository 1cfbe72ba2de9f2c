from __future__ import annotations

import re
from fractions import Fraction

from .domain import Domain
from .expr import (
    CeilDiv, Const, CostExpr, Fib, Lucas, Max, Min, Pow, Prod, Sum,
    transform,
)
from .simplify import POLY_INF, from_poly, mono_degree, simplify, to_poly


def _expand_max(e: CostExpr) -> CostExpr:
    # max(a, b) and a + b have the same order of growth; a min with a
    # constant argument is bounded
    def fn(node):
        if isinstance(node, Max):
            return Sum(node.args)
        if isinstance(node, Min):
            consts = [a for a in node.args if isinstance(a, Const)]
            if consts:
                return min(consts, key=lambda c: c.value)
        return None

    return transform(e, fn)


def _rank(m: tuple) -> tuple:
    exp_count = 0
    degree = 0
    ceils = 0
    for atom, k in m:
        if isinstance(atom, (Pow, Fib, Lucas)):
            exp_count += k
        elif isinstance(atom, CeilDiv):
            p = to_poly(atom.num)
            deg = max((mono_degree(x) for x in p), default=0) if p is not POLY_INF else 0
            degree += deg * k
            ceils += k
        else:
            degree += k
    return (exp_count, degree, -ceils)


def _normalize_atom(a: CostExpr) -> CostExpr:
    if isinstance(a, (Fib, Lucas)):
        return Pow(Fraction(2), a.arg)
    return a


def leading_monomials(e: CostExpr) -> list[tuple]:
    p = to_poly(simplify(_expand_max(simplify(e))))
    if p is POLY_INF:
        return []
    cands = [m for m, c in p.items() if c > 0]
    if not cands:
        return [()]
    best = max(_rank(m) for m in cands)
    return [m for m in cands if _rank(m) == best]


def big_o(e: CostExpr, d: Domain | None = None) -> CostExpr:
    """Order of growth: dominant monomials with unit coefficients."""
    s = simplify(e)
    if isinstance(s, Const):
        return s if s.is_inf else Const(Fraction(1))
    out: dict = {}
    for m in leading_monomials(s):
        factors = []
        for atom, k in m:
            factors.extend([_normalize_atom(atom)] * k)
        term = Prod(tuple(factors)) if factors else Const(Fraction(1))
        out[simplify(term)] = None
    if not out:
        return Const(Fraction(1))
    monos = {}
    for t in out:
        for m in to_poly(t):
            monos[m] = Fraction(1)
    return from_poly(monos)


def render_big_o(e: CostExpr, d: Domain | None = None) -> str:
    from .expr import render

    text = render(big_o(e, d))
    return "O(" + re.sub(r"exp\((\d+),([A-Za-z_]\w*)\)", r"\1^\2", text) + ")"


__all__ = ["big_o", "render_big_o", "leading_monomials"]
