"""Canonical simplification through a polynomial normal form.

A polynomial maps monomials to rational coefficients.  A monomial is a
sorted tuple of ``(atom, exponent)`` pairs where an atom is any
canonical node that is not a Sum, Prod or Const.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .expr import (
    INF, CeilDiv, Const, CostExpr, Fib, Lucas, Max, Min, Pow, Prod, RecCall,
    SizeVar, Sum, render,
)
from .numeric import fib_value, lucas_value

Monomial = tuple
Poly = dict

_KIND_RANK = {SizeVar: 0, CeilDiv: 1, Max: 2, Min: 3, Pow: 4, Fib: 5, Lucas: 6, RecCall: 7}


class _Inf:
    """Marker for a polynomial that is +infinity."""

    def __repr__(self):
        return "INF"


POLY_INF = _Inf()


def atom_key(a: CostExpr) -> tuple:
    return (_KIND_RANK.get(type(a), 9), render(a))


def mono_degree(m: Monomial) -> int:
    return sum(k for _, k in m)


def mono_key(m: Monomial) -> tuple:
    return (-mono_degree(m), tuple((atom_key(a), -k) for a, k in m))


def poly_const(c) -> Poly:
    c = Fraction(c)
    return {(): c} if c else {}


def poly_atom(a: CostExpr) -> Poly:
    return {((a, 1),): Fraction(1)}


def poly_add(p: Poly, q: Poly) -> Poly:
    if p is POLY_INF or q is POLY_INF:
        return POLY_INF
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_scale(p: Poly, c) -> Poly:
    if p is POLY_INF:
        return POLY_INF if c > 0 else ({} if c == 0 else POLY_INF)
    c = Fraction(c)
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


def poly_sub(p: Poly, q: Poly) -> Poly:
    return poly_add(p, poly_scale(q, -1))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    acc: dict = {}
    for atom, k in a + b:
        acc[atom] = acc.get(atom, 0) + k
    return tuple(sorted(acc.items(), key=lambda ak: atom_key(ak[0])))


def poly_mul(p: Poly, q: Poly) -> Poly:
    if p is POLY_INF or q is POLY_INF:
        other = q if p is POLY_INF else p
        if other is not POLY_INF and not other:
            return {}
        return POLY_INF
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = _mono_mul(m1, m2)
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def poly_is_const(p: Poly) -> bool:
    return p is not POLY_INF and all(not m for m in p)


def poly_const_value(p: Poly):
    if p is POLY_INF:
        return INF
    return p.get((), Fraction(0))


def _poly_only_sizevars(p: Poly) -> bool:
    return all(isinstance(a, SizeVar) for m in p for a, _ in m)


def _syntactically_leq(p: Poly, q: Poly) -> bool:
    """q - p has nonnegative coefficients over size variables only."""
    if p is POLY_INF:
        return q is POLY_INF
    if q is POLY_INF:
        return True
    d = poly_sub(q, p)
    return _poly_only_sizevars(d) and all(c >= 0 for c in d.values())


# -- conversion -------------------------------------------------------------

@lru_cache(maxsize=200_000)
def to_poly(e: CostExpr) -> Poly:
    if isinstance(e, Const):
        if isinstance(e.value, float):
            if e.value > 0:
                return POLY_INF
            raise ValueError("negative infinity is not a cost")
        return poly_const(e.value)
    if isinstance(e, SizeVar):
        return poly_atom(e)
    if isinstance(e, Sum):
        acc: Poly = {}
        for t in e.terms:
            acc = poly_add(acc, to_poly(t))
            if acc is POLY_INF:
                return POLY_INF
        return acc
    if isinstance(e, Prod):
        parts = [to_poly(f) for f in e.factors]
        if any(p is not POLY_INF and not p for p in parts):
            return {}
        acc = poly_const(1)
        for p in parts:
            acc = poly_mul(acc, p)
        return acc
    if isinstance(e, (Max, Min)):
        return _minmax_poly(e)
    if isinstance(e, CeilDiv):
        return _ceildiv_poly(e)
    if isinstance(e, Pow):
        return _pow_poly(e)
    if isinstance(e, (Fib, Lucas)):
        p = to_poly(e.arg)
        if p is POLY_INF:
            return POLY_INF
        if poly_is_const(p):
            v = poly_const_value(p)
            if v.denominator == 1:
                fn = fib_value if isinstance(e, Fib) else lucas_value
                return poly_const(fn(int(v)))
        return poly_atom(type(e)(from_poly(p)))
    if isinstance(e, RecCall):
        args = tuple(simplify(a) for a in e.args)
        return poly_atom(RecCall(e.relation, args))
    raise TypeError(f"not a cost expression: {e!r}")


def _minmax_poly(e: CostExpr) -> Poly:
    is_max = isinstance(e, Max)
    flat: list = []
    stack = list(e.args)
    while stack:
        a = stack.pop()
        if type(a) is type(e):
            stack.extend(a.args)
            continue
        p = to_poly(a)
        if p is not POLY_INF and len(p) == 1:
            (m, c), = p.items()
            if c == 1 and len(m) == 1 and m[0][1] == 1 and type(m[0][0]) is type(e):
                stack.extend(m[0][0].args)
                continue
        flat.append(p)
    if not flat:
        return poly_const(0)
    if is_max:
        if any(p is POLY_INF for p in flat):
            return POLY_INF
    else:
        flat = [p for p in flat if p is not POLY_INF]
        if not flat:
            return POLY_INF
    uniq: list = []
    for p in flat:
        if p not in uniq:
            uniq.append(p)
    consts = [p for p in uniq if poly_is_const(p)]
    others = [p for p in uniq if not poly_is_const(p)]
    if consts:
        vals = [poly_const_value(p) for p in consts]
        others.append(poly_const(max(vals) if is_max else min(vals)))
    kept = []
    for i, p in enumerate(others):
        dominated = False
        for j, q in enumerate(others):
            if i == j:
                continue
            if is_max and _syntactically_leq(p, q) and (p != q or j < i):
                dominated = True
            if not is_max and _syntactically_leq(q, p) and (p != q or j < i):
                dominated = True
            if dominated:
                break
        if not dominated:
            kept.append(p)
    if len(kept) == 1:
        return kept[0]
    args = sorted((from_poly(p) for p in kept), key=render)
    node = Max(tuple(args)) if is_max else Min(tuple(args))
    return poly_atom(node)


def _ceildiv_poly(e: CeilDiv) -> Poly:
    num = to_poly(e.num)
    den = to_poly(e.den)
    if den is POLY_INF:
        return {} if num is not POLY_INF else POLY_INF
    if num is POLY_INF:
        return POLY_INF
    if not num:
        return {}
    if poly_is_const(num) and poly_is_const(den):
        d = poly_const_value(den)
        if d > 0:
            return poly_const(math.ceil(poly_const_value(num) / d))
    if poly_is_const(den) and poly_const_value(den) == 1:
        if all(c.denominator == 1 for c in num.values()):
            return num
    return poly_atom(CeilDiv(from_poly(num), from_poly(den)))


def _pow_poly(e: Pow) -> Poly:
    base = Fraction(e.base)
    ex = to_poly(e.exponent)
    if base == 1:
        return poly_const(1)
    if ex is POLY_INF:
        return POLY_INF if base > 1 else {}
    if poly_is_const(ex):
        v = poly_const_value(ex)
        if v.denominator == 1:
            return poly_const(base ** int(v))
    c = ex.get((), Fraction(0))
    scale = Fraction(1)
    if c and c.denominator == 1:
        scale = base ** int(c)
        ex = dict(ex)
        del ex[()]
    return poly_scale(poly_atom(Pow(base, from_poly(ex))), scale)


def from_poly(p: Poly) -> CostExpr:
    if p is POLY_INF:
        return Const(INF)
    if not p:
        return Const(Fraction(0))
    terms = []
    for m in sorted(p, key=mono_key):
        c = p[m]
        factors = []
        for atom, k in m:
            factors.extend([atom] * k)
        if not factors:
            terms.append(Const(c))
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else Prod(tuple(factors)))
        else:
            terms.append(Prod((Const(c),) + tuple(factors)))
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


@lru_cache(maxsize=200_000)
def simplify(e: CostExpr) -> CostExpr:
    """Canonical form; value preserving for nonnegative size variables."""
    return from_poly(to_poly(e))


def is_canonical(e: CostExpr) -> bool:
    return simplify(e) == e
