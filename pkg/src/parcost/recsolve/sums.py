"""Closed forms of finite sums over the recursion variable."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from ..symexpr import Const, CostExpr, Pow, SizeVar, free_vars, simplify
from ..symexpr.simplify import POLY_INF, from_poly, poly_add, poly_mul, to_poly

MAX_DEGREE = 8


@lru_cache(maxsize=None)
def bernoulli_plus(n: int) -> Fraction:
    """Bernoulli numbers with B1 = +1/2."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    out = b[n]
    return -out if n == 1 else out


@lru_cache(maxsize=None)
def faulhaber_coeffs(k: int) -> tuple:
    """Coefficients c_j with sum_{i=1}^{n} i^k = sum_j c_j n^j."""
    coeffs = [Fraction(0)] * (k + 2)
    for i in range(k + 1):
        coeffs[k + 1 - i] += Fraction(comb(k + 1, i)) * bernoulli_plus(i) / (k + 1)
    return tuple(coeffs)


def power_sum(k: int, n: CostExpr) -> CostExpr:
    """sum_{i=1}^{n} i^k as a polynomial in n."""
    cs = faulhaber_coeffs(k)
    terms = []
    for j, c in enumerate(cs):
        if c:
            terms.append(Const(c) * _pow(n, j))
    return simplify(sum(terms[1:], terms[0]) if terms else Const(Fraction(0)))


def _pow(e: CostExpr, j: int) -> CostExpr:
    out: CostExpr = Const(Fraction(1))
    for _ in range(j):
        out = out * e
    return out


def power_sum_value(k: int, n: int) -> Fraction:
    return sum(Fraction(c) * n ** j for j, c in enumerate(faulhaber_coeffs(k)))


def _split_monomial(m, v: str):
    """Return (degree of v, Pow base or None, rest monomial) or None."""
    deg, base, rest = 0, None, []
    for a, k in m:
        if isinstance(a, SizeVar) and a.name == v:
            deg += k
        elif isinstance(a, Pow) and simplify(a.exponent) == SizeVar(v):
            if base is not None:
                return None
            base = a.base ** k
        elif v in free_vars(a):
            return None
        else:
            rest.append((a, k))
    return deg, base, tuple(rest)


def range_sum(c: CostExpr, v: str, theta: int) -> CostExpr | None:
    """sum_{j=theta+1}^{v} c(j) in closed form, or None when the summand
    is outside the supported classes (polynomial in v of bounded degree,
    or a geometric term a^v)."""
    p = to_poly(simplify(c))
    if p is POLY_INF:
        return None
    x = SizeVar(v)
    acc: dict = {}
    for m, coef in p.items():
        split = _split_monomial(m, v)
        if split is None:
            return None
        deg, base, rest = split
        rest_poly = {rest: coef}
        if base is None:
            if deg > MAX_DEGREE:
                return None
            s = simplify(power_sum(deg, x) - Const(power_sum_value(deg, theta)))
        else:
            if deg:
                return None
            # sum_{j=theta+1}^{v} a^j = (a^(v+1) - a^(theta+1)) / (a - 1)
            a = Fraction(base)
            if a == 1:
                s = simplify(x - theta)
            else:
                s = simplify((Pow(a, x) * Const(a) - Const(a ** (theta + 1))) * Const(1 / (a - 1)))
        acc = poly_add(acc, poly_mul(to_poly(s), rest_poly))
    return from_poly(acc)
