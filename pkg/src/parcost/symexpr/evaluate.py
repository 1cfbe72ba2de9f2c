from __future__ import annotations

import math
from fractions import Fraction

from .expr import (
    INF, CeilDiv, Const, CostExpr, Fib, Lucas, Max, Min, Pow, Prod, RecCall,
    SizeVar, Sum,
)
from .numeric import fib_value, lucas_value


class UnboundVariable(KeyError):
    pass


class UnresolvedRecCall(ValueError):
    pass


def _is_inf(v) -> bool:
    return isinstance(v, float) and math.isinf(v)


def evaluate(e: CostExpr, env: dict):
    """Exact value of ``e``: a Fraction, or ``math.inf``."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, SizeVar):
        try:
            return Fraction(env[e.name])
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Sum):
        vals = [evaluate(t, env) for t in e.terms]
        if any(_is_inf(v) for v in vals):
            return INF
        return sum(vals, Fraction(0))
    if isinstance(e, Prod):
        vals = [evaluate(f, env) for f in e.factors]
        if any(v == 0 for v in vals if not _is_inf(v)):
            return Fraction(0)
        if any(_is_inf(v) for v in vals):
            neg = sum(1 for v in vals if not _is_inf(v) and v < 0) % 2
            return -INF if neg else INF
        out = Fraction(1)
        for v in vals:
            out *= v
        return out
    if isinstance(e, Max):
        return max(evaluate(a, env) for a in e.args)
    if isinstance(e, Min):
        return min(evaluate(a, env) for a in e.args)
    if isinstance(e, CeilDiv):
        n = evaluate(e.num, env)
        d = evaluate(e.den, env)
        if _is_inf(n):
            return INF
        if _is_inf(d):
            return Fraction(0)
        if d <= 0:
            raise ZeroDivisionError(f"ceil division by {d}")
        return Fraction(math.ceil(n / d))
    if isinstance(e, Pow):
        x = evaluate(e.exponent, env)
        if _is_inf(x):
            return INF
        if x.denominator != 1:
            raise ValueError("non-integer exponent")
        return Fraction(e.base) ** int(x)
    if isinstance(e, (Fib, Lucas)):
        x = evaluate(e.arg, env)
        if _is_inf(x) or x.denominator != 1:
            raise ValueError("Fibonacci/Lucas need an integer argument")
        fn = fib_value if isinstance(e, Fib) else lucas_value
        return Fraction(fn(int(x)))
    if isinstance(e, RecCall):
        raise UnresolvedRecCall(e.relation)
    raise TypeError(f"not a cost expression: {e!r}")
