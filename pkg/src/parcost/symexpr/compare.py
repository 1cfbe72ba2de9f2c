"""Conservative comparison and monotonicity certificates.

``prove_leq`` answers Proved only with a syntactic certificate that the
difference of the two sides is nonnegative on the domain.  It never
evaluates numerically to decide a Proved verdict; numeric sampling is
only used to give up early on claims that are visibly false.
"""

from __future__ import annotations

import enum
import random
import zlib
from fractions import Fraction

from .domain import Constraint, Domain, NonLinearConstraint, fm_satisfiable
from .evaluate import evaluate
from .expr import (
    CeilDiv, Const, CostExpr, Fib, Lucas, Max, Min, Pow, RecCall, SizeVar,
    free_vars, has_reccall, render,
)
from .simplify import (
    POLY_INF, from_poly, poly_add, poly_atom, poly_mul, poly_scale, poly_sub,
    simplify, to_poly,
)

DEFAULT_BUDGET = 64


class Verdict(enum.Enum):
    PROVED = "Proved"
    UNKNOWN = "Unknown"

    def __bool__(self):
        return self is Verdict.PROVED


class Mono(enum.Enum):
    YES = "Yes"
    UNKNOWN = "Unknown"

    def __bool__(self):
        return self is Mono.YES


class _Budget:
    def __init__(self, steps: int):
        self.steps = steps

    def spend(self) -> bool:
        self.steps -= 1
        return self.steps >= 0


def _lower(d: Domain | None, name: str) -> Fraction:
    lb = d.lower_bound(name) if d is not None else None
    if lb is None or lb < 0:
        return Fraction(0)
    return Fraction(lb)


# -- nonnegativity of atoms -------------------------------------------------

def atom_nonneg(a: CostExpr, d: Domain | None) -> bool:
    if isinstance(a, SizeVar):
        return True
    if isinstance(a, Max):
        return any(expr_nonneg(x, d) for x in a.args)
    if isinstance(a, Min):
        return all(expr_nonneg(x, d) for x in a.args)
    if isinstance(a, CeilDiv):
        return expr_nonneg(a.num, d) and expr_positive(a.den, d)
    if isinstance(a, Pow):
        return a.base > 0
    if isinstance(a, (Fib, Lucas)):
        return expr_nonneg(a.arg, d)
    if isinstance(a, RecCall):
        return True
    return False


def _poly_nonneg_simple(p, d: Domain | None) -> bool:
    """All coefficients >= 0 after shifting variables by their lower bounds."""
    if p is POLY_INF:
        return True
    p = _shift_lower_bounds(p, d)
    for m, c in p.items():
        if c < 0:
            return False
        if not all(atom_nonneg(a, d) for a, _ in m):
            return False
    return True


def _shift_lower_bounds(p, d: Domain | None):
    if d is None:
        return p
    shifts = {}
    for m in p:
        for a, _ in m:
            if isinstance(a, SizeVar) and a.name not in shifts:
                lb = _lower(d, a.name)
                if lb:
                    shifts[a.name] = lb
    if not shifts:
        return p
    out: dict = {}
    for m, c in p.items():
        term = {(): c}
        for a, k in m:
            if isinstance(a, SizeVar) and a.name in shifts:
                base = poly_add(poly_atom(a), {(): shifts[a.name]})
            else:
                base = poly_atom(a)
            for _ in range(k):
                term = poly_mul(term, base)
        out = poly_add(out, term)
    return out


def expr_nonneg(e: CostExpr, d: Domain | None = None) -> bool:
    return _poly_nonneg_simple(to_poly(simplify(e)), d)


def expr_positive(e: CostExpr, d: Domain | None = None) -> bool:
    p = to_poly(simplify(e))
    if p is POLY_INF:
        return True
    return _poly_nonneg_simple(poly_sub(p, {(): Fraction(1)}), d) or (
        _poly_nonneg_simple(p, d) and p.get((), 0) > 0)


# -- the certificate search --------------------------------------------------

def _linear_certificate(p, d: Domain | None) -> bool:
    coeffs: dict = {}
    const = Fraction(0)
    for m, c in p.items():
        if not m:
            const = c
        elif len(m) == 1 and m[0][1] == 1 and isinstance(m[0][0], SizeVar):
            coeffs[m[0][0].name] = c
        else:
            return False
    cs = list(d.constraints) if d is not None else []
    for name in coeffs:
        cs.append(Constraint.make({name: 1}, 0))
    # p < 0 must be infeasible
    cs.append(Constraint.make({k: -v for k, v in coeffs.items()}, -const, True))
    return not fm_satisfiable(cs)


def _cofactor_sign(m: tuple, skip, c: Fraction, d) -> int:
    """+1 when coefficient*cofactor >= 0, -1 when <= 0, 0 unknown."""
    rest = [(a, k) for a, k in m if a is not skip and a != skip]
    if not all(atom_nonneg(a, d) for a, _ in rest):
        return 0
    return 1 if c > 0 else -1


def _replace_atom(p, atom, repl_poly):
    out: dict = {}
    for m, c in p.items():
        if not any(a == atom for a, _ in m):
            out = poly_add(out, {m: c})
            continue
        term = {(): c}
        for a, k in m:
            base = repl_poly if a == atom else poly_atom(a)
            for _ in range(k):
                term = poly_mul(term, base)
        out = poly_add(out, term)
    return out


def _args_leq(xs: tuple, ys: tuple, d, budget) -> bool:
    if len(xs) != len(ys):
        return False
    return all(_nonneg(poly_sub(to_poly(y), to_poly(x)), d, budget) for x, y in zip(xs, ys))


def _nonneg(p, d: Domain | None, budget: _Budget) -> bool:
    if p is POLY_INF:
        return True
    if _poly_nonneg_simple(p, d):
        return True
    if d is not None and _linear_certificate(p, d):
        return True
    if not budget.spend():
        return False
    split_all = []
    split_any = []
    for m, c in sorted(p.items(), key=lambda mc: (-abs(mc[1]), repr(mc[0]))):
        for a, k in m:
            sign = _cofactor_sign(m, a, c, d) if k == 1 else 0
            if isinstance(a, (Max, Min)):
                # the node equals one of its arguments pointwise, so proving
                # every substitution is sound whatever the cofactor
                if sign == 0 or (isinstance(a, Max) and sign < 0) or (isinstance(a, Min) and sign > 0):
                    split_all.append(a)
                else:
                    split_any.append(a)
    if split_all:
        a = split_all[0]
        return all(_nonneg(_replace_atom(p, a, to_poly(x)), d, budget) for x in a.args)
    for a in split_any:
        if any(_nonneg(_replace_atom(p, a, to_poly(x)), d, budget) for x in a.args):
            return True
        if budget.steps < 0:
            return False
    for m, c in p.items():
        for a, k in m:
            if k != 1:
                continue
            sign = _cofactor_sign(m, a, c, d)
            if isinstance(a, RecCall) and sign < 0:
                # f(u) <= f(v) when u <= v pointwise (uninterpreted, nondecreasing)
                for m2, c2 in p.items():
                    for b, k2 in m2:
                        if (isinstance(b, RecCall) and b.relation == a.relation and b != a
                                and k2 == 1 and _cofactor_sign(m2, b, c2, d) > 0
                                and _args_leq(a.args, b.args, d, budget)):
                            if _nonneg(_replace_atom(p, a, poly_atom(b)), d, budget):
                                return True
            if sign > 0 and isinstance(a, Pow) and a.base >= 1 and expr_nonneg(a.exponent, d):
                if _nonneg(_replace_atom(p, a, {(): Fraction(1)}), d, budget):
                    return True
            if sign > 0 and isinstance(a, Lucas) and expr_nonneg(a.arg, d):
                if _nonneg(_replace_atom(p, a, {(): Fraction(1)}), d, budget):
                    return True
    return False


def _sample_envs(names, d: Domain | None, rng: random.Random, count: int):
    names = sorted(names)
    envs = []
    tries = 0
    while len(envs) < count and tries < count * 20:
        tries += 1
        env = {}
        for n in names:
            lo = int(_lower(d, n))
            env[n] = lo + rng.choice((0, 0, 1, 2, 3, rng.randint(0, 12), rng.randint(0, 40)))
        if d is None or d.holds(env):
            envs.append(env)
    return envs


def _refuted(e1: CostExpr, e2: CostExpr, d: Domain | None) -> bool:
    if has_reccall(e1) or has_reccall(e2):
        return False
    names = free_vars(e1) | free_vars(e2) | (d.vars() if d is not None else set())
    rng = random.Random(zlib.crc32(f"{render(e1)}|{render(e2)}".encode()))
    for env in _sample_envs(names, d, rng, 6):
        try:
            if evaluate(e1, env) > evaluate(e2, env):
                return True
        except (ValueError, ZeroDivisionError):
            return False
    return False


def prove_leq(e1: CostExpr, e2: CostExpr, d: Domain | None = None,
              budget: int = DEFAULT_BUDGET) -> Verdict:
    a = simplify(e1)
    b = simplify(e2)
    if a == b:
        return Verdict.PROVED
    pa, pb = to_poly(a), to_poly(b)
    if pb is POLY_INF:
        return Verdict.PROVED
    if pa is POLY_INF:
        return Verdict.UNKNOWN
    if _refuted(a, b, d):
        return Verdict.UNKNOWN
    if _nonneg(poly_sub(pb, pa), d, _Budget(budget)):
        return Verdict.PROVED
    return Verdict.UNKNOWN


def prove_nonneg(e: CostExpr, d: Domain | None = None, budget: int = DEFAULT_BUDGET) -> Verdict:
    return prove_leq(Const(Fraction(0)), e, d, budget)


# -- monotonicity -----------------------------------------------------------

def _nd(e: CostExpr, v: str, d: Domain | None) -> bool:
    """e is nondecreasing in v (all other variables fixed)."""
    p = to_poly(simplify(e))
    if p is POLY_INF:
        return True
    for m, c in p.items():
        if not any(v in free_vars(a) for a, _ in m):
            continue
        if c < 0:
            return False
        for a, _ in m:
            if not atom_nonneg(a, d):
                return False
            if v in free_vars(a) and not _atom_nd(a, v, d):
                return False
    return True


def _atom_nd(a: CostExpr, v: str, d: Domain | None) -> bool:
    if isinstance(a, SizeVar):
        return True
    if isinstance(a, (Max, Min)):
        return all(_nd(x, v, d) for x in a.args)
    if isinstance(a, CeilDiv):
        return v not in free_vars(a.den) and _nd(a.num, v, d)
    if isinstance(a, Pow):
        return a.base >= 1 and _nd(a.exponent, v, d)
    if isinstance(a, Fib):
        return _nd(a.arg, v, d) and expr_nonneg(a.arg, d)
    if isinstance(a, Lucas):
        # L(0)=2 > L(1)=1, so the argument must stay >= 1
        return _nd(a.arg, v, d) and expr_positive(a.arg, d)
    if isinstance(a, RecCall):
        return all(_nd(x, v, d) for x in a.args)
    return False


def is_nondecreasing(e: CostExpr, v: str, d: Domain | None = None) -> Mono:
    return Mono.YES if _nd(e, v, d) else Mono.UNKNOWN


def linear_leq_certified(e1: CostExpr, e2: CostExpr, d: Domain | None) -> bool:
    try:
        p = poly_sub(to_poly(simplify(e2)), to_poly(simplify(e1)))
        return _linear_certificate(p, d)
    except NonLinearConstraint:
        return False


__all__ = [
    "Verdict", "Mono", "prove_leq", "prove_nonneg", "is_nondecreasing",
    "expr_nonneg", "expr_positive", "atom_nonneg", "from_poly", "poly_scale",
]
