"""Recognizing the first-order max-recurrence shape
``f(x) = max(C, f(x-1)) + D`` for x > theta, ``f(x) = B`` otherwise."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from ..symexpr import (
    Const, CostExpr, Domain, Max, RecCall, SizeVar, free_vars, has_reccall,
    is_nondecreasing, simplify,
)
from ..symexpr.compare import Mono
from ..symexpr.simplify import POLY_INF, from_poly, to_poly


class Dependence(enum.Enum):
    INDEPENDENT = "IndependentOfXi"
    NONDECREASING = "NondecreasingInXi"


@dataclass(frozen=True)
class MaxRecForm:
    var: str
    theta: int
    B: CostExpr
    C: CostExpr
    D: CostExpr
    dependence: Dependence
    params: tuple = ()
    index: int = 0


class NoMatch:
    def __init__(self, reason: str = ""):
        self.reason = reason

    def __bool__(self):
        return False

    def __repr__(self):
        return f"NoMatch({self.reason!r})"


def is_self_call(r: CostExpr, name: str, params: tuple, v: str, delta: int = 1) -> bool:
    if not (isinstance(r, RecCall) and r.relation == name and len(r.args) == len(params)):
        return False
    for p, a in zip(params, r.args):
        want = SizeVar(p) if p != v else simplify(SizeVar(p) - delta)
        if simplify(a) != want:
            return False
    return True


def split_max_rhs(rhs: CostExpr, name: str, params: tuple, v: str):
    """(C, D) when rhs = max(C, f(v-1)) + D with C, D free of calls."""
    p = to_poly(simplify(rhs))
    if p is POLY_INF:
        return None
    node = None
    rest = {}
    for m, c in p.items():
        if any(has_reccall(a) for a, _ in m):
            if node is not None or c != 1 or len(m) != 1 or m[0][1] != 1:
                return None
            node = m[0][0]
        else:
            rest[m] = c
    if node is None:
        return None
    if is_self_call(node, name, params, v):
        return Const(Fraction(0)), from_poly(rest)
    if not isinstance(node, Max):
        return None
    calls = [a for a in node.args if has_reccall(a)]
    if len(calls) != 1 or not is_self_call(calls[0], name, params, v):
        return None
    others = tuple(a for a in node.args if not has_reccall(a))
    C = others[0] if len(others) == 1 else simplify(Max(others))
    return C, from_poly(rest)


def classify(C: CostExpr, D: CostExpr, v: str, d: Domain | None):
    if v not in free_vars(C) and v not in free_vars(D):
        return Dependence.INDEPENDENT
    if (is_nondecreasing(C, v, d) is Mono.YES and is_nondecreasing(D, v, d) is Mono.YES):
        return Dependence.NONDECREASING
    return None


def match_rhs(rhs: CostExpr, B: CostExpr, theta: int, name: str, params: tuple, v: str,
              d: Domain | None = None) -> MaxRecForm | NoMatch:
    parts = split_max_rhs(rhs, name, params, v)
    if parts is None:
        return NoMatch("rhs is not max(C, f(x-1)) + D")
    C, D = parts
    dep = classify(C, D, v, d)
    if dep is None:
        return NoMatch("C or D not certified nondecreasing")
    return MaxRecForm(v, theta, simplify(B), simplify(C), simplify(D), dep, params, params.index(v))


def match_max_form(rel) -> MaxRecForm | NoMatch:
    """Match a cost relation against the max-recurrence shape."""
    from .solver import prepare, SolveError

    try:
        prep = prepare(rel)
    except SolveError as exc:
        return NoMatch(str(exc))
    if prep.deltas != {1}:
        return NoMatch("not first-order")
    return match_rhs(prep.rec_rhs, prep.bases[prep.theta], prep.theta, rel.name,
                     rel.params, prep.var, prep.region)
