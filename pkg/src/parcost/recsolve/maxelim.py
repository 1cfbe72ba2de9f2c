"""Removing max/min nodes by comparison, with a safe fallback."""

from __future__ import annotations

from ..frontend.ast import Approx
from ..symexpr import (
    Domain, CostExpr, Max, Min, Sum, prove_leq, simplify, transform,
)


def _prune(args: tuple, d: Domain | None, is_max: bool, budget: int) -> tuple:
    """Drop arguments dominated by another argument (proved)."""
    kept = list(args)
    changed = True
    while changed and len(kept) > 1:
        changed = False
        for i, a in enumerate(kept):
            for j, b in enumerate(kept):
                if i == j:
                    continue
                lo, hi = (a, b) if is_max else (b, a)
                if prove_leq(lo, hi, d, budget):
                    del kept[i]
                    changed = True
                    break
            if changed:
                break
    return tuple(kept)


def resolve_max(e: CostExpr, d: Domain | None, budget: int = 64) -> CostExpr:
    """Equality-preserving: drop provably dominated max/min arguments."""

    def step(node):
        if isinstance(node, (Max, Min)):
            args = _prune(tuple(simplify(a) for a in node.args), d, isinstance(node, Max), budget)
            if len(args) == 1:
                return args[0]
            return type(node)(args)
        return None

    return simplify(transform(simplify(e), step))


def eliminate_max(e: CostExpr, d: Domain | None, approx: Approx, budget: int = 64) -> CostExpr:
    """Remove every max (and min) node.

    Comparison first; when that fails an upper bound replaces max by the sum
    of its arguments and a lower bound keeps the first argument.  Min nodes
    are handled dually (lower bounds cannot drop a min without a proof, so
    they keep the node's first argument only for upper bounds)."""
    ub = approx is Approx.UB

    def step(node):
        if not isinstance(node, (Max, Min)):
            return None
        args = _prune(tuple(simplify(a) for a in node.args), d, isinstance(node, Max), budget)
        if len(args) == 1:
            return args[0]
        if isinstance(node, Max):
            return Sum(args) if ub else args[0]
        if ub:
            return args[0]
        return Min(args)

    return simplify(transform(simplify(e), step))
