"""Upper bounds on the number of solutions of each predicate."""

from __future__ import annotations

from ..frontend.ast import Approx, Builtin, flat_literals
from ..sizes import infer_size_rels
from ..symexpr import INFINITY, ONE, Domain, prove_leq, simplify
from .relations import Env, RelationBuilder, mutex_groups, setup_sols_relation
from .resources import ResourceDef
from .types import CostRelError, SEQ, SolutionsUnknown


def _deterministic(pred, env: Env) -> bool:
    """Every clause group is a single clause and every literal yields at
    most one solution (self calls assumed so, by induction)."""
    vp = env.vp
    groups = mutex_groups(pred, vp)
    if len(set(groups)) != len(groups):
        return False
    b = RelationBuilder(env, ResourceDef("sols"), Approx.UB, SEQ)
    for c in vp.predicates[pred]:
        rels = {r.literal_index: r for r in infer_size_rels(c, vp)}
        dom = Domain.nonneg(vp.param_names(pred))
        for i, g in enumerate(flat_literals(c.body)):
            if isinstance(g, Builtin):
                continue
            if g.pred == pred:
                continue
            if g.pred in vp.predicates and g.pred in env.scc(pred):
                return False
            s = b.call_sols(g, rels.get(i))
            if not prove_leq(s, ONE, dom):
                return False
    return True


def setup_solutions(env: Env) -> tuple[dict, list]:
    """Solve the solution-count relations in analysis order.

    Returns (pred -> ClosedBound, list of (pred, error kind, message))."""
    from ..recsolve import ClosedBound, solve

    vp = env.vp
    out: dict = {}
    problems: list = []
    for scc in env.order.sccs:
        for pred in sorted(scc):
            if pred not in vp.predicates:
                continue
            dom = Domain.nonneg(vp.param_names(pred))
            params = tuple(vp.param_names(pred))
            if pred in env.trusted_sols:
                b = ClosedBound(simplify(env.trusted_sols[pred]), dom, Approx.UB, False,
                                ("trusted",), params)
            elif _deterministic(pred, env):
                b = ClosedBound(ONE, dom, Approx.UB, False, ("deterministic",), params)
            else:
                try:
                    b = solve(setup_sols_relation(pred, env))
                except CostRelError as exc:
                    b = ClosedBound(INFINITY, dom, Approx.UB, False, (exc.kind,), params)
                if b.is_infinite:
                    problems.append((pred, SolutionsUnknown.kind,
                                     f"could not bound the solutions of {pred}"))
            out[pred] = b
            env.sols[pred] = b
    return out, problems


__all__ = ["setup_solutions"]
