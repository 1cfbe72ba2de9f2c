"""Makespan bound for a fixed number of processors.

For a recursive predicate whose parallel conjunctions each pair one
spine branch (calling back into the recursion) with one task branch,
the bound is

    spine + ceil(k / n) * (sched + max task cost + head) + spaw

where ``spine`` is the unbounded-parallel cost with task branches
removed, ``k`` bounds the number of spawned tasks and a task's cost is
its sequential cost at the worst size reached during the recursion.
"""

from __future__ import annotations

from fractions import Fraction

from ..frontend.ast import Approx, Call, ParConj, PredId, flat_literals
from ..ir import is_recursive
from ..sizes import infer_size_rels
from ..symexpr import (
    ZERO, CeilDiv, Const, CostExpr, Domain, Max, SizeVar, as_expr, ge,
    is_nondecreasing, simplify, substitute,
)
from ..symexpr.compare import Mono
from .relations import Env, RelationBuilder, spine_resource
from .resources import ResourceDef
from .types import (
    PAR_INF, SEQ, ExecModel, NonMonotoneTaskSize, NotParallelRecursive,
)


def is_time_resource(r: ResourceDef) -> bool:
    """Resources that measure elapsed steps get the processor-bounded
    treatment; counters (threads, tasks) keep their unbounded bound."""
    return r.seq_agg.op == "sum" and r.head_default != ZERO and r.par_agg.op in ("sum", "max")


def _task_branches(goals, scc) -> list:
    out = []
    for g in goals:
        if not isinstance(g, ParConj):
            continue
        lt = not any(isinstance(x, Call) and x.pred in scc for x in flat_literals(g.left))
        rt = not any(isinstance(x, Call) and x.pred in scc for x in flat_literals(g.right))
        if lt == rt:
            raise NotParallelRecursive("a parallel conjunction does not split into spine and task")
        task, spine = (g.left, g.right) if lt else (g.right, g.left)
        out.append(task)
        out.extend(_task_branches(spine, scc))
    return out


def spine_tasks(pred: PredId, env: Env) -> list:
    """(clause, task goals) pairs, or NotParallelRecursive."""
    scc = env.scc(pred)
    if not is_recursive(env.graph, scc) or len(scc) != 1:
        raise NotParallelRecursive(f"{pred} is not a recursive parallel predicate")
    found = []
    for c in env.vp.predicates[pred]:
        for t in _task_branches(c.body, scc):
            found.append((c, t))
    if not found:
        raise NotParallelRecursive(f"{pred} has no parallel conjunction")
    return found


def _task_cost(env: Env, r: ResourceDef, pred: PredId, clause, task) -> CostExpr:
    rels = {x.literal_index: x for x in infer_size_rels(clause, env.vp)}
    flat = flat_literals(clause.body)
    first = flat_literals(task)[0]
    start = next(i for i, g in enumerate(flat) if g is first)
    b = RelationBuilder(env, r, Approx.UB, SEQ)
    cost, _, _ = b.body_cost(task, rels, [start], pred, "_task")
    return simplify(cost)


def _procs(n: ExecModel) -> CostExpr:
    return Const(Fraction(n.procs)) if isinstance(n.procs, int) else SizeVar(n.procs)


def bounded_processor_bound(pred: PredId, resource: ResourceDef, env: Env, n: ExecModel,
                            spaw: CostExpr = ZERO, sched: CostExpr = ZERO):
    """Closed upper bound under ``n`` processors, or an exception when the
    predicate does not have the spine/task shape."""
    from ..recsolve import ClosedBound, eliminate_max, solve

    vp = env.vp
    params = tuple(vp.param_names(pred))
    dom = Domain.nonneg(params)
    if not isinstance(n.procs, int):
        dom = dom.add(ge(SizeVar(n.procs), as_expr(1)))
    pairs = spine_tasks(pred, env)
    head = resource.head_cost(pred)
    costs = []
    for clause, task in pairs:
        t = _task_cost(env, resource, pred, clause, task)
        for p in params:
            if is_nondecreasing(t, p, dom) is not Mono.YES:
                raise NonMonotoneTaskSize(f"task cost {t} is not certified nondecreasing in {p}")
        costs.append(simplify(t + head))
    c1 = simplify(Max(tuple(costs))) if len(costs) > 1 else costs[0]
    kb = env.bounds.get((pred, "ptasks", Approx.UB, PAR_INF.render()))
    if kb is None or kb.is_infinite:
        raise NotParallelRecursive("no bound on the number of tasks")
    k = kb.expr
    sub = {"k": k}
    sched = simplify(substitute(sched, sub))
    spaw = simplify(substitute(spaw, sub))
    skel_rel = RelationBuilder(env, spine_resource(resource), Approx.UB, n, par_model="par",
                               callee_model=n, zero_tasks=True,
                               name=f"{pred.name}_{pred.arity}_{resource.name}_spine").build(pred)
    skel = solve(skel_rel)
    if skel.is_infinite:
        raise NotParallelRecursive("spine relation unsolved")
    total = simplify(skel.expr + CeilDiv(k, _procs(n)) * (sched + c1) + spaw)
    total = eliminate_max(total, dom, Approx.UB)
    prov = ("bounded-processors",) + tuple(f"spine:{p}" for p in skel.provenance)
    return ClosedBound(total, dom, Approx.UB, False, prov, params)


__all__ = ["bounded_processor_bound", "is_time_resource", "spine_tasks"]
