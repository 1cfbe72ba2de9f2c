"""Metrics over derivation trees."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..costrel.resources import STEPS_PAR, ResourceDef
from ..symexpr import evaluate
from .schedule import makespan
from .tree import BuiltinNode, ClauseNode, FailNode, ParNode, SeqNode, iter_nodes


@dataclass
class Measurement:
    work: int
    depth: int
    max_procs: int
    tasks_spawned: int
    makespan: dict = field(default_factory=dict)  # n -> steps

    def check_invariants(self) -> list[str]:
        bad = []
        if self.depth > self.work:
            bad.append("depth > work")
        if 1 in self.makespan and self.makespan[1] != self.work:
            bad.append("makespan(1) != work")
        prev = None
        for n in sorted(self.makespan):
            m = self.makespan[n]
            if m < self.depth:
                bad.append(f"makespan({n}) < depth")
            if prev is not None and m > prev:
                bad.append(f"makespan({n}) increased")
            prev = m
        return bad


def _num(v):
    return int(v) if v == int(v) else v


def fold_resource(tree, rdef: ResourceDef, seq_par: bool = False):
    """Fold ``rdef``'s aggregators over ``tree``; ``seq_par`` treats parallel
    conjunctions sequentially."""
    heads: dict = {}
    builtins: dict = {}

    def head(pred):
        if pred not in heads:
            heads[pred] = evaluate(rdef.head_cost(pred), {})
        return heads[pred]

    def builtin(kind):
        if kind not in builtins:
            builtins[kind] = evaluate(rdef.builtin_cost(kind), {})
        return builtins[kind]

    def seq(children):
        acc = None
        for c in children:
            v = node(c)
            acc = v if acc is None else rdef.seq_agg.apply_num(acc, v)
        return acc

    def node(n):
        if isinstance(n, ClauseNode):
            body = seq(n.children)
            h = head(n.pred)
            return h if body is None else rdef.seq_agg.apply_num(h, body)
        if isinstance(n, SeqNode):
            v = seq(n.children)
            return 0 if v is None else v
        if isinstance(n, ParNode):
            agg = rdef.seq_agg if seq_par else rdef.par_agg
            return agg.apply_num(node(n.left), node(n.right))
        if isinstance(n, BuiltinNode):
            return builtin(n.kind)
        if isinstance(n, FailNode):
            return 0
        raise TypeError(n)

    return _num(node(tree))


def resource_weights(rdef: ResourceDef):
    """(head_w, builtin_w) when every step of ``rdef`` costs a nonnegative
    integer constant, else None."""
    heads: dict = {}
    builtins: dict = {}

    def cost(e):
        try:
            v = evaluate(e, {})
        except (KeyError, ValueError):
            return None
        return int(v) if v >= 0 and v == int(v) else None

    for e in [rdef.head_default, rdef.builtin_default, *(c for _, c in rdef.head_costs),
              *(c for _, c in rdef.builtin_costs)]:
        if cost(e) is None:
            return None

    def head_w(pred):
        if pred not in heads:
            heads[pred] = cost(rdef.head_cost(pred))
        return heads[pred]

    def builtin_w(kind):
        if kind not in builtins:
            builtins[kind] = cost(rdef.builtin_cost(kind))
        return builtins[kind]

    return head_w, builtin_w


def resource_makespan(tree, rdef: ResourceDef, procs) -> dict | None:
    """Greedy n-processor schedule length where each step takes as many time
    units as ``rdef`` charges for it."""
    w = resource_weights(rdef)
    return None if w is None else makespan(tree, procs, *w)


def _depth(tree) -> int:
    return fold_resource(tree, STEPS_PAR)


def _max_procs(n) -> int:
    if isinstance(n, ClauseNode) or isinstance(n, SeqNode):
        return max((_max_procs(c) for c in n.children), default=0)
    if isinstance(n, ParNode):
        return _max_procs(n.left) + _max_procs(n.right) + 1
    return 0


def measure(tree, procs=(1, 2, 4)) -> Measurement:
    work = tasks = 0
    for n in iter_nodes(tree):
        if isinstance(n, ClauseNode):
            work += 1
        elif isinstance(n, ParNode):
            tasks += 1
    ms = makespan(tree, procs) if procs else {}
    return Measurement(work, _depth(tree), _max_procs(tree), tasks, ms)
