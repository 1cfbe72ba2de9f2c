"""Call graph, strongly connected components and analysis order."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .frontend import Call, ParConj, PredId, ValidatedProgram


@dataclass
class CallGraph:
    nodes: set = field(default_factory=set)
    edges: set = field(default_factory=set)

    def successors(self, p: PredId) -> list[PredId]:
        return sorted(q for (a, q) in self.edges if a == p)

    def to_dot(self) -> str:
        lines = ["digraph callgraph {"]
        for n in sorted(self.nodes):
            lines.append(f'  "{n}";')
        for a, b in sorted(self.edges):
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class AnalysisOrder:
    sccs: list = field(default_factory=list)  # list of frozenset[PredId]

    def scc_of(self, p: PredId) -> frozenset:
        for c in self.sccs:
            if p in c:
                return c
        raise KeyError(p)


def _calls(goals):
    for g in goals:
        if isinstance(g, ParConj):
            yield from _calls(g.left)
            yield from _calls(g.right)
        elif isinstance(g, Call):
            yield g.pred


def build_call_graph(p: ValidatedProgram) -> CallGraph:
    g = CallGraph()
    for pred, clauses in p.predicates.items():
        g.nodes.add(pred)
        for c in clauses:
            for callee in _calls(c.body):
                if callee in p.predicates:
                    g.nodes.add(callee)
                    g.edges.add((pred, callee))
    return g


def _tarjan(g: CallGraph) -> list[frozenset]:
    succ = {n: g.successors(n) for n in g.nodes}
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list = []
    counter = 0
    for root in sorted(g.nodes):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            for j in range(i, len(succ[v])):
                w = succ[v][j]
                if w not in index:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return out


def analysis_order(g: CallGraph) -> AnalysisOrder:
    comps = _tarjan(g)
    comp_of = {p: i for i, c in enumerate(comps) for p in c}
    # edges caller-comp -> callee-comp; callees must come first
    pending = {i: set() for i in range(len(comps))}
    users = {i: set() for i in range(len(comps))}
    for a, b in g.edges:
        ca, cb = comp_of[a], comp_of[b]
        if ca != cb:
            pending[ca].add(cb)
            users[cb].add(ca)
    heap = [(min(comps[i]), i) for i in pending if not pending[i]]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(comps[i])
        for u in users[i]:
            pending[u].discard(i)
            if not pending[u]:
                heapq.heappush(heap, (min(comps[u]), u))
    return AnalysisOrder(order)


def is_recursive(g: CallGraph, scc: frozenset) -> bool:
    if len(scc) > 1:
        return True
    (p,) = tuple(scc)
    return (p, p) in g.edges
