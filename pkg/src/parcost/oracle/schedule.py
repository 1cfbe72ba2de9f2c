"""Greedy list scheduling of the task DAG of a derivation tree.

By default every clause resolution is a unit-time job and builtins are
free.  With weights, a step of cost w becomes a chain of w unit jobs and a
step of cost 0 disappears.  A job depends on the job before it in its
sequence; the branches of a parallel conjunction both
start after the job preceding the conjunction, and whatever follows the
conjunction waits for both branches.  Ready jobs are taken in order of
longest remaining path.
"""

from __future__ import annotations

import heapq

from .tree import BuiltinNode, ClauseNode, ParNode, SeqNode


def _one(_):
    return 1


def _zero(_):
    return 0


def task_dag(tree, head_w=_one, builtin_w=_zero) -> tuple[list[list[int]], list[int]]:
    """(successors, indegree); ``head_w(pred)`` and ``builtin_w(kind)`` give
    the number of unit jobs for each step."""
    succ: list[list[int]] = []
    indeg: list[int] = []

    def new(preds) -> int:
        v = len(succ)
        succ.append([])
        indeg.append(len(preds))
        for p in preds:
            succ[p].append(v)
        return v

    def chain(w: int, frontier: tuple) -> tuple:
        for _ in range(w):
            frontier = (new(frontier),)
        return frontier

    # frontier: vertices whose completion gates what comes next
    def _walk(node, frontier: tuple) -> tuple:
        if isinstance(node, ClauseNode):
            frontier = chain(head_w(node.pred), frontier)
            for c in node.children:
                frontier = _walk(c, frontier)
            return frontier
        if isinstance(node, SeqNode):
            for c in node.children:
                frontier = _walk(c, frontier)
            return frontier
        if isinstance(node, ParNode):
            left = _walk(node.left, frontier)
            right = _walk(node.right, frontier)
            return tuple(dict.fromkeys(left + right))
        if isinstance(node, BuiltinNode):
            return chain(builtin_w(node.kind), frontier)
        return frontier

    _walk(tree, ())
    return succ, indeg


def _heights(succ) -> list[int]:
    # vertices are created in a topological order
    h = [1] * len(succ)
    for v in range(len(succ) - 1, -1, -1):
        if succ[v]:
            h[v] = 1 + max(h[w] for w in succ[v])
    return h


def greedy_makespan(succ, indeg, n: int) -> int:
    if n < 1:
        raise ValueError("need at least one processor")
    h = _heights(succ)
    indeg = list(indeg)
    ready = [(-h[v], v) for v in range(len(succ)) if indeg[v] == 0]
    heapq.heapify(ready)
    t = 0
    while ready:
        t += 1
        batch = [heapq.heappop(ready)[1] for _ in range(min(n, len(ready)))]
        for v in batch:
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(ready, (-h[w], w))
    return t


def makespan(tree, procs, head_w=_one, builtin_w=_zero) -> dict:
    succ, indeg = task_dag(tree, head_w, builtin_w)
    return {n: greedy_makespan(succ, indeg, n) for n in procs}
