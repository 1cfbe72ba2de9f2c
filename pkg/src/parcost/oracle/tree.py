"""Derivation trees of successful executions."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend.ast import BuiltinKind, PredId


@dataclass
class ClauseNode:
    pred: PredId
    clause_index: int
    children: list = field(default_factory=list)
    args: tuple | None = None  # ground call arguments, when recorded


@dataclass
class SeqNode:
    children: list = field(default_factory=list)


@dataclass
class ParNode:
    left: SeqNode
    right: SeqNode


@dataclass
class BuiltinNode:
    kind: BuiltinKind


@dataclass
class FailNode:
    pass


def iter_nodes(node):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, (ClauseNode, SeqNode)):
            stack.extend(reversed(n.children))
        elif isinstance(n, ParNode):
            stack.append(n.right)
            stack.append(n.left)


def tree_to_json(node) -> dict:
    if isinstance(node, ClauseNode):
        return {"clause": str(node.pred), "index": node.clause_index,
                "children": [tree_to_json(c) for c in node.children]}
    if isinstance(node, SeqNode):
        return {"seq": [tree_to_json(c) for c in node.children]}
    if isinstance(node, ParNode):
        return {"par": [tree_to_json(node.left), tree_to_json(node.right)]}
    if isinstance(node, BuiltinNode):
        return {"builtin": node.kind.value}
    return {"fail": True}
