"""A small SLD interpreter producing derivation trees.

Runtime terms: Python ints, atoms as ``str``, compound terms as tuples
``(functor, arg1, ...)`` and unbound variables as ``Ref`` cells.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from ..frontend.ast import (
    Atom, Builtin, BuiltinKind, Call, Compound, IntConst, ParConj, PredId, Term,
    Variable,
)
from .tree import BuiltinNode, ClauseNode, ParNode, SeqNode

DEFAULT_FUEL = 10 ** 7


class Timeout(Exception):
    pass


class Failure(Exception):
    pass


class Ref:
    __slots__ = ("ref", "name")

    def __init__(self, name: str = "_"):
        self.ref = None
        self.name = name

    def __repr__(self):
        return f"_{self.name}" if self.ref is None else repr(self.ref)


def deref(t):
    while isinstance(t, Ref) and t.ref is not None:
        t = t.ref
    return t


def bind(r: Ref, t, trail: list):
    r.ref = t
    trail.append(r)


def undo(trail: list, mark: int):
    while len(trail) > mark:
        trail.pop().ref = None


def unify(a, b, trail: list) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = deref(x), deref(y)
        if x is y:
            continue
        if isinstance(x, Ref):
            bind(x, y, trail)
        elif isinstance(y, Ref):
            bind(y, x, trail)
        elif isinstance(x, tuple) and isinstance(y, tuple):
            if len(x) != len(y) or x[0] != y[0]:
                return False
            stack.extend(zip(x[1:], y[1:]))
        elif type(x) is not type(y) or x != y:
            return False
    return True


def to_runtime(t: Term, env: dict):
    if isinstance(t, Variable):
        if t.name == "_":
            return Ref()
        if t.name not in env:
            env[t.name] = Ref(t.name)
        return env[t.name]
    if isinstance(t, IntConst):
        return t.value
    if isinstance(t, Atom):
        return t.name
    return (t.functor,) + tuple(to_runtime(a, env) for a in t.args)


def from_runtime(t) -> Term:
    t = deref(t)
    if isinstance(t, Ref):
        return Variable("_" + t.name)
    if isinstance(t, int):
        return IntConst(t)
    if isinstance(t, str):
        return Atom(t)
    return Compound(t[0], tuple(from_runtime(a) for a in t[1:]))


def resolve(t):
    """Fully dereferenced copy (bindings read out)."""
    t = deref(t)
    if isinstance(t, tuple):
        return (t[0],) + tuple(resolve(a) for a in t[1:])
    return t


class ArithError(Exception):
    pass


def eval_arith(t) -> int:
    t = deref(t)
    if isinstance(t, int):
        return t
    if isinstance(t, tuple):
        f = t[0]
        if len(t) == 3:
            a, b = eval_arith(t[1]), eval_arith(t[2])
            if f == "+":
                return a + b
            if f == "-":
                return a - b
            if f == "*":
                return a * b
            if f == "//":
                if b == 0:
                    raise ArithError("division by zero")
                q = abs(a) // abs(b)
                return q if (a >= 0) == (b >= 0) else -q
            if f == "mod":
                if b == 0:
                    raise ArithError("division by zero")
                return a % b
            if f == "max":
                return max(a, b)
            if f == "min":
                return min(a, b)
        if len(t) == 2 and f == "-":
            return -eval_arith(t[1])
    raise ArithError(f"not an integer expression: {t!r}")


_COMPARE = {
    BuiltinKind.LT: lambda a, b: a < b,
    BuiltinKind.GT: lambda a, b: a > b,
    BuiltinKind.LE: lambda a, b: a <= b,
    BuiltinKind.GE: lambda a, b: a >= b,
    BuiltinKind.EQ: lambda a, b: a == b,
    BuiltinKind.NEQ: lambda a, b: a != b,
}


class Interpreter:
    def __init__(self, program, fuel: int = DEFAULT_FUEL, record_args: bool = False):
        self.program = program
        self.record_args = record_args
        self.predicates = program.predicates
        self.fuel = fuel
        self.steps = 0
        self.trail: list = []

    def _tick(self):
        self.steps += 1
        if self.steps > self.fuel:
            raise Timeout(f"fuel of {self.fuel} resolutions exhausted")

    def solve_call(self, pred: PredId, args: tuple):
        clauses = self.predicates.get(pred)
        if clauses is None:
            raise Failure(f"unknown predicate {pred}")
        for i, c in enumerate(clauses):
            self._tick()
            mark = len(self.trail)
            env: dict = {}
            head = to_runtime(c.head, env)
            head_args = head[1:] if isinstance(head, tuple) else ()
            if unify(("$",) + head_args, ("$",) + tuple(args), self.trail):
                for kids in self.solve_body(c.body, env):
                    node = ClauseNode(pred, i, kids)
                    if self.record_args:
                        node.args = tuple(from_runtime(resolve(a)) for a in args)
                    yield node
            undo(self.trail, mark)

    def solve_body(self, goals: tuple, env: dict, k: int = 0):
        if k == len(goals):
            yield []
            return
        for node in self.solve_goal(goals[k], env):
            for rest in self.solve_body(goals, env, k + 1):
                yield [node] + rest

    def solve_goal(self, g, env: dict):
        if isinstance(g, Call):
            args = tuple(to_runtime(a, env) for a in g.args)
            yield from self.solve_call(g.pred, args)
        elif isinstance(g, Builtin):
            a, b = (to_runtime(x, env) for x in g.args)
            mark = len(self.trail)
            if g.kind is BuiltinKind.IS:
                ok = unify(a, eval_arith(b), self.trail)
            elif g.kind is BuiltinKind.UNIFY:
                ok = unify(a, b, self.trail)
            else:
                ok = _COMPARE[g.kind](eval_arith(a), eval_arith(b))
            if ok:
                yield BuiltinNode(g.kind)
            undo(self.trail, mark)
        elif isinstance(g, ParConj):
            for lt in self.solve_body(g.left, env):
                for rt in self.solve_body(g.right, env):
                    yield ParNode(SeqNode(lt), SeqNode(rt))
        else:
            raise TypeError(g)


def _goal_parts(goal) -> tuple[PredId, tuple]:
    if isinstance(goal, Compound):
        return PredId(goal.functor, len(goal.args)), goal.args
    if isinstance(goal, Atom):
        return PredId(goal.name, 0), ()
    raise TypeError("goal must be a compound term or atom")


@dataclass
class Run:
    tree: object
    answer: tuple  # resolved argument terms
    steps: int


def run(program, goal: Term, fuel: int = DEFAULT_FUEL, all_solutions: bool = False,
        record_args: bool = False) -> Run:
    """Execute ``goal`` and return the first solution's tree (or, with
    ``all_solutions``, a sequence node holding every solution's tree)."""
    pred, args = _goal_parts(goal)
    interp = Interpreter(program, fuel, record_args)
    env: dict = {}
    rargs = tuple(to_runtime(a, env) for a in args)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100_000))
    try:
        if not all_solutions:
            for tree in interp.solve_call(pred, rargs):
                answer = tuple(from_runtime(resolve(a)) for a in rargs)
                return Run(tree, answer, interp.steps)
            raise Failure(f"{pred} has no solution")
        trees, answer = [], None
        for tree in interp.solve_call(pred, rargs):
            trees.append(tree)
            if answer is None:
                answer = tuple(from_runtime(resolve(a)) for a in rargs)
        if not trees:
            raise Failure(f"{pred} has no solution")
        return Run(SeqNode(trees), answer, interp.steps)
    finally:
        sys.setrecursionlimit(old)
