"""Syntax tree for the supported logic-program subset."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Union

from ..symexpr import CostExpr


class PredId(NamedTuple):
    name: str
    arity: int

    def __str__(self):
        return f"{self.name}/{self.arity}"

    @staticmethod
    def parse(text: str) -> "PredId":
        name, _, arity = text.rpartition("/")
        return PredId(name, int(arity))


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple

    def __post_init__(self):
        if len(self.args) < 1:
            raise ValueError("compound terms need at least one argument")


Term = Union[Variable, IntConst, Atom, Compound]

NIL = Atom("[]")


def cons(head: Term, tail: Term) -> Compound:
    return Compound(".", (head, tail))


def make_list(items, tail: Term = NIL) -> Term:
    out = tail
    for t in reversed(list(items)):
        out = cons(t, out)
    return out


def term_vars(t: Term, acc: list | None = None) -> list[str]:
    """Variable names in left-to-right order (anonymous ones included)."""
    if acc is None:
        acc = []
    if isinstance(t, Variable):
        if t.name not in acc:
            acc.append(t.name)
    elif isinstance(t, Compound):
        for a in t.args:
            term_vars(a, acc)
    return acc


def is_ground(t: Term) -> bool:
    if isinstance(t, Variable):
        return False
    if isinstance(t, Compound):
        return all(is_ground(a) for a in t.args)
    return True


# -- goals ------------------------------------------------------------------

class BuiltinKind(enum.Enum):
    IS = "is"
    LT = "<"
    GT = ">"
    LE = "=<"
    GE = ">="
    EQ = "=:="
    NEQ = "=\\="
    UNIFY = "="

    @property
    def is_test(self) -> bool:
        return self not in (BuiltinKind.IS, BuiltinKind.UNIFY)


BUILTIN_OPS = {k.value: k for k in BuiltinKind}


@dataclass(frozen=True)
class Call:
    pred: PredId
    args: tuple


@dataclass(frozen=True)
class Builtin:
    kind: BuiltinKind
    args: tuple


@dataclass(frozen=True)
class ParConj:
    left: tuple
    right: tuple

    def __post_init__(self):
        if not self.left or not self.right:
            raise ValueError("both sides of & must be non-empty")


Goal = Union[Call, Builtin, ParConj]


def goal_vars(g: Goal, acc: list | None = None) -> list[str]:
    if acc is None:
        acc = []
    if isinstance(g, ParConj):
        for x in g.left + g.right:
            goal_vars(x, acc)
    else:
        for a in g.args:
            term_vars(a, acc)
    return acc


def flat_literals(body) -> list:
    """Calls and builtins in textual order, descending into ParConj."""
    out = []
    for g in body:
        if isinstance(g, ParConj):
            out.extend(flat_literals(g.left))
            out.extend(flat_literals(g.right))
        else:
            out.append(g)
    return out


@dataclass(frozen=True)
class SourceLoc:
    file: str
    line: int
    col: int = 1

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


@dataclass(frozen=True)
class Clause:
    head: Term
    body: tuple
    loc: SourceLoc = field(default=SourceLoc("<input>", 0), compare=False)

    @property
    def pred(self) -> PredId:
        if isinstance(self.head, Compound):
            return PredId(self.head.functor, len(self.head.args))
        return PredId(self.head.name, 0)

    @property
    def head_args(self) -> tuple:
        return self.head.args if isinstance(self.head, Compound) else ()


# -- directives -------------------------------------------------------------

class ModeKind(enum.Enum):
    IN = "in"
    OUT = "out"


class Metric(enum.Enum):
    INT = "int"
    LENGTH = "length"
    SIZE = "size"
    MAX = "max"
    IGNORE = "ignore"


@dataclass(frozen=True)
class MetricSpec:
    metric: Metric
    name: str | None = None


class Approx(enum.Enum):
    UB = "ub"
    LB = "lb"


@dataclass(frozen=True)
class Mode:
    pred: PredId
    modes: tuple
    loc: SourceLoc = field(default=SourceLoc("<input>", 0), compare=False)


@dataclass(frozen=True)
class Measure:
    pred: PredId
    metrics: tuple  # per argument: tuple of MetricSpec (empty means ignore)
    loc: SourceLoc = field(default=SourceLoc("<input>", 0), compare=False)


@dataclass(frozen=True)
class TrustCost:
    pred: PredId
    resource: str
    approx: Approx
    cost: CostExpr
    loc: SourceLoc = field(default=SourceLoc("<input>", 0), compare=False)


@dataclass(frozen=True)
class TrustSolutions:
    pred: PredId
    bound: CostExpr
    loc: SourceLoc = field(default=SourceLoc("<input>", 0), compare=False)


@dataclass(frozen=True)
class ResourceDecl:
    definition: object  # costrel.ResourceDef
    loc: SourceLoc = field(default=SourceLoc("<input>", 0), compare=False)


@dataclass(frozen=True)
class CheckGen:
    """Input generator for the oracle harness (one spec term per argument)."""
    pred: PredId
    specs: tuple
    loc: SourceLoc = field(default=SourceLoc("<input>", 0), compare=False)


Directive = Union[Mode, Measure, TrustCost, TrustSolutions, ResourceDecl, CheckGen]


@dataclass
class Program:
    predicates: dict = field(default_factory=dict)  # PredId -> list[Clause]
    directives: list = field(default_factory=list)
    source_name: str = "<input>"

    def clauses(self, pred: PredId) -> list:
        return self.predicates.get(pred, [])

    def modes(self) -> dict:
        return {d.pred: d for d in self.directives if isinstance(d, Mode)}

    def measures(self) -> dict:
        return {d.pred: d for d in self.directives if isinstance(d, Measure)}

    def trusted_costs(self) -> list:
        return [d for d in self.directives if isinstance(d, TrustCost)]

    def trusted_solutions(self) -> dict:
        return {d.pred: d for d in self.directives if isinstance(d, TrustSolutions)}

    def resource_decls(self) -> list:
        return [d.definition for d in self.directives if isinstance(d, ResourceDecl)]

    def check_gens(self) -> list:
        return [d for d in self.directives if isinstance(d, CheckGen)]
