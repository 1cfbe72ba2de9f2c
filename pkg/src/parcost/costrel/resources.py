"""Resource definitions: head cost, builtin cost and the three aggregators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..frontend.ast import Atom, BuiltinKind, Compound, IntConst, PredId, Term
from ..symexpr import ONE, ZERO, Const, CostExpr, Max, Sum, render, simplify


class ResourceError(ValueError):
    pass


@dataclass(frozen=True)
class AggExpr:
    """One of ``A+C``, ``max(A,C)`` or ``A+C+k``."""

    op: str  # "sum" | "max" | "sum_plus"
    k: Fraction = Fraction(0)

    def __post_init__(self):
        if self.op not in ("sum", "max", "sum_plus"):
            raise ResourceError(f"unknown aggregator {self.op}")
        if self.k < 0:
            raise ResourceError("aggregator constant must be nonnegative")

    def apply(self, a: CostExpr, b: CostExpr) -> CostExpr:
        if self.op == "max":
            return Max((a, b))
        if self.op == "sum_plus" and self.k:
            return Sum((a, b, Const(self.k)))
        return Sum((a, b))

    def apply_num(self, a, b):
        if self.op == "max":
            return max(a, b)
        return a + b + (self.k if self.op == "sum_plus" else 0)

    def fold(self, items: list) -> CostExpr:
        if not items:
            return ZERO
        acc = items[0]
        for x in items[1:]:
            acc = self.apply(acc, x)
        return acc

    @property
    def identity(self):
        """Neutral element for the numeric fold, when there is one."""
        return 0

    def text(self) -> str:
        if self.op == "sum_plus":
            k = self.k
            return f"sum_plus({k.numerator if k.denominator == 1 else k})"
        return self.op


SUM = AggExpr("sum")
MAX = AggExpr("max")


def sum_plus(k) -> AggExpr:
    return AggExpr("sum_plus", Fraction(k))


@dataclass(frozen=True)
class ResourceDef:
    name: str
    head_default: CostExpr = ONE
    clause_agg: str = "mutex_max"  # or "sum"
    seq_agg: AggExpr = SUM
    par_agg: AggExpr = SUM
    builtin_default: CostExpr = ZERO
    head_costs: tuple = field(default=())     # ((PredId, CostExpr), ...)
    builtin_costs: tuple = field(default=())  # ((BuiltinKind, CostExpr), ...)

    def __post_init__(self):
        if self.clause_agg not in ("sum", "mutex_max"):
            raise ResourceError(f"unknown clause aggregator {self.clause_agg}")

    def head_cost(self, pred: PredId) -> CostExpr:
        for p, c in self.head_costs:
            if p == pred:
                return c
        return self.head_default

    def builtin_cost(self, kind: BuiltinKind) -> CostExpr:
        for k, c in self.builtin_costs:
            if k == kind:
                return c
        return self.builtin_default

    def to_directive_text(self) -> str:
        return (f"resource({self.name},head({render(self.head_default)}),"
                f"clause_agg({self.clause_agg}),seq_agg({self.seq_agg.text()}),"
                f"par_agg({self.par_agg.text()}),builtin_default({render(self.builtin_default)}))")


STEPS_SEQ = ResourceDef("steps_seq", ONE, "mutex_max", SUM, SUM, ZERO)
STEPS_PAR = ResourceDef("steps_par", ONE, "mutex_max", SUM, MAX, ZERO)
STHREADS = ResourceDef("sthreads", ZERO, "mutex_max", MAX, sum_plus(1), ZERO)
PTASKS = ResourceDef("ptasks", ZERO, "mutex_max", SUM, sum_plus(1), ZERO)


def builtin_resources() -> list[ResourceDef]:
    return [STEPS_SEQ, STEPS_PAR, STHREADS, PTASKS]


def _agg_from_term(t: Term, allow_plus: bool) -> AggExpr:
    if isinstance(t, Atom) and t.name in ("sum", "max"):
        return AggExpr(t.name)
    if (allow_plus and isinstance(t, Compound) and t.functor == "sum_plus"
            and len(t.args) == 1 and isinstance(t.args[0], IntConst)):
        return sum_plus(t.args[0].value)
    raise ResourceError(f"bad aggregator {t}")


def resource_from_term(t: Term) -> ResourceDef:
    """Read ``resource(NAME, head(E), clause_agg(..), seq_agg(..), par_agg(..),
    builtin_default(E))``."""
    from ..frontend.parser import term_to_costexpr

    if not (isinstance(t, Compound) and t.functor == "resource" and len(t.args) == 6):
        raise ResourceError("resource/6 expected")
    name, *parts = t.args
    if not isinstance(name, Atom):
        raise ResourceError("resource name must be an atom")
    want = ["head", "clause_agg", "seq_agg", "par_agg", "builtin_default"]
    got = {}
    for w, p in zip(want, parts):
        if not (isinstance(p, Compound) and p.functor == w and len(p.args) == 1):
            raise ResourceError(f"{w}(...) expected")
        got[w] = p.args[0]
    ca = got["clause_agg"]
    if not (isinstance(ca, Atom) and ca.name in ("sum", "mutex_max")):
        raise ResourceError("clause_agg must be sum or mutex_max")
    return ResourceDef(
        name=name.name,
        head_default=simplify(term_to_costexpr(got["head"])),
        clause_agg=ca.name,
        seq_agg=_agg_from_term(got["seq_agg"], allow_plus=False),
        par_agg=_agg_from_term(got["par_agg"], allow_plus=True),
        builtin_default=simplify(term_to_costexpr(got["builtin_default"])),
    )


__all__ = [
    "AggExpr", "ResourceDef", "ResourceError", "SUM", "MAX", "sum_plus",
    "STEPS_SEQ", "STEPS_PAR", "STHREADS", "PTASKS", "builtin_resources",
    "resource_from_term",
]
