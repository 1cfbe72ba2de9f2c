from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..frontend.ast import Approx, PredId
from ..symexpr import (
    Domain, CostExpr, RecCall, evaluate, render, replace_reccalls, Const,
)


@dataclass(frozen=True)
class ExecModel:
    kind: str  # "seq" | "par-inf" | "par"
    procs: int | str | None = None

    def __post_init__(self):
        if self.kind not in ("seq", "par-inf", "par"):
            raise ValueError(f"unknown execution model {self.kind}")
        if self.kind == "par":
            if isinstance(self.procs, int) and self.procs < 1:
                raise ValueError("processor count must be >= 1")
            if self.procs is None:
                raise ValueError("par model needs a processor count")

    @staticmethod
    def parse(text: str) -> "ExecModel":
        text = text.strip()
        if text in ("seq", "par-inf"):
            return ExecModel(text)
        m = re.fullmatch(r"par:(\d+|[a-z][a-z0-9_]*)", text)
        if not m:
            raise ValueError(f"bad model {text!r}; expected seq, par-inf, par:N or par:p")
        arg = m.group(1)
        return ExecModel("par", int(arg) if arg.isdigit() else arg)

    @property
    def is_bounded(self) -> bool:
        return self.kind == "par"

    def render(self) -> str:
        return self.kind if self.kind != "par" else f"par:{self.procs}"

    def __str__(self):
        return self.render()


SEQ = ExecModel("seq")
PAR_INF = ExecModel("par-inf")


def relation_name(pred: PredId, resource: str, approx: Approx, model: ExecModel) -> str:
    return f"{pred.name}_{pred.arity}_{resource}_{approx.value}_{model.kind.replace('-', '')}"


@dataclass(frozen=True)
class Equation:
    guard: Domain
    rhs: CostExpr
    group: int = 0
    clause_index: int | None = None

    def render(self) -> str:
        return f"{render(self.rhs)}  if {self.guard.render()}"


@dataclass
class CostRelation:
    """Guarded equations for one predicate.

    At a point, equations whose guard holds are combined: within a group
    by sum (ub) or min (lb), across groups by max (ub) or min (lb).
    """

    name: str
    pred: PredId
    resource: str
    approx: Approx
    model: ExecModel
    params: tuple
    equations: list = field(default_factory=list)

    def domain(self) -> Domain:
        return Domain.nonneg(self.params)

    def groups(self) -> dict:
        out: dict = {}
        for e in self.equations:
            out.setdefault(e.group, []).append(e)
        return out

    def render(self) -> str:
        head = f"{self.name}({', '.join(self.params)})"
        return "\n".join(f"{head} = {e.render()}  [group {e.group}]" for e in self.equations)

    def combine_values(self, per_group: dict):
        """Numeric combination of applicable equation values."""
        ub = self.approx is Approx.UB
        vals = []
        for _, xs in sorted(per_group.items()):
            if not xs:
                continue
            vals.append(sum(xs) if ub else min(xs))
        if not vals:
            return Fraction(0)
        return max(vals) if ub else min(vals)

    def value(self, env: dict, memo: dict | None = None, depth: int = 0):
        """Direct recursive evaluation at an integer point."""
        memo = {} if memo is None else memo
        key = tuple(env[p] for p in self.params)
        if key in memo:
            return memo[key]
        if depth > 5000:
            raise RecursionError("relation does not terminate")
        per: dict = {}
        for e in self.equations:
            if not e.guard.holds(env):
                continue

            def resolve(r: RecCall):
                if r.relation != self.name:
                    raise ValueError(f"foreign relation {r.relation}")
                args = [evaluate(a, env) for a in r.args]
                if any(a < 0 for a in args):
                    return Const(Fraction(0))
                sub = dict(env)
                sub.update({p: int(a) for p, a in zip(self.params, args)})
                return Const(Fraction(self.value(sub, memo, depth + 1)))

            per.setdefault(e.group, []).append(evaluate(replace_reccalls(e.rhs, resolve), env))
        out = self.combine_values(per)
        memo[key] = out
        return out


class CostRelError(Exception):
    kind = "CostRelError"


class SizeUnknownAtRecCall(CostRelError):
    kind = "SizeUnknownAtRecCall"


class UnsupportedMutualRecursion(CostRelError):
    kind = "UnsupportedMutualRecursion"


class NotParallelRecursive(CostRelError):
    kind = "NotParallelRecursive"


class NonMonotoneTaskSize(CostRelError):
    kind = "NonMonotoneTaskSize"


class SolutionsUnknown(CostRelError):
    kind = "SolutionsUnknown"
