from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend.ast import Approx
from ..symexpr import (
    INFINITY, ZERO, CostExpr, Domain, big_o, evaluate, has_reccall, render,
    render_big_o, simplify, substitute,
)


@dataclass(frozen=True)
class ClosedBound:
    expr: CostExpr
    domain: Domain
    approx: Approx
    exact: bool = False
    provenance: tuple = field(default=())
    params: tuple = ()

    def __post_init__(self):
        if has_reccall(self.expr):
            raise ValueError("closed bound still mentions a recurrence call")

    @property
    def text(self) -> str:
        return render(self.expr)

    @property
    def big_o(self) -> CostExpr:
        return big_o(self.expr, self.domain)

    def big_o_text(self) -> str:
        return render_big_o(self.expr, self.domain)

    def at(self, env: dict):
        return evaluate(self.expr, env)

    def instantiate(self, args) -> CostExpr:
        """The bound with its parameters replaced by size expressions."""
        return simplify(substitute(self.expr, dict(zip(self.params, args))))

    @property
    def is_infinite(self) -> bool:
        return self.expr == INFINITY

    @staticmethod
    def trivial(approx: Approx, domain: Domain, params: tuple, why: str) -> "ClosedBound":
        e = INFINITY if approx is Approx.UB else ZERO
        return ClosedBound(e, domain, approx, False, (why,), params)
