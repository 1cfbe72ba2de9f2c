"""Symbolic cost expressions: construction, simplification, evaluation,
comparison and order-of-growth summaries."""

from .bigo import big_o, leading_monomials, render_big_o
from .compare import (
    Mono, Verdict, expr_nonneg, expr_positive, is_nondecreasing, prove_leq,
    prove_nonneg,
)
from .domain import Constraint, Domain, ge, linear_form, parse_domain
from .evaluate import UnboundVariable, UnresolvedRecCall, evaluate
from .expr import (
    INF, INFINITY, ONE, ZERO, CeilDiv, Const, CostExpr, Fib, Lucas, Max, Min,
    Pow, Prod, RecCall, SizeVar, Sum, add, as_expr, ceil_div, emax, emin, fib,
    free_vars, has_reccall, lucas, mul, power, rec, reccalls, render,
    replace_reccalls, substitute, transform, var,
)
from .parse import ExprSyntaxError, parse_expr
from .simplify import simplify

__all__ = [
    "INF", "INFINITY", "ONE", "ZERO", "CeilDiv", "Const", "Constraint",
    "CostExpr", "Domain", "ExprSyntaxError", "Fib", "Lucas", "Max", "Min",
    "Mono", "Pow", "Prod", "RecCall", "SizeVar", "Sum", "UnboundVariable",
    "UnresolvedRecCall", "Verdict", "add", "as_expr", "big_o", "ceil_div",
    "emax", "emin", "evaluate", "expr_nonneg", "expr_positive", "fib",
    "free_vars", "ge", "has_reccall", "is_nondecreasing", "leading_monomials",
    "linear_form", "lucas", "mul", "parse_domain", "parse_expr", "power",
    "prove_leq", "prove_nonneg", "rec", "reccalls", "render", "render_big_o",
    "replace_reccalls", "simplify", "substitute", "transform", "var",
]
