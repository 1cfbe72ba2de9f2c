"""Closed-form solutions of cost relations."""

from .bound import ClosedBound
from .forms import Dependence, MaxRecForm, NoMatch, match_max_form
from .maxelim import eliminate_max, resolve_max
from .solver import (
    IllFoundedRecursion, Prepared, SolveError, UnsupportedRecurrence, prepare,
    solve,
)
from .sums import power_sum, range_sum
from .theorems import (
    NotApplicableForLb, PreconditionViolation, theorem1, theorem1_expr,
    theorem2, theorem2_expr,
)

__all__ = [
    "ClosedBound", "Dependence", "IllFoundedRecursion", "MaxRecForm",
    "NoMatch", "NotApplicableForLb", "PreconditionViolation", "Prepared",
    "SolveError", "UnsupportedRecurrence", "eliminate_max", "match_max_form",
    "power_sum", "prepare", "range_sum", "resolve_max", "solve", "theorem1",
    "theorem1_expr", "theorem2", "theorem2_expr",
]
