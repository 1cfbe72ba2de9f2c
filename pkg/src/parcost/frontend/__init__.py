"""Parsing and validation of the and-parallel logic program subset."""

from .ast import (
    NIL, Approx, Atom, Builtin, BuiltinKind, Call, CheckGen, Clause, Compound,
    IntConst, Measure, Metric, MetricSpec, Mode, ModeKind, ParConj, PredId,
    Program, ResourceDecl, SourceLoc, Term, TrustCost, TrustSolutions,
    Variable, cons, flat_literals, goal_vars, is_ground, make_list, term_vars,
)
from .parser import (
    DirectiveError, DuplicateDirective, SourceSyntaxError, parse_program,
    parse_term, term_to_costexpr, tokenize,
)
from .pretty import format_clause, format_goal, format_program, format_term
from .validate import (
    Diagnostic, SizeParam, ValidatedProgram, ValidationFailed, validate,
    validate_or_raise,
)


def load_program(path) -> Program:
    from pathlib import Path

    path = Path(path)
    return parse_program(path.read_text(), str(path))


__all__ = [
    "NIL", "Approx", "Atom", "Builtin", "BuiltinKind", "Call", "CheckGen",
    "Clause", "Compound", "Diagnostic", "DirectiveError", "DuplicateDirective",
    "IntConst", "Measure", "Metric", "MetricSpec", "Mode", "ModeKind",
    "ParConj", "PredId", "Program", "ResourceDecl", "SizeParam", "SourceLoc",
    "SourceSyntaxError", "Term", "TrustCost", "TrustSolutions",
    "ValidatedProgram", "ValidationFailed", "Variable", "cons",
    "flat_literals", "format_clause", "format_goal", "format_program",
    "format_term", "goal_vars", "is_ground", "load_program", "make_list",
    "parse_program", "parse_term", "term_to_costexpr", "term_vars", "tokenize",
    "validate", "validate_or_raise",
]
