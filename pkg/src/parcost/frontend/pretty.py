from __future__ import annotations

import re

from ..symexpr import render
from .ast import (
    NIL, Atom, Builtin, CheckGen, Clause, Compound, IntConst, Measure,
    Mode, ParConj, Program, ResourceDecl, Term, TrustCost, TrustSolutions,
    Variable,
)
from .parser import INFIX

_PLAIN_ATOM = re.compile(r"^[a-z][A-Za-z0-9_]*$")


def _atom_text(name: str) -> str:
    if _PLAIN_ATOM.match(name) or name == "[]":
        return name
    return "'" + name.replace("'", "''") + "'"


def _prec(t: Term) -> int:
    if isinstance(t, Compound) and len(t.args) == 2 and t.functor in INFIX:
        return INFIX[t.functor][0]
    if isinstance(t, Compound) and len(t.args) == 1 and t.functor == "-":
        return 200
    if isinstance(t, IntConst) and t.value < 0:
        return 200
    return 0


def format_term(t: Term, maxprec: int = 999) -> str:
    if isinstance(t, Variable):
        return t.name
    if isinstance(t, IntConst):
        s = str(t.value)
        return f"({s})" if t.value < 0 and maxprec < 200 else s
    if isinstance(t, Atom):
        return _atom_text(t.name)
    if t.functor == "." and len(t.args) == 2:
        items = []
        cur: Term = t
        while isinstance(cur, Compound) and cur.functor == "." and len(cur.args) == 2:
            items.append(format_term(cur.args[0], 999))
            cur = cur.args[1]
        tail = "" if cur == NIL else "|" + format_term(cur, 999)
        return "[" + ",".join(items) + tail + "]"
    if len(t.args) == 2 and t.functor in INFIX and t.functor != ",":
        prec, typ = INFIX[t.functor]
        lmax = prec if typ == "yfx" else prec - 1
        rmax = prec if typ == "xfy" else prec - 1
        sep = f" {t.functor} " if t.functor.isalpha() or prec >= 700 else t.functor
        text = format_term(t.args[0], lmax) + sep + format_term(t.args[1], rmax)
        return f"({text})" if prec > maxprec else text
    return _atom_text(t.functor) + "(" + ",".join(format_term(a, 999) for a in t.args) + ")"


def format_goal(g) -> str:
    if isinstance(g, ParConj):
        return _side(g.left, left=True) + " & " + _side(g.right, left=False)
    if isinstance(g, Builtin):
        return format_term(Compound(g.kind.value, g.args), 999)
    if not g.args:
        return _atom_text(g.pred.name)
    return format_term(Compound(g.pred.name, g.args), 999)


def _side(goals, left: bool) -> str:
    if len(goals) > 1:
        return "(" + ", ".join(format_goal(x) for x in goals) + ")"
    g = goals[0]
    # & is right associative: a nested & on the left needs parentheses
    if isinstance(g, ParConj) and left:
        return "(" + format_goal(g) + ")"
    return format_goal(g)


def format_clause(c: Clause) -> str:
    head = format_term(c.head, 999)
    if not c.body:
        return head + "."
    return head + " :-\n    " + ",\n    ".join(format_goal(g) for g in c.body) + "."


def _metric_text(specs) -> str:
    if not specs:
        return "ignore"
    parts = [s.metric.value + (f"({s.name})" if s.name else "") for s in specs]
    return "+".join(parts)


def format_directive(d) -> str:
    if isinstance(d, Mode):
        return f":- mode({_atom_text(d.pred.name)}/{d.pred.arity},[{','.join(m.value for m in d.modes)}])."
    if isinstance(d, Measure):
        return f":- measure({_atom_text(d.pred.name)}/{d.pred.arity},[{','.join(_metric_text(m) for m in d.metrics)}])."
    if isinstance(d, TrustCost):
        return (f":- trust_cost({_atom_text(d.pred.name)}/{d.pred.arity},{d.resource},"
                f"{d.approx.value},'{render(d.cost)}').")
    if isinstance(d, TrustSolutions):
        return f":- trust_solutions({_atom_text(d.pred.name)}/{d.pred.arity},'{render(d.bound)}')."
    if isinstance(d, CheckGen):
        specs = ",".join(format_term(s, 999) for s in d.specs)
        return f":- check_gen({_atom_text(d.pred.name)}/{d.pred.arity},[{specs}])."
    if isinstance(d, ResourceDecl):
        return ":- " + d.definition.to_directive_text() + "."
    raise TypeError(d)


def format_program(p: Program) -> str:
    lines = [format_directive(d) for d in p.directives]
    for pred in p.predicates:
        lines.extend(format_clause(c) for c in p.predicates[pred])
    return "\n".join(lines) + "\n"
