from __future__ import annotations

import pytest

from conftest import ALL_PROGRAMS, BENCH, SCALAR_SRC
from parcost.frontend import (
    NIL, Builtin, BuiltinKind, Call, Compound, DirectiveError, IntConst,
    ParConj, PredId, SourceSyntaxError, ValidatedProgram, ValidationFailed,
    Variable, format_program, format_term, load_program, make_list,
    parse_program, parse_term, validate, validate_or_raise,
)

HEADER = ":- mode(p/1,[in]).\n:- measure(p/1,[int(n)]).\n"


def shape(prog):
    """Program contents without source positions."""
    return {p: [(c.head, c.body) for c in cs] for p, cs in prog.predicates.items()}, \
        [type(d).__name__ for d in prog.directives]


def test_single_fact():
    prog = parse_program("mult(0,_,0).")
    (clause,) = prog.clauses(PredId("mult", 3))
    assert clause.head == Compound("mult", (IntConst(0), Variable("_"), IntConst(0)))
    assert clause.body == ()


def test_empty_input():
    prog = parse_program("")
    assert prog.predicates == {} and prog.directives == []


def test_parallel_conjunction():
    prog = parse_program("p(X):- q(X) & r(X).")
    (clause,) = prog.clauses(PredId("p", 1))
    (g,) = clause.body
    assert isinstance(g, ParConj)
    assert g.left == (Call(PredId("q", 1), (Variable("X"),)),)
    assert g.right == (Call(PredId("r", 1), (Variable("X"),)),)


def test_and_binds_tighter_than_comma():
    prog = parse_program("p(X):- a(X), b(X) & c(X).")
    (clause,) = prog.clauses(PredId("p", 1))
    first, par = clause.body
    assert first.pred.name == "a"
    assert isinstance(par, ParConj)
    prog = parse_program("p(X):- (a(X), b(X)) & c(X).")
    (par,) = prog.clauses(PredId("p", 1))[0].body
    assert [c.pred.name for c in par.left] == ["a", "b"]


def test_list_desugaring():
    assert parse_term("[1,2|T]") == Compound(".", (IntConst(1), Compound(".", (IntConst(2), Variable("T")))))
    assert parse_term("[]") == NIL
    assert make_list([IntConst(7)]) == parse_term("[7]")


def test_builtins_recognised():
    prog = parse_program("p(N,M) :- N > 0, M is N-1, M =:= 3.")
    kinds = [g.kind for g in prog.clauses(PredId("p", 2))[0].body]
    assert all(isinstance(g, Builtin) for g in prog.clauses(PredId("p", 2))[0].body)
    assert kinds == [BuiltinKind.GT, BuiltinKind.IS, BuiltinKind.EQ]


def test_negative_literal():
    assert format_term(parse_term("f(X,-1)")) == "f(X,-1)"


@pytest.mark.parametrize("src", ["p(X :- q.", "p(X) :- X is .", "p(a) q(b)."])
def test_syntax_errors(src):
    with pytest.raises(SourceSyntaxError):
        parse_program(src)


def test_syntax_error_position():
    with pytest.raises(SourceSyntaxError) as ei:
        parse_program("p(a).\np(X :- q.")
    assert "2:" in str(ei.value)


def test_bad_mode_directive():
    with pytest.raises(DirectiveError):
        parse_program(":- mode(p/1, [sideways]).\np(a).")


@pytest.mark.parametrize("name", ALL_PROGRAMS)
def test_pretty_print_round_trip(name):
    prog = load_program(BENCH / f"{name}.pl")
    again = parse_program(format_program(prog))
    assert shape(again) == shape(prog)
    assert format_program(again) == format_program(prog)


# -- validation -------------------------------------------------------------

def test_scalar_validates():
    vp = validate(parse_program(SCALAR_SRC))
    assert isinstance(vp, ValidatedProgram)
    assert vp.in_positions(PredId("scalar", 3)) == [0, 1]
    assert vp.param_names(PredId("scalar", 3)) == ["n", "l"]
    assert vp.param_names(PredId("mult", 3)) == ["n"]


def test_undefined_predicate():
    diags = validate(parse_program(HEADER + "p(X) :- foo(X)."))
    assert [d.kind for d in diags] == ["UndefinedPredicate"]
    assert "foo/1" in diags[0].message
    assert diags[0].loc.line == 3


def test_nonlinear_arithmetic():
    diags = validate(parse_program(HEADER + "p(X) :- Y is X*X."))
    assert [d.kind for d in diags] == ["NonLinearArithmetic"]


def test_dependent_parallel_branches_rejected():
    src = (":- mode(p/1,[in]).\n:- measure(p/1,[int(n)]).\n"
           ":- mode(q/2,[in,out]).\n:- measure(q/2,[int(n),ignore]).\n"
           "p(X) :- q(X,Y) & q(Y,_).\nq(X,X).\n")
    kinds = {d.kind for d in validate(parse_program(src))}
    assert "NonIndependentParConj" in kinds


def test_missing_mode():
    diags = validate(parse_program("p(a)."))
    assert [d.kind for d in diags] == ["MissingModeOrMeasure"]


def test_validate_or_raise():
    with pytest.raises(ValidationFailed):
        validate_or_raise(parse_program(HEADER + "p(X) :- foo(X)."))


@pytest.mark.parametrize("name", ALL_PROGRAMS)
def test_benchmarks_validate(name):
    assert isinstance(validate(load_program(BENCH / f"{name}.pl")), ValidatedProgram)
