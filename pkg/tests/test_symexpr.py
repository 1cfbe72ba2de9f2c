from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from exprgen import envs, exprs, random_expr, random_env
from parcost.symexpr import (
    INFINITY, CeilDiv, Const, Fib, Lucas, Max, Min, RecCall, SizeVar, Sum,
    UnboundVariable, UnresolvedRecCall, Verdict, big_o, evaluate,
    is_nondecreasing, parse_domain, parse_expr, prove_leq, render,
    render_big_o, simplify,
)
from parcost.symexpr.compare import Mono

P = parse_expr


def canon(text: str) -> str:
    return render(simplify(P(text)))


# -- simplify ---------------------------------------------------------------

def test_max_idempotent():
    assert canon("max(x, x)") == "x"


def test_product_distributes_into_monomials():
    e = simplify(P("(n+2)*l + 1"))
    assert render(e) == "l*n + 2*l + 1"
    assert isinstance(e, Sum) and len(e.terms) == 3


def test_constant_max_folds():
    assert canon("1 + max(0+1, 0+1)") == "2"


def test_cancellation():
    assert canon("x - x") == "0"
    assert canon("2*x + 3 - x - 1") == "x + 2"


def test_infinity_absorbs():
    x = SizeVar("x")
    assert simplify(INFINITY + x) == INFINITY
    assert simplify(Max((INFINITY, x))) == INFINITY


def test_rational_coefficients_kept():
    assert canon("1/2*fib(x) + 1/2*fib(x)") == "fib(x)"
    assert evaluate(simplify(P("1/2*lucas(x) + 1/2*fib(x)")), {"x": 3}) == 3


@settings(max_examples=300, deadline=None)
@given(exprs, envs)
def test_simplify_preserves_value(e, env):
    assert evaluate(simplify(e), env) == evaluate(e, env)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_simplify_idempotent(e):
    s = simplify(e)
    assert simplify(s) == s


@settings(max_examples=200, deadline=None)
@given(exprs, envs)
def test_render_parse_round_trip(e, env):
    s = simplify(e)
    back = parse_expr(render(s))
    assert evaluate(back, env) == evaluate(s, env)


def test_simplify_value_bulk():
    rng = random.Random(3)
    for _ in range(1000):
        e = random_expr(rng)
        s = simplify(e)
        for _ in range(10):
            env = random_env(rng)
            assert evaluate(s, env) == evaluate(e, env), render(e)


# -- evaluate ---------------------------------------------------------------

def test_fib_lucas_values():
    assert evaluate(P("fib(x) + lucas(x) - 1"), {"x": 10}) == 177
    assert [evaluate(Fib(SizeVar("x")), {"x": i}) for i in range(6)] == [0, 1, 1, 2, 3, 5]
    assert [evaluate(Lucas(SizeVar("x")), {"x": i}) for i in range(6)] == [2, 1, 3, 4, 7, 11]


def test_fib_large_argument_exact():
    assert evaluate(Fib(SizeVar("x")), {"x": 200}) == 280571172992510140037611932413038677189525


def test_evaluate_examples():
    assert evaluate(P("n + l + 1"), {"n": 3, "l": 4}) == 8
    assert evaluate(P("ceil(l/p)"), {"l": 5, "p": 2}) == 3
    assert evaluate(P("exp(2, n)"), {"n": 5}) == 32


def test_evaluate_errors():
    with pytest.raises(UnboundVariable):
        evaluate(P("x + 1"), {})
    with pytest.raises(UnresolvedRecCall):
        evaluate(RecCall("f", (SizeVar("x"),)), {"x": 1})


# -- monotonicity -----------------------------------------------------------

def test_nondecreasing_examples():
    d = parse_domain("n>=0, l>=0")
    assert is_nondecreasing(P("n*l + 2"), "l", d) is Mono.YES
    assert is_nondecreasing(P("5 - l"), "l", d) is Mono.UNKNOWN
    g = RecCall("g", (SizeVar("x"),))
    h = RecCall("h", (SizeVar("x"),))
    assert is_nondecreasing(Max((g, h)), "x", parse_domain("x>=0")) is Mono.YES


def test_nondecreasing_ceil_needs_fixed_denominator():
    d = parse_domain("l>=0, p>=1")
    assert is_nondecreasing(P("ceil(l/p)"), "l", d) is Mono.YES
    assert is_nondecreasing(P("ceil(l/p)"), "p", d) is Mono.UNKNOWN


@settings(max_examples=200, deadline=None)
@given(exprs, envs)
def test_nondecreasing_verdicts_hold(e, env):
    for v in ("a", "b"):
        if is_nondecreasing(e, v) is Mono.YES:
            up = dict(env)
            up[v] += 1
            assert evaluate(e, env) <= evaluate(e, up)


# -- prove_leq --------------------------------------------------------------

def test_prove_leq_examples():
    assert prove_leq(P("l"), P("l*n + l"), parse_domain("n>=0, l>=0")) is Verdict.PROVED
    assert prove_leq(P("max(a, b+c)"), P("max(a,b) + max(a,c)"),
                     parse_domain("a>=0, b>=0, c>=0")) is Verdict.PROVED
    assert prove_leq(P("exp(2, n)"), P("n*n"), parse_domain("n>=0")) is Verdict.UNKNOWN


def test_prove_leq_uses_domain_lower_bounds():
    assert prove_leq(P("1"), P("n"), parse_domain("n>=0")) is Verdict.UNKNOWN
    assert prove_leq(P("1"), P("n"), parse_domain("n>=1")) is Verdict.PROVED


def test_prove_leq_cancels_identical_calls():
    f = RecCall("f", (SizeVar("x"),))
    assert prove_leq(f + Const(Fraction(1)), f + SizeVar("x") + Const(Fraction(1)),
                     parse_domain("x>=0")) is Verdict.PROVED


def test_prove_leq_infinity():
    assert prove_leq(P("x"), INFINITY) is Verdict.PROVED
    assert prove_leq(INFINITY, P("x")) is Verdict.UNKNOWN


@settings(max_examples=300, deadline=None)
@given(exprs, exprs, envs)
def test_prove_leq_sound(e1, e2, env):
    if prove_leq(e1, e2, parse_domain("a>=0, b>=0, c>=0")) is Verdict.PROVED:
        assert evaluate(e1, env) <= evaluate(e2, env)


# -- big-O ------------------------------------------------------------------

@pytest.mark.parametrize("text,want", [
    ("(n+2)*l + 1", "O(l*n)"),
    ("fib(x) + lucas(x) - 1", "O(2^x)"),
    ("7", "O(1)"),
    ("l + 2*ceil(l/p) + 1", "O(l)"),
    ("b*ceil(a/p) + 2*a + 2*ceil(a/p) + 3", "O(b*ceil(a/p))"),
    ("m1 + m2 + n2 + 1", "O(m1 + m2 + n2)"),
    ("max(a, b) + 1", "O(a + b)"),
    ("n*min(1, l) + l + 1", "O(l + n)"),
])
def test_big_o(text, want):
    assert render_big_o(P(text)) == want


def test_big_o_of_constant_is_one():
    assert big_o(Const(Fraction(42))) == Const(Fraction(1))


def test_ceil_div_renders_canonically():
    assert render(CeilDiv(SizeVar("l"), SizeVar("p"))) == "ceil(l/p)"
    assert render(simplify(Min((SizeVar("a"), SizeVar("a"))))) == "a"
