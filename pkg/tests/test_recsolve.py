from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from parcost.costrel import SEQ, CostRelation, Equation
from parcost.frontend import Approx, PredId
from parcost.recsolve import (
    Dependence, MaxRecForm, NotApplicableForLb, PreconditionViolation,
    eliminate_max, match_max_form, power_sum, solve, theorem1, theorem2,
)
from parcost.recsolve.sums import range_sum
from parcost.symexpr import (
    Domain, SizeVar, as_expr, evaluate, parse_domain, parse_expr, render,
)


def relation(params, eqs, approx=Approx.UB):
    """Equations as (guard text, rhs text); each equation is its own group."""
    base = Domain.nonneg(params)
    return CostRelation(
        "f", PredId("f", len(params)), "r", approx, SEQ, tuple(params),
        [Equation(base.conj(parse_domain(g)) if g else base, parse_expr(e), i)
         for i, (g, e) in enumerate(eqs)])


def points(params, top=12):
    for pt in itertools.product(range(top + 1), repeat=len(params)):
        yield dict(zip(params, pt))


def assert_exact(rel, b, top=12):
    for env in points(rel.params, top):
        assert b.at(env) == rel.value(env), env


def assert_sound(rel, b, top=12):
    for env in points(rel.params, top):
        if rel.approx is Approx.UB:
            assert b.at(env) >= rel.value(env), env
        else:
            assert b.at(env) <= rel.value(env), env


LIN = relation(["n"], [("n<=0", "1"), ("n>=1", "f(n-1)+1")])
SCALAR_SEQ = relation(["n", "l"], [("l<=0", "1"), ("l>=1", "f(n,l-1)+(n+1)+1")])
FIB = relation(["x"], [("x<=1", "1"), ("x>=2", "f(x-1)+f(x-2)+1")])
MAXF = relation(["n", "l"], [("l<=0", "1"), ("l>=1", "max(n+1, f(n,l-1))+1")])
GROWING = relation(["x"], [("x<=0", "0"), ("x>=1", "max(x, f(x-1))+1")])


def test_linear():
    b = solve(LIN)
    assert (b.text, b.domain.render(), b.exact) == ("n + 1", "n>=0", True)
    assert_exact(LIN, b)


def test_scalar_sequential():
    b = solve(SCALAR_SEQ)
    assert b.text == "l*n + 2*l + 1" and b.exact
    assert_exact(SCALAR_SEQ, b)


def test_fibonacci():
    b = solve(FIB)
    assert b.text == "fib(x) + lucas(x) - 1" and b.exact
    assert_exact(FIB, b, 20)


def test_fibonacci_split_bases():
    rel = relation(["x"], [("x<=0", "1"), ("x>=1, x<=1", "1"), ("x>=2", "f(x-1)+f(x-2)+1")])
    assert solve(rel).text == "fib(x) + lucas(x) - 1"


@pytest.mark.parametrize("rhs,base,want", [
    ("2*f(x-1)+1", "1", "2*exp(2,x) - 1"),
    ("3*f(x-1)+2", "1", "2*exp(3,x) - 1"),
])
def test_geometric(rhs, base, want):
    rel = relation(["x"], [("x<=0", base), ("x>=1", rhs)])
    b = solve(rel)
    assert b.text == want and b.exact
    assert_exact(rel, b, 15)


def test_geometric_coefficient_sum():
    rel = relation(["x"], [("x<=0", "1"), ("x>=1", "f(x-1)+exp(2,x)")])
    b = solve(rel)
    assert b.text == "2*exp(2,x) - 1"
    assert_exact(rel, b, 15)


def test_stride():
    rel = relation(["x"], [("x<=1", "1"), ("x>=2", "f(x-2)+1")])
    b = solve(rel)
    assert "stride-2" in b.provenance
    assert_exact(rel, b, 30)


@pytest.mark.parametrize("k", range(5))
def test_polynomial_increment(k):
    rel = relation(["x"], [("x<=0", "0"), ("x>=1", "f(x-1)" + "+x" * 1 if k == 1 else
                                           "f(x-1)+" + ("*".join(["x"] * k) if k else "1"))])
    b = solve(rel)
    assert b.exact
    assert_exact(rel, b, 30)


def test_theorem1_scalar_par():
    b = solve(MAXF)
    assert b.text == "l + n + 1" and b.provenance[0] == "theorem1"
    assert_sound(MAXF, b)
    # exact wherever l > 0
    for env in points(MAXF.params):
        if env["l"] > 0:
            assert b.at(env) == MAXF.value(env)


def test_theorem2_growing_guard():
    b = solve(GROWING)
    assert b.provenance[0] == "theorem2" and not b.exact
    assert_sound(GROWING, b, 30)


def test_mutex_groups_take_max():
    rel = relation(["x"], [("x<=0", "1"), ("x>=1", "f(x-1)+1"), ("x>=1", "f(x-1)+3")])
    assert solve(rel).text == "3*x + 1"


def test_lower_bound_solution():
    rel = relation(["x"], [("x<=0", "1"), ("x>=1", "f(x-1)+x")], Approx.LB)
    b = solve(rel)
    assert b.text == "1/2*x*x + 1/2*x + 1"
    assert_exact(rel, b, 30)


@pytest.mark.parametrize("eqs,why", [
    ([("x<=0", "0"), ("x>=1", "f(x)+1")], "ill-founded"),
    ([("x<=0", "1"), ("x>=1", "f(x-1)+f(x-2)")], "ill-founded"),
    ([("x<=0", "2"), ("x>=1", "3*f(x-1)+x")], "unsupported"),
])
def test_unsolved_is_infinite(eqs, why):
    b = solve(relation(["x"], eqs))
    assert b.is_infinite and not b.exact
    assert b.provenance[0].startswith(why)


def test_non_decreasing_argument_is_ill_founded():
    b = solve(relation(["x", "y"], [("x<=0", "0"), ("x>=1", "f(x-1,y+1)+1")]))
    assert b.is_infinite


def test_unsolved_lower_bound_is_zero():
    b = solve(relation(["x"], [("x<=0", "0"), ("x>=1", "f(x)+1")], Approx.LB))
    assert b.text == "0"


# -- max forms --------------------------------------------------------------

def test_match_scalar_form():
    form = match_max_form(MAXF)
    assert (form.var, form.theta) == ("l", 0)
    assert (render(form.B), render(form.C), render(form.D)) == ("1", "n + 1", "1")
    assert form.dependence is Dependence.INDEPENDENT


def test_match_commuted_and_growing():
    rel = relation(["x"], [("x<=0", "0"), ("x>=1", "max(f(x-1), x)+1")])
    assert match_max_form(rel).dependence is Dependence.NONDECREASING
    assert match_max_form(GROWING).dependence is Dependence.NONDECREASING


def test_match_without_increment():
    form = match_max_form(relation(["x"], [("x<=2", "4"), ("x>=3", "max(7, f(x-1))")]))
    assert (form.theta, render(form.D)) == (2, "0")


def test_no_match_second_order():
    assert not match_max_form(relation(["x"], [("x<=0", "1"), ("x>=1", "f(x-1)+f(x-2)")]))


def _form(B, C, D, theta=0, var="x", dep=Dependence.INDEPENDENT):
    return MaxRecForm(var, theta, as_expr(B), as_expr(C), as_expr(D), dep, (var,))


def test_theorem1_constants():
    b = theorem1(_form(5, 3, 2))
    assert b.text == "2*x + 5" and b.exact
    # unrolled: 7, 9, 11, ...
    assert [b.at({"x": x}) for x in range(1, 6)] == [7, 9, 11, 13, 15]


def test_theorem1_zero_increment():
    assert theorem1(_form(4, 9, 0)).text == "9"


def test_theorem1_rejects_dependent_form():
    with pytest.raises(PreconditionViolation):
        theorem1(_form(0, SizeVar("x"), 1, dep=Dependence.NONDECREASING))


def test_theorem2_example():
    b = theorem2(_form(0, SizeVar("x"), 1, dep=Dependence.NONDECREASING))
    assert b.at({"x": 4}) == 17
    f = 0
    for x in range(1, 5):
        f = max(x, f) + 1
    assert f == 5
    # tight one step past the base
    assert b.at({"x": 1}) == 2


def test_theorem2_constant_parts_match_theorem1():
    t2 = theorem2(_form(3, 0, 2, dep=Dependence.NONDECREASING))
    t1 = theorem1(_form(3, 0, 2))
    for x in range(1, 20):
        assert t2.at({"x": x}) == t1.at({"x": x})


def test_theorem2_upper_only():
    with pytest.raises(NotApplicableForLb):
        theorem2(_form(0, SizeVar("x"), 1, dep=Dependence.NONDECREASING), approx=Approx.LB)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 3), st.integers(0, 20), st.integers(0, 20), st.integers(0, 20),
       st.integers(0, 3), st.integers(0, 3))
def test_theorem1_matches_unrolling(theta, B, c0, d0, c1, d1):
    y = SizeVar("y")
    C = as_expr(c0) + as_expr(c1) * y
    D = as_expr(d0) + as_expr(d1) * y
    form = MaxRecForm("x", theta, as_expr(B), C, D, Dependence.INDEPENDENT, ("x", "y"))
    b = theorem1(form)
    for yv in (0, 2, 5):
        f = B
        cv, dv = evaluate(C, {"y": yv}), evaluate(D, {"y": yv})
        for x in range(theta + 1, 31):
            f = max(cv, f) + dv
            assert b.at({"x": x, "y": yv}) == f


# -- max elimination --------------------------------------------------------

def test_eliminate_max_examples():
    d = parse_domain("n>=0")
    assert render(eliminate_max(parse_expr("max(1, n+1)"), d, Approx.UB)) == "n + 1"
    assert render(eliminate_max(parse_expr("max(exp(2,n), n*n)"), d, Approx.UB)) == "n*n + exp(2,n)"
    assert render(eliminate_max(parse_expr("max(exp(2,n), n*n)"), d, Approx.LB)) == "exp(2,n)"
    assert render(eliminate_max(parse_expr("max(a, a)"), None, Approx.UB)) == "a"


def test_eliminate_min_lower():
    d = parse_domain("a>=0, b>=0")
    assert render(eliminate_max(parse_expr("min(a, b)"), d, Approx.LB)) == "min(a, b)"
    assert render(eliminate_max(parse_expr("min(a, b)"), d, Approx.UB)) == "a"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
def test_eliminate_max_direction(a, b, c):
    e = parse_expr("max(a, b*c) + max(b, 2)")
    env = {"a": a, "b": b, "c": c}
    d = parse_domain("a>=0, b>=0, c>=0")
    assert evaluate(eliminate_max(e, d, Approx.UB), env) >= evaluate(e, env)
    assert evaluate(eliminate_max(e, d, Approx.LB), env) <= evaluate(e, env)


# -- sums -------------------------------------------------------------------

@pytest.mark.parametrize("k", range(5))
def test_power_sum_brute_force(k):
    e = power_sum(k, SizeVar("x"))
    for x in range(101):
        assert evaluate(e, {"x": x}) == sum(Fraction(j) ** k for j in range(1, x + 1))


def test_range_sum_polynomial():
    # sum_{x=theta+1}^{X} c(x) for c(x) = 3x + y
    e = range_sum(parse_expr("3*x + y"), "x", 2)
    for X in range(2, 20):
        for y in range(4):
            want = sum(3 * x + y for x in range(3, X + 1))
            assert evaluate(e, {"x": X, "y": y}) == want


def test_random_linear_relations():
    rng = random.Random(11)
    for _ in range(60):
        theta = rng.randint(0, 2)
        base = rng.randint(0, 5)
        coeffs = [rng.randint(0, 3) for _ in range(3)]
        inc = f"{coeffs[0]} + {coeffs[1]}*x + {coeffs[2]}*x*x"
        rel = relation(["x"], [(f"x<={theta}", str(base)), (f"x>={theta + 1}", f"f(x-1) + {inc}")])
        b = solve(rel)
        assert_sound(rel, b, 25)
        # a base above zero is re-anchored, which is sound but not exact
        assert b.exact or theta > 0
        if b.exact:
            assert_exact(rel, b, 25)
