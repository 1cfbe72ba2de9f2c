from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import BENCH, analyzer
from parcost.costrel import PTASKS, STEPS_PAR, STEPS_SEQ, STHREADS
from parcost.frontend import (
    BuiltinKind, IntConst, PredId, load_program, make_list, parse_program, parse_term,
)
from parcost.oracle import (
    BuiltinNode, ClauseNode, Failure, ParNode, SeqNode, Timeout, fold_resource,
    generate, greedy_makespan, input_points, makespan, measure, run, task_dag,
    tree_to_json,
)

SCALAR_PROG = load_program(BENCH / "scalar.pl")
FIB_PROG = load_program(BENCH / "fib.pl")


def test_scalar_run():
    res = run(SCALAR_PROG, parse_term("scalar(2,[5,5],Ys)"))
    assert res.answer[2] == parse_term("[10,10]")
    m = measure(res.tree)
    assert (m.work, m.depth, m.max_procs, m.tasks_spawned) == (9, 5, 2, 2)
    assert m.check_invariants() == []


def test_base_case_is_one_node():
    res = run(SCALAR_PROG, parse_term("mult(0,9,Y)"))
    assert isinstance(res.tree, ClauseNode) and res.tree.children == []
    assert res.answer[2] == IntConst(0)


def test_failure():
    with pytest.raises(Failure):
        run(SCALAR_PROG, parse_term("mult(-1,0,Y)"))


def test_fuel_exhaustion():
    prog = parse_program("loop(X) :- loop(X).")
    with pytest.raises(Timeout):
        run(prog, parse_term("loop(a)"), fuel=1000)


def test_backtracking_into_second_clause():
    prog = parse_program("p(X) :- q(X), X > 1.\nq(1).\nq(2).\n")
    res = run(prog, parse_term("p(X)"))
    assert res.answer == (IntConst(2),)
    # only the successful branch is in the tree
    assert fold_resource(res.tree, STEPS_SEQ) == 2


def test_all_solutions():
    prog = parse_program("c(a).\nc(b).\nc(c).\n")
    res = run(prog, parse_term("c(X)"), all_solutions=True)
    assert isinstance(res.tree, SeqNode) and len(res.tree.children) == 3


def test_fib_tasks():
    res = run(FIB_PROG, parse_term("fib(4,F)"))
    assert res.answer[1] == IntConst(3)
    assert fold_resource(res.tree, PTASKS) == 4
    assert measure(res.tree).tasks_spawned == 4


def fib_work(x):
    return 1 if x <= 1 else 1 + fib_work(x - 1) + fib_work(x - 2)


def fib_threads(x):
    return 0 if x <= 1 else max(fib_threads(x - 1) + fib_threads(x - 2) + 1, 0)


@pytest.mark.parametrize("x", range(12))
def test_fib_folds_match_recurrences(x):
    tree = run(FIB_PROG, parse_term(f"fib({x},F)")).tree
    assert fold_resource(tree, STEPS_SEQ) == fib_work(x)
    assert fold_resource(tree, STEPS_PAR) == max(x, 1)
    assert fold_resource(tree, STHREADS) == fib_threads(x)


def test_seq_par_fold_ignores_parallelism():
    tree = run(SCALAR_PROG, parse_term("scalar(3,[1,2,3],Y)")).tree
    assert fold_resource(tree, STEPS_PAR, seq_par=True) == fold_resource(tree, STEPS_SEQ)


def test_tree_json():
    tree = run(SCALAR_PROG, parse_term("scalar(0,[1],Y)")).tree
    j = tree_to_json(tree)
    assert j["clause"] == "scalar/3"
    assert "par" in j["children"][0]


# -- makespan ---------------------------------------------------------------

def leaf(name="t"):
    return ClauseNode(PredId(name, 0), 0)


def par(a, b):
    return ParNode(SeqNode([a]), SeqNode([b]))


def test_makespan_two_leaves():
    tree = ClauseNode(PredId("r", 0), 0, [par(leaf(), leaf())])
    assert makespan(tree, (1, 2, 3)) == {1: 3, 2: 2, 3: 2}


def test_weighted_makespan_counts_builtins():
    body = [BuiltinNode(BuiltinKind.GT), BuiltinNode(BuiltinKind.IS)]
    tree = ClauseNode(PredId("r", 0), 0, [par(ClauseNode(PredId("a", 0), 0, body), leaf())])
    assert makespan(tree, (1, 2)) == {1: 3, 2: 2}
    heavy = makespan(tree, (1, 2), builtin_w=lambda _: 2)
    # chain r, a, gt, gt, is, is next to a single t
    assert heavy == {1: 7, 2: 6}


def test_zero_weight_heads():
    tree = ClauseNode(PredId("r", 0), 0, [par(leaf(), leaf())])
    assert makespan(tree, (1,), head_w=lambda p: 0 if p.name == "r" else 1) == {1: 2}


def random_tree(rng, depth=4):
    kids = []
    for _ in range(rng.randint(0, 3)):
        if depth > 0 and rng.random() < 0.5:
            kids.append(par(random_tree(rng, depth - 1), random_tree(rng, depth - 1)))
        elif depth > 0 and rng.random() < 0.5:
            kids.append(random_tree(rng, depth - 1))
        else:
            kids.append(BuiltinNode(BuiltinKind.IS))
    return ClauseNode(PredId("n", 0), 0, kids)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_makespan_invariants(seed):
    tree = random_tree(random.Random(seed))
    m = measure(tree, procs=(1, 2, 3, 4, 8))
    assert m.check_invariants() == []
    for n, t in m.makespan.items():
        assert t >= max(m.depth, math.ceil(m.work / n))
        # greedy list scheduling stays within work/n + depth
        assert t <= m.work / n + m.depth


def test_makespan_needs_a_processor():
    succ, indeg = task_dag(leaf())
    with pytest.raises(ValueError):
        greedy_makespan(succ, indeg, 0)


def test_enough_processors_reach_depth():
    rng = random.Random(5)
    for _ in range(50):
        tree = random_tree(rng)
        m = measure(tree, procs=())
        assert makespan(tree, (m.work,))[m.work] == m.depth


# -- inputs -----------------------------------------------------------------

def test_generate_list():
    t = generate(parse_term("list(l, int)"), {"l": 4}, random.Random(0))
    assert len(_elems(t)) == 4
    assert all(isinstance(e, IntConst) and 0 <= e.value <= 9 for e in _elems(t))


def _elems(t):
    out = []
    while getattr(t, "functor", None) == ".":
        out.append(t.args[0])
        t = t.args[1]
    return out


def test_input_points_cover_grid():
    gen = analyzer("scalar").vp.program.check_gens()[0]
    pts = list(input_points(gen, 3))
    assert len(pts) == 16
    assert {tuple(p.sizes.values()) for p in pts} == {(n, l) for n in range(4) for l in range(4)}
    p = next(p for p in pts if p.sizes == {"n": 2, "l": 3})
    assert p.goal.args[0] == IntConst(2)
    assert len(_elems(p.goal.args[1])) == 3


def test_input_points_deterministic():
    gen = analyzer("scalar").vp.program.check_gens()[0]
    # output arguments are fresh variables, so compare the inputs
    a = [p.goal.args[:2] for p in input_points(gen, 3, seed=7)]
    b = [p.goal.args[:2] for p in input_points(gen, 3, seed=7)]
    assert a == b


def test_input_points_negative_size():
    gen = analyzer("scalar").vp.program.check_gens()[0]
    assert list(input_points(gen, -1)) == []


def test_generated_goals_run():
    an = analyzer("scalar")
    for p in input_points(an.vp.program.check_gens()[0], 4):
        res = run(an.vp.program, p.goal)
        assert fold_resource(res.tree, STEPS_SEQ) == p.sizes["l"] * p.sizes["n"] + 2 * p.sizes["l"] + 1


def test_make_list_round_trip():
    assert _elems(make_list([IntConst(1), IntConst(2)])) == [IntConst(1), IntConst(2)]
