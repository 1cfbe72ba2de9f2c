"""Acceptance criteria 1 to 7.

Each ``criterion_N`` returns ``(ok, detail)``. Under pytest every criterion
is a test and a one-line verdict per criterion is printed in the terminal
summary; run this file directly to print the verdicts without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ALL_PROGRAMS, BENCH, BENCHMARKS, SCALAR_SRC  # noqa: E402
from exprgen import random_pair  # noqa: E402
from parcost.analysis import analyze_file, analyze_source  # noqa: E402
from parcost.checking import CheckReport, check_program  # noqa: E402
from parcost.costrel import SEQ, CostRelation, Equation, ExecModel  # noqa: E402
from parcost.frontend import Approx, PredId  # noqa: E402
from parcost.recsolve import match_max_form, theorem1, theorem2  # noqa: E402
from parcost.symexpr import (  # noqa: E402
    Const, Domain, Max, RecCall, SizeVar, Sum, Verdict, as_expr, evaluate, ge,
    parse_domain, parse_expr, prove_leq, render, simplify,
)

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str):
    RESULTS[n] = (ok, detail)
    return ok, detail


def canon(text: str) -> str:
    return render(simplify(parse_expr(text)))


def canon_big_o(text: str) -> str:
    inner = text[2:-1]
    return text if "^" in inner else f"O({canon(inner)})"


def _bound(an, pred, resource, model, approx=Approx.UB):
    return an.bound(pred, resource, approx, ExecModel.parse(model))


# -- 1 ------------------------------------------------------------------------

SCALAR_EXPECTED = [
    ("scalar", "steps_seq", "seq", "(n+2)*l + 1"),
    ("mult", "steps_seq", "seq", "n+1"),
    ("scalar", "steps_par", "par-inf", "n+l+1"),
    ("scalar", "sthreads", "par-inf", "l"),
    ("mult", "sthreads", "par-inf", "0"),
]


def criterion_1():
    t0 = time.perf_counter()
    an = analyze_source(SCALAR_SRC, "scalar.pl")
    preds = {"scalar": PredId("scalar", 3), "mult": PredId("mult", 3)}
    bad = []
    for name, r, m, want in SCALAR_EXPECTED:
        b = _bound(an, preds[name], r, m)
        dom_ok = all(b.domain.holds({v: 0 for v in b.params}) and
                     not b.domain.holds({**{v: 0 for v in b.params}, v: -1})
                     for v in b.params)
        if b.text != canon(want) or not dom_ok:
            bad.append(f"{name} {r}: {b.text} [{b.domain.render()}]")
    secs = time.perf_counter() - t0
    ok = not bad and secs < 1.0
    return record(1, ok, f"{len(SCALAR_EXPECTED) - len(bad)}/{len(SCALAR_EXPECTED)} closed forms, "
                         f"{secs:.2f}s" + ("; " + "; ".join(bad) if bad else ""))


# -- 2 ------------------------------------------------------------------------

# (seq, par, threads) upper bounds with their orders, in the corpus' variable
# names. The orders for intersect are read as O(a*b), O(a + b), O(a).
REFERENCE_UNBOUNDED = {
    "map_add1": [("2*l + 1", "O(l)"), ("2*l + 1", "O(l)"), ("l", "O(l)")],
    "fib": [("fib(x) + lucas(x) - 1", "O(2^x)"), ("x + 1", "O(x)"),
            ("fib(x) + lucas(x) - 1", "O(2^x)")],
    "mmatrix": [("n2*m2*m1 + 2*m2*m1 + 2*m1 + 1", "O(n2*m2*m1)"),
                ("2*m1 + n1 + 1", "O(n1 + m1)"), ("m2*m1 + m1", "O(m2*m1)")],
    "blur": [("2*m*n + 2*n + 1", "O(m*n)"), ("2*m + 2*n + 1", "O(m + n)"), ("n", "O(n)")],
    "add_mat": [("m*n + 2*n + 1", "O(m*n)"), ("m + 2*n + 1", "O(m + n)"), ("n", "O(n)")],
    "intersect": [("a*b + 3*a + 3", "O(a*b)"), ("b + 2*a + 3", "O(a + b)"), ("a", "O(a)")],
    "union": [("a*b + 3*a + 3", "O(a*b)"), ("2*b + 2*a + 3", "O(a + b)"), ("a", "O(a)")],
    "diff": [("a*b + 3*a + 3", "O(a*b)"), ("b + 2*a + 3", "O(a + b)"), ("a", "O(a)")],
    "dyade": [("a*b + 2*a + 1", "O(a*b)"), ("b + a + 1", "O(a + b)"), ("a", "O(a)")],
    "dyade_map": [("mx*m*l + 2*m*l + 2*m + 1", "O(mx*m*l)"), ("mx + m + l + 1", "O(mx + m + l)"),
                  ("l*m + l", "O(m*l)")],
    "append_all": [("l*m + 2*m + 1", "O(l*m)"), ("l + m + 1", "O(l + m)"), ("m", "O(m)")],
}

UNBOUNDED_ROWS = [("steps_seq", "seq"), ("steps_par", "par-inf"), ("sthreads", "par-inf")]


def _within_one(ours: str, ref: str) -> bool:
    d = simplify(Sum((parse_expr(ours), parse_expr(f"-1*({ref})"))))
    return isinstance(d, Const) and abs(d.value) <= 1


def compare_unbounded(name: str, an=None):
    """Per resource: (ours, ref, exact, big_o_ok)."""
    an = an or analyze_file(BENCH / f"{name}.pl")
    pred = an.vp.program.check_gens()[0].pred
    out = []
    for (r, m), (ref, ref_o) in zip(UNBOUNDED_ROWS, REFERENCE_UNBOUNDED[name]):
        b = _bound(an, pred, r, m)
        out.append((b.text, canon(ref), b.text == canon(ref),
                    b.big_o_text() == canon_big_o(ref_o)))
    return out


def criterion_2():
    t0 = time.perf_counter()
    rows = {n: compare_unbounded(n) for n in BENCHMARKS}
    secs = time.perf_counter() - t0
    exact = [n for n, cs in rows.items() if all(c[2] for c in cs)]
    near = [n for n, cs in rows.items() if n not in exact and
            all(c[2] or _within_one(c[0], c[1]) for c in cs)]
    o_bad = [f"{n}/{r}" for n, cs in rows.items()
             for (r, _), c in zip(UNBOUNDED_ROWS, cs) if not c[3]]
    diffs = [f"{n}/{r}: {c[0]} vs {c[1]}" for n, cs in rows.items()
             for (r, _), c in zip(UNBOUNDED_ROWS, cs) if not c[2]]
    ok = (len(exact) >= 9 and len(exact) + len(near) == len(BENCHMARKS)
          and not o_bad and secs < 10.0)
    detail = (f"{len(exact)}/11 rows exact, {len(near)} within 1, "
              f"orders {33 - len(o_bad)}/33, {secs:.2f}s")
    if not ok:
        detail += "; differs: " + "; ".join(diffs)
        if o_bad:
            detail += "; order differs: " + ", ".join(o_bad)
    return record(2, ok, detail)


# -- 3 ------------------------------------------------------------------------

# leading term and order under --model par:p
REFERENCE_BOUNDED = {
    "map_add1": ("2*ceil(l/p)", "O(ceil(l/p))"),
    "blur": ("2*ceil(n/p)*m", "O(ceil(n/p)*m)"),
    "add_mat": ("ceil(n/p)*m", "O(ceil(n/p)*m)"),
    "intersect": ("ceil(a/p)*b", "O(ceil(a/p)*b)"),
    "union": ("ceil(a/p)*b", "O(ceil(a/p)*b)"),
    "diff": ("ceil(a/p)*b", "O(ceil(a/p)*b)"),
    "dyade": ("ceil(a/p)*b", "O(ceil(a/p)*b)"),
    "append_all": ("ceil(m/p)*l", "O(ceil(m/p)*l)"),
}


def _terms(e):
    return e.terms if isinstance(e, Sum) else (e,)


def compare_bounded(name: str):
    an = analyze_file(BENCH / f"{name}.pl")
    pred = an.vp.program.check_gens()[0].pred
    b = _bound(an, pred, "steps_par", "par:p")
    lead, ref_o = REFERENCE_BOUNDED[name]
    return b.text, simplify(parse_expr(lead)) in _terms(b.expr), b.big_o_text() == canon_big_o(ref_o)


def criterion_3():
    rows = {n: compare_bounded(n) for n in REFERENCE_BOUNDED}
    lead_bad = [n for n, (_, lead, _) in rows.items() if not lead]
    o_bad = [f"{n}: {rows[n][0]}" for n, (_, _, o) in rows.items() if not o]
    ok = not lead_bad and not o_bad
    detail = f"leading terms {8 - len(lead_bad)}/8, orders {8 - len(o_bad)}/8"
    if lead_bad:
        detail += "; leading term missing: " + ", ".join(lead_bad)
    if o_bad:
        detail += "; order differs: " + "; ".join(o_bad)
    return record(3, ok, detail)


# -- 4 ------------------------------------------------------------------------

X, Y = SizeVar("x"), SizeVar("y")


def max_relation(theta, B, C, D):
    base = Domain.nonneg(["x", "y"])
    return CostRelation("f", PredId("f", 2), "r", Approx.UB, SEQ, ("x", "y"), [
        Equation(base.add(ge(as_expr(theta), X)), as_expr(B), 0),
        Equation(base.add(ge(X, as_expr(theta + 1))), Max((C, RecCall("f", (X - 1, Y)))) + D, 1),
    ])


def unroll(theta, B, C, D, y, top=30):
    out, f = [], B
    for x in range(top + 1):
        if x > theta:
            f = max(evaluate(C, {"x": x, "y": y}), f) + evaluate(D, {"x": x, "y": y})
        out.append(f)
    return out


def theorem1_instances(n=500, seed=1):
    rng = random.Random(seed)
    bad = 0
    for _ in range(n):
        theta, B = rng.randint(0, 3), rng.randint(0, 20)
        C = as_expr(rng.randint(0, 20)) + as_expr(rng.randint(0, 3)) * Y
        D = as_expr(rng.randint(0, 20)) + as_expr(rng.randint(0, 3)) * Y * Y
        form = match_max_form(max_relation(theta, B, C, D))
        b = theorem1(form)
        for y in (0, 3):
            for x, want in enumerate(unroll(theta, B, C, D, y)):
                got = evaluate(form.B, {}) if x <= theta else b.at({"x": x, "y": y})
                if got != want:
                    bad += 1
                    break
            else:
                continue
            break
    return bad


def theorem2_instances(n=500, seed=2):
    rng = random.Random(seed)
    bad = 0
    for _ in range(n):
        theta, B = rng.randint(0, 3), rng.randint(0, 20)
        g = as_expr(rng.randint(0, 10)) + as_expr(rng.randint(0, 3)) * X + \
            as_expr(rng.randint(0, 2)) * X * X
        h = as_expr(rng.randint(0, 10)) + as_expr(rng.randint(0, 3)) * X
        b = theorem2(match_max_form(max_relation(theta, B, g, h)))
        for x, want in enumerate(unroll(theta, B, g, h, 0)):
            if x <= theta:
                continue
            got = b.at({"x": x, "y": 0})
            if got < want or (x == theta + 1 and got != want):
                bad += 1
                break
    return bad


MAX_LAWS = [
    ("max(a, b)", "max(b, a)", "eq"),
    ("max(a, max(b, c))", "max(max(a, b), c)", "eq"),
    ("max(a, a)", "a", "eq"),
    ("max(a, b + c)", "max(a, b) + max(a, c)", "le"),
]


def max_triples(n=10_000, seed=3):
    rng = random.Random(seed)
    laws = [(parse_expr(l), parse_expr(r), k) for l, r, k in MAX_LAWS]
    dom = parse_domain("a>=0, b>=0, c>=0")
    # the symbolic layer proves the inequality outright
    bad = int(prove_leq(laws[3][0], laws[3][1], dom) is not Verdict.PROVED)
    mono_l, mono_r = parse_expr("max(a, b)"), parse_expr("max(c, d)")
    for _ in range(n):
        a, b, c = (rng.randint(0, 10 ** rng.randint(0, 6)) for _ in range(3))
        env = {"a": a, "b": b, "c": c}
        for lhs, rhs, kind in laws:
            lv, rv = evaluate(lhs, env), evaluate(rhs, env)
            if (kind == "eq" and lv != rv) or (kind == "le" and lv > rv):
                bad += 1
        # monotonicity of max under a <= c, b <= d
        big = {"a": a, "b": b, "c": a + rng.randint(0, 50), "d": b + rng.randint(0, 50)}
        if evaluate(mono_l, big) > evaluate(mono_r, big):
            bad += 1
    return bad


def criterion_4():
    t0 = time.perf_counter()
    b1, b2, b3 = theorem1_instances(), theorem2_instances(), max_triples()
    secs = time.perf_counter() - t0
    ok = b1 == b2 == b3 == 0 and secs < 30.0
    return record(4, ok, f"theorem 1: {b1}/500 mismatches, theorem 2: {b2}/500 failures, "
                         f"max laws: {b3} failures on 10^4 triples, {secs:.1f}s")


# -- 5 and 6 ------------------------------------------------------------------

@lru_cache(maxsize=None)
def sweep() -> CheckReport:
    total = CheckReport()
    for name in ALL_PROGRAMS:
        total.merge(check_program(analyze_file(BENCH / f"{name}.pl"), max_size=8, procs=(1, 2, 4)))
    return total


def criterion_5():
    rep = sweep()
    bounds = [v for v in rep.violations if not v.what.startswith("fold ")]
    ok = not bounds and not rep.timeouts and rep.seconds < 300
    detail = (f"{rep.points} inputs over {len(ALL_PROGRAMS)} programs, {rep.comparisons} comparisons, "
              f"{len(bounds)} violations, {len(rep.timeouts)} timeouts, {rep.seconds:.0f}s")
    if bounds:
        detail += "; first: " + bounds[0].render()
    return record(5, ok, detail)


def criterion_6():
    rep = sweep()
    folds = [v for v in rep.violations if v.what.startswith("fold ")]
    ok = not folds and rep.trees > 0
    return record(6, ok, f"{rep.trees} trees, {len(folds)} fold/metric disagreements")


# -- 7 ------------------------------------------------------------------------

def criterion_7(target=10_000, envs=100, seed=4):
    rng = random.Random(seed)
    dom = parse_domain("a>=0, b>=0, c>=0")
    proved = tried = bad = 0
    t0 = time.perf_counter()
    while proved < target:
        e1, e2 = random_pair(rng)
        tried += 1
        if prove_leq(e1, e2, dom) is not Verdict.PROVED:
            continue
        proved += 1
        for _ in range(envs):
            env = {v: rng.choice((0, 1, 2, rng.randint(0, 12), rng.randint(0, 40))) for v in "abc"}
            if evaluate(e1, env) > evaluate(e2, env):
                bad += 1
                break
    secs = time.perf_counter() - t0
    return record(7, bad == 0, f"{proved} proved of {tried} pairs, {bad} counterexamples "
                               f"over {envs} environments each, {secs:.0f}s")


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7}

TITLES = {
    1: "worked example closed forms",
    2: "reference bounds, unbounded processors",
    3: "reference bounds, p processors",
    4: "max-recurrence theorems and max laws",
    5: "oracle soundness sweep",
    6: "fold and metric agreement",
    7: "prove_leq soundness fuzz",
}


def verdict_line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n} [{'PASS' if ok else 'FAIL'}] {TITLES[n]}: {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, detail = CRITERIA[n]()
    print(verdict_line(n))
    assert ok, detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        CRITERIA[n]()
        print(verdict_line(n), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
