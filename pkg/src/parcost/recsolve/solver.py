"""Turning a cost relation into a closed-form bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..costrel.types import CostRelation
from ..frontend.ast import Approx
from ..symexpr import (
    ONE, ZERO, CeilDiv, Const, CostExpr, Domain, Fib, Lucas, Max, Min, RecCall,
    SizeVar, Sum, as_expr, free_vars, ge, has_reccall, is_nondecreasing,
    prove_leq, prove_nonneg, reccalls, replace_reccalls, simplify, substitute,
    transform,
)
from ..symexpr.compare import Mono
from ..symexpr.numeric import fib_value, lucas_value
from ..symexpr.simplify import POLY_INF, from_poly, to_poly
from .bound import ClosedBound
from .forms import Dependence, is_self_call, split_max_rhs, classify, MaxRecForm
from .maxelim import eliminate_max, resolve_max
from .sums import range_sum
from .theorems import PreconditionViolation, theorem1_expr, theorem2_expr


class SolveError(Exception):
    kind = "SolveError"


class UnsupportedRecurrence(SolveError):
    kind = "UnsupportedRecurrence"


class IllFoundedRecursion(SolveError):
    kind = "IllFoundedRecursion"


@dataclass
class Prepared:
    var: str | None
    theta: int
    deltas: set
    bases: dict            # t -> CostExpr
    rec_rhs: CostExpr | None
    domain: Domain
    region: Domain
    provenance: list = field(default_factory=list)
    base_exact: bool = True


def _is_int(c: CostExpr) -> bool:
    return isinstance(c, Const) and not isinstance(c.value, float) and c.value.denominator == 1


def _combine(exprs_by_group: dict, approx: Approx) -> CostExpr:
    parts = []
    for _, xs in sorted(exprs_by_group.items()):
        if not xs:
            continue
        if approx is Approx.UB:
            parts.append(simplify(Sum(tuple(xs))) if len(xs) > 1 else simplify(xs[0]))
        else:
            parts.append(simplify(Min(tuple(xs))) if len(xs) > 1 else simplify(xs[0]))
    if not parts:
        return ZERO
    if len(parts) == 1:
        return parts[0]
    return simplify(Max(tuple(parts)) if approx is Approx.UB else Min(tuple(parts)))


def _self_calls(rel: CostRelation, e: CostExpr) -> list:
    out = []
    for r in reccalls(e):
        if r.relation != rel.name:
            raise UnsupportedRecurrence(f"call to another relation {r.relation} (mutual recursion)")
        out.append(r)
    return out


def _recursion_var(rel: CostRelation, rec_eqs) -> tuple[str, set]:
    var, deltas = None, set()
    for e in rec_eqs:
        for r in _self_calls(rel, e.rhs):
            dec = []
            for p, a in zip(rel.params, r.args):
                diff = simplify(SizeVar(p) - a)
                if diff == ZERO:
                    continue
                if _is_int(diff) and diff.value > 0:
                    dec.append((p, int(diff.value)))
                elif isinstance(diff, Const) and diff.value <= 0:
                    raise IllFoundedRecursion(f"argument {p} does not decrease")
                else:
                    raise UnsupportedRecurrence(f"argument {p} changes by {diff}")
            if not dec:
                raise IllFoundedRecursion("no argument decreases")
            if len(dec) > 1:
                raise UnsupportedRecurrence("several arguments decrease at once")
            p, d = dec[0]
            if var is not None and p != var:
                raise UnsupportedRecurrence("recursion on different arguments")
            var = p
            deltas.add(d)
    return var, deltas


def _satisfiable(*doms: Domain) -> bool:
    d = doms[0]
    for x in doms[1:]:
        d = d.conj(x)
    return d.satisfiable()


def prepare(rel: CostRelation) -> Prepared:
    dom = rel.domain()
    for e in rel.equations:
        _self_calls(rel, e.rhs)
    rec_eqs = [e for e in rel.equations if has_reccall(e.rhs)]
    if not rec_eqs:
        live = {}
        for e in rel.equations:
            if _satisfiable(dom, e.guard):
                live.setdefault(e.group, []).append(e.rhs)
        return Prepared(None, 0, set(), {}, _combine(live, rel.approx), dom, dom)
    var, deltas = _recursion_var(rel, rec_eqs)
    lows = []
    for e in rec_eqs:
        lb = dom.conj(e.guard).lower_bound(var)
        lows.append(0 if lb is None else -((-lb) // 1))
    theta = int(min(lows)) - 1
    if theta + 1 < max(deltas):
        raise IllFoundedRecursion(f"recursive case reaches {var} < 0")
    prov = []
    bases, exact = {}, True
    x = SizeVar(var)
    for t in range(0, theta + 1):
        at = Domain((ge(x, as_expr(t)), ge(as_expr(t), x)))
        live = {}
        for e in rel.equations:
            if e in rec_eqs:
                continue
            if _satisfiable(dom, e.guard, at):
                live.setdefault(e.group, []).append(simplify(substitute(e.rhs, {var: as_expr(t)})))
        if not live:
            prov.append(f"guard-gap({var}={t})")
        bases[t] = _combine(live, rel.approx)
    region = dom.add(ge(x, as_expr(theta + 1)))
    live = {}
    for e in rel.equations:
        if _satisfiable(region, e.guard):
            live.setdefault(e.group, []).append(e.rhs)
    rec_rhs = _combine(live, rel.approx)
    return Prepared(var, theta, deltas, bases, rec_rhs, dom, region, prov, exact)


# -- shapes -----------------------------------------------------------------

@dataclass
class _Partial:
    expr: CostExpr
    valid_from: int
    exact: bool
    rule: str
    # data for re-anchoring at the lowest base point
    increment: CostExpr | None = None
    kind: str = ""
    form: MaxRecForm | None = None


def _linear_terms(R: CostExpr, rel: CostRelation, var: str):
    """Split R into {delta: coefficient} self-call terms plus a remainder.
    Returns None when a call appears in any other position."""
    p = to_poly(simplify(R))
    if p is POLY_INF:
        return None
    terms: dict = {}
    rest: dict = {}
    for m, c in p.items():
        if not any(has_reccall(a) for a, _ in m):
            rest[m] = c
            continue
        if len(m) != 1 or m[0][1] != 1 or not isinstance(m[0][0], RecCall):
            return None
        r = m[0][0]
        delta = None
        for d in (1, 2, 3, 4, 5, 6, 7, 8):
            if is_self_call(r, rel.name, rel.params, var, d):
                delta = d
                break
        if delta is None:
            return None
        terms[delta] = terms.get(delta, Fraction(0)) + c
    return terms, from_poly(rest)


def _solve_shape(R: CostExpr, rel: CostRelation, prep: Prepared) -> _Partial | None:
    var, theta = prep.var, prep.theta
    x = SizeVar(var)
    ub = rel.approx is Approx.UB
    lin = _linear_terms(R, rel, var)
    if lin is None:
        parts = split_max_rhs(R, rel.name, rel.params, var)
        if parts is None:
            return None
        C, D = parts
        dep = classify(C, D, var, prep.region)
        B = prep.bases[theta]
        if dep is Dependence.INDEPENDENT:
            form = MaxRecForm(var, theta, B, C, D, dep, rel.params, rel.params.index(var))
            try:
                from .theorems import theorem1

                theorem1(form, prep.domain, rel.approx)
                # the closed form agrees with the recurrence from theta + 1 on
                return _Partial(theorem1_expr(form), theta + 1, True, "theorem1", D, "max", form)
            except PreconditionViolation:
                dep = Dependence.NONDECREASING
        if dep is Dependence.NONDECREASING:
            if ub:
                form = MaxRecForm(var, theta, B, C, D, Dependence.NONDECREASING, rel.params,
                                  rel.params.index(var))
                if (is_nondecreasing(C, var, prep.domain) is Mono.YES
                        and is_nondecreasing(D, var, prep.domain) is Mono.YES):
                    return _Partial(theorem2_expr(form), theta + 1, False, "theorem2", D, "max2", form)
                return None
            # max(C, f) >= f
            return _linear(D, rel, prep, "max-lower")
        return None
    terms, c = lin
    if terms == {1: Fraction(1)}:
        return _linear(c, rel, prep, "linear")
    if len(terms) == 1:
        (delta, a), = terms.items()
        if a == 1:
            return _stride(c, delta, rel, prep)
        if delta == 1 and a > 1 and var not in free_vars(c):
            B = prep.bases[theta]
            k = simplify(c * Const(1 / (a - 1)))
            from ..symexpr import Pow

            e = simplify(Pow(a, x - theta) * (B + k) - k)
            return _Partial(e, theta, True, "geometric")
        return None
    if terms == {1: Fraction(1), 2: Fraction(1)} and var not in free_vars(c) and theta >= 1:
        b1, b2 = prep.bases[theta - 1], prep.bases[theta]
        f0, f1 = fib_value(theta - 1), fib_value(theta)
        l0, l1 = lucas_value(theta - 1), lucas_value(theta)
        det = Fraction(f0 * l1 - f1 * l0)
        alpha = simplify(((b1 + c) * l1 - (b2 + c) * l0) * Const(1 / det))
        beta = simplify(((b2 + c) * f0 - (b1 + c) * f1) * Const(1 / det))
        e = simplify(alpha * Fib(x) + beta * Lucas(x) - c)
        return _Partial(e, theta - 1, True, "fibonacci")
    return None


def _linear(c: CostExpr, rel: CostRelation, prep: Prepared, rule: str) -> _Partial:
    var, theta = prep.var, prep.theta
    x = SizeVar(var)
    B = prep.bases[theta]
    s = range_sum(c, var, theta)
    if s is not None:
        return _Partial(simplify(B + s), theta, rule == "linear", f"{rule}-sum", c, "linear")
    if is_nondecreasing(c, var, prep.region) is not Mono.YES:
        return None
    if rel.approx is Approx.UB:
        e = simplify(B + (x - theta) * c)
    else:
        e = simplify(B + (x - theta) * substitute(c, {var: as_expr(theta + 1)}))
    return _Partial(e, theta, False, f"{rule}-monotone-sum", None, "")


def _stride(c: CostExpr, delta: int, rel: CostRelation, prep: Prepared) -> _Partial | None:
    var, theta = prep.var, prep.theta
    x = SizeVar(var)
    window = [prep.bases[t] for t in range(theta + 1 - delta, theta + 1)]
    ub = rel.approx is Approx.UB
    if var in free_vars(c):
        if not ub or is_nondecreasing(c, var, prep.region) is not Mono.YES:
            return None
    if ub:
        b = simplify(Max(tuple(window)))
        e = simplify(b + CeilDiv(x - theta, as_expr(delta)) * c)
    else:
        b = simplify(Min(tuple(window)))
        e = simplify(b + (x - theta - delta + 1) * Const(Fraction(1, delta)) * c)
    return _Partial(e, theta, False, f"stride-{delta}")


# -- driver -----------------------------------------------------------------

def _replace_minmax_with_calls(e: CostExpr, ub: bool, mode: str) -> CostExpr:
    """Drop max/min nodes around recurrence calls.

    ``mode == "sum"``: max -> sum of arguments (upper bounds).
    ``mode == "pick"``: keep the first argument mentioning a call (max for
    lower bounds, min for upper bounds)."""

    def step(node):
        if not isinstance(node, (Max, Min)) or not has_reccall(node):
            return None
        if isinstance(node, Max) and ub:
            return Sum(node.args)
        if (isinstance(node, Max) and not ub) or (isinstance(node, Min) and ub):
            calls = [a for a in node.args if has_reccall(a)]
            return calls[0]
        return None

    return simplify(transform(e, step))


def _zero_calls(e: CostExpr) -> CostExpr:
    return simplify(replace_reccalls(e, lambda r: ZERO))


def _finish(rel: CostRelation, prep: Prepared, part: _Partial, prov: list) -> tuple[CostExpr, bool]:
    """Make a partial solution valid below its starting point."""
    var = prep.var
    x = SizeVar(var)
    ub = rel.approx is Approx.UB
    dom = prep.domain
    F = part.expr
    exact = part.exact and prep.base_exact
    lower = [t for t in sorted(prep.bases) if t < part.valid_from]
    bad = []
    for t in lower:
        Ft = simplify(substitute(F, {var: as_expr(t)}))
        Bt = prep.bases[t]
        if Ft == Bt:
            continue
        exact = False
        ok = prove_leq(Bt, Ft, dom) if ub else prove_leq(Ft, Bt, dom)
        if not ok:
            bad.append(t)
    if not bad:
        return F, exact
    exact = False
    if ub and part.kind in ("linear", "max") and part.increment is not None:
        one = dom.add(ge(x, as_expr(1)))
        if prove_nonneg(part.increment, one):
            Bp = simplify(Max(tuple(prep.bases.values())))
            if part.kind == "linear":
                s = range_sum(part.increment, var, 0)
                if s is not None:
                    prov.append("re-anchor")
                    return simplify(Bp + s), False
            else:
                f = part.form
                prov.append("re-anchor")
                return simplify(Max((f.C, Bp)) + x * f.D), False
    if not ub and part.kind == "max" and part.form is not None:
        # min(x - theta, 1) is 0 at theta and 1 above it, which folds the
        # base case into the max
        f = part.form
        step = Min((x - f.theta, ONE))
        if prove_leq(f.B, f.C, dom):
            G = simplify(f.B + step * (f.C - f.B) + (x - f.theta) * f.D)
        else:
            G = simplify(f.C * step + (x - f.theta) * f.D)
        bad = [t for t in bad if t != f.theta and not prove_leq(
            simplify(substitute(G, {var: as_expr(t)})), prep.bases[t], dom)]
        prov.append("base-indicator")
        if not bad:
            return G, (part.exact and prep.base_exact and len(lower) == 1
                       and bool(prove_leq(f.B, f.C, dom)))
        F = G
    prov.append("base-fallback")
    extra = tuple(prep.bases[t] for t in bad)
    return simplify((Max if ub else Min)((F,) + extra)), False


def solve(rel: CostRelation, budget: int = 64) -> ClosedBound:
    dom = rel.domain()
    ub = rel.approx is Approx.UB
    prov: list = []
    try:
        prep = prepare(rel)
    except IllFoundedRecursion as exc:
        return ClosedBound.trivial(rel.approx, dom, rel.params, f"ill-founded: {exc}")
    except UnsupportedRecurrence as exc:
        if ub:
            return ClosedBound.trivial(rel.approx, dom, rel.params, f"unsupported: {exc}")
        return _lb_without_recursion(rel, dom, [f"unsupported: {exc}"])
    prov += prep.provenance
    if prep.var is None:
        e = prep.rec_rhs
        live = [q for q in rel.equations if _satisfiable(dom, q.guard)]
        exact = len(live) == 1 and all(dom.implies(c) for c in live[0].guard.constraints)
        prov.append("non-recursive")
        out = eliminate_max(e, dom, rel.approx, budget)
        exact = exact and out == simplify(e)
        return ClosedBound(out, dom, rel.approx, exact, tuple(prov), rel.params)

    R = simplify(prep.rec_rhs)
    resolved = resolve_max(R, prep.region, budget)
    used_mono = resolved != R and any(
        isinstance(n, (Max, Min)) and has_reccall(n) for n in _nodes(R))
    attempts = [(resolved, "resolve")]
    alt = _replace_minmax_with_calls(R, ub, "")
    if alt != resolved:
        attempts.append((alt, "max-to-sum" if ub else "max-pick-call"))
    for cand, how in attempts:
        part = _solve_shape(cand, rel, prep)
        if part is None:
            continue
        steps = list(prov)
        if how != "resolve":
            steps.append(how)
        steps.append(part.rule)
        F, exact = _finish(rel, prep, part, steps)
        if how != "resolve":
            exact = False
        if how == "resolve" and used_mono and ub and alt != resolved:
            if is_nondecreasing(F, prep.var, dom) is not Mono.YES:
                continue
            steps.append("monotone-call-comparison")
        out = eliminate_max(F, dom, rel.approx, budget)
        if out != F:
            exact = exact and False
            steps.append("eliminate-max")
        return ClosedBound(out, dom, rel.approx, exact, tuple(steps), rel.params)
    if ub:
        return ClosedBound.trivial(rel.approx, dom, rel.params, "unsupported: no matching shape")
    return _lb_without_recursion(rel, dom, prov + ["no matching shape"])


def _nodes(e: CostExpr):
    from ..symexpr.expr import walk

    return walk(e)


def _lb_without_recursion(rel: CostRelation, dom: Domain, prov: list) -> ClosedBound:
    """Lower bound that treats every recursive call as costing nothing."""
    live = {}
    for e in rel.equations:
        if _satisfiable(dom, e.guard):
            live.setdefault(e.group, []).append(_zero_calls(e.rhs))
    e = _combine(live, Approx.LB)
    out = eliminate_max(e, dom, Approx.LB)
    return ClosedBound(out, dom, Approx.LB, False, tuple(prov) + ("drop-recursion",), rel.params)


__all__ = [
    "solve", "prepare", "Prepared", "SolveError", "UnsupportedRecurrence",
    "IllFoundedRecursion",
]
