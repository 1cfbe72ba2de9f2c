"""Setting up cost relations for one predicate."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..frontend.ast import (
    Approx, Builtin, BuiltinKind, Call, Clause, Compound, IntConst, Atom,
    ParConj, PredId, Variable, term_vars,
)
from ..frontend.validate import ValidatedProgram
from ..ir import AnalysisOrder, CallGraph
from ..sizes import UNKNOWN, clause_guard_info, infer_size_rels
from ..symexpr import (
    INFINITY, ONE, ZERO, CostExpr, Domain, RecCall,
    free_vars, is_nondecreasing, simplify, substitute,
)
from ..symexpr.compare import Mono
from .resources import MAX, ResourceDef
from .types import (
    PAR_INF, SEQ, CostRelation, Equation, ExecModel, SizeUnknownAtRecCall,
    UnsupportedMutualRecursion, relation_name,
)


# -- mutual exclusion -------------------------------------------------------

def _clash(a, b) -> bool:
    """Two head patterns can never unify with the same ground term."""
    if isinstance(a, Variable) or isinstance(b, Variable):
        return False
    if isinstance(a, IntConst) or isinstance(b, IntConst):
        return a != b
    if isinstance(a, Atom) or isinstance(b, Atom):
        return a != b
    if a.functor != b.functor or len(a.args) != len(b.args):
        return True
    return any(_clash(x, y) for x, y in zip(a.args, b.args))


def _var_paths(t, path=(), acc=None) -> dict:
    acc = {} if acc is None else acc
    if isinstance(t, Variable):
        if t.name != "_" and t.name not in acc:
            acc[t.name] = path
    elif isinstance(t, Compound):
        for i, a in enumerate(t.args):
            _var_paths(a, path + (i,), acc)
    return acc


_CANON = {
    BuiltinKind.GT: (BuiltinKind.LT, True),
    BuiltinKind.LE: (BuiltinKind.GE, True),
    BuiltinKind.LT: (BuiltinKind.LT, False),
    BuiltinKind.GE: (BuiltinKind.GE, False),
    BuiltinKind.EQ: (BuiltinKind.EQ, False),
    BuiltinKind.NEQ: (BuiltinKind.NEQ, False),
}
_NEG = {BuiltinKind.LT: BuiltinKind.GE, BuiltinKind.GE: BuiltinKind.LT,
        BuiltinKind.EQ: BuiltinKind.NEQ, BuiltinKind.NEQ: BuiltinKind.EQ}


def _path_term(t, paths: dict):
    if isinstance(t, Variable):
        if t.name not in paths:
            return None
        return ("path", paths[t.name])
    if isinstance(t, Compound):
        args = [_path_term(a, paths) for a in t.args]
        if any(a is None for a in args):
            return None
        return (t.functor,) + tuple(args)
    if isinstance(t, IntConst):
        return ("int", t.value)
    return ("atom", t.name)


def _leading_tests(c: Clause, in_pos: list) -> set:
    paths = {}
    for i in in_pos:
        for v, p in _var_paths(c.head_args[i], (i,)).items():
            paths.setdefault(v, p)
    out = set()
    for g in c.body:
        if not isinstance(g, Builtin) or g.kind not in _CANON:
            break
        kind, swap = _CANON[g.kind]
        a, b = (_path_term(x, paths) for x in g.args)
        if a is None or b is None:
            continue
        if swap:
            a, b = b, a
        if kind in (BuiltinKind.EQ, BuiltinKind.NEQ):
            a, b = sorted((a, b), key=repr)
        out.add((kind, a, b))
    return out


def _complementary(t1: set, t2: set) -> bool:
    for kind, a, b in t1:
        neg = _NEG[kind]
        if neg in (BuiltinKind.EQ, BuiltinKind.NEQ):
            a, b = sorted((a, b), key=repr)
        if (neg, a, b) in t2:
            return True
    return False


def exclusive(c1: Clause, c2: Clause, vp: ValidatedProgram) -> bool:
    pred = c1.pred
    in_pos = vp.in_positions(pred)
    if any(_clash(c1.head_args[i], c2.head_args[i]) for i in in_pos):
        return True
    g1, _ = clause_guard_info(c1, vp)
    g2, _ = clause_guard_info(c2, vp)
    dom = Domain.nonneg(vp.param_names(pred))
    if not dom.conj(g1).conj(g2).satisfiable():
        return True
    return _complementary(_leading_tests(c1, in_pos), _leading_tests(c2, in_pos))


def mutex_groups(pred: PredId, vp: ValidatedProgram) -> list[int]:
    """Group id per clause: connected components of the may-overlap graph."""
    clauses = vp.predicates[pred]
    n = len(clauses)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if not exclusive(clauses[i], clauses[j], vp):
                a, b = find(i), find(j)
                parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(n)]


# -- failure analysis for lower bounds --------------------------------------

def _covers(intervals: list) -> bool:
    """Union of integer intervals [lo, hi] (hi None = unbounded) covers [0, inf)."""
    need = 0
    for lo, hi in sorted(intervals, key=lambda x: x[0]):
        if lo > need:
            return False
        if hi is None:
            return True
        need = max(need, hi + 1)
    return False


class FailureInfo:
    """Which predicates may fail for some well-sized input."""

    def __init__(self, vp: ValidatedProgram, order: AnalysisOrder, trusted: set):
        self.vp = vp
        self.trusted = trusted
        self.fails: dict = {}
        for scc in order.sccs:
            for p in sorted(scc):
                self.fails[p] = False  # optimistic for self-calls
            for p in sorted(scc):
                self.fails[p] = self._pred_may_fail(p)

    def literal_may_fail(self, g, absorbed: bool, bound: set) -> bool:
        if isinstance(g, ParConj):
            return any(self.literal_may_fail(x, False, bound) for x in g.left + g.right)
        if isinstance(g, Builtin):
            if g.kind is BuiltinKind.IS:
                return False
            if g.kind is BuiltinKind.UNIFY:
                a, b = g.args
                fresh = [x for x in (a, b) if isinstance(x, Variable) and x.name not in bound]
                return not fresh
            return not absorbed
        if g.pred in self.trusted and g.pred not in self.vp.predicates:
            return False
        return self.fails.get(g.pred, True)

    def clause_may_fail(self, c: Clause) -> bool:
        _, absorbed = clause_guard_info(c, self.vp)
        bound = set(v for a in c.head_args for v in term_vars(a))
        for i, g in enumerate(c.body):
            if self.literal_may_fail(g, i in absorbed, bound):
                return True
            for x in ([g] if not isinstance(g, ParConj) else g.left + g.right):
                bound |= set(v for a in getattr(x, "args", ()) for v in term_vars(a))
        return False

    def _pred_may_fail(self, pred: PredId) -> bool:
        vp = self.vp
        params = vp.params.get(pred, ())
        in_pos = vp.in_positions(pred)
        sized = {p.arg for p in params}
        intervals = []
        for c in vp.predicates[pred]:
            if self.clause_may_fail(c):
                continue
            # patterns on unmeasured inputs are not reflected in the guard
            if any(not isinstance(c.head_args[i], Variable) and i not in sized for i in in_pos):
                continue
            head_vars = [v for i in in_pos for v in term_vars(c.head_args[i]) if v != "_"]
            if len(head_vars) != len(set(head_vars)):
                continue
            guard, _ = clause_guard_info(c, vp)
            names = guard.vars()
            if not names:
                return False
            if len(names) > 1:
                continue
            (n,) = names
            lo, hi = guard.lower_bound(n), guard.upper_bound(n)
            lo = 0 if lo is None else int(-((-lo) // 1))
            hi = None if hi is None else int(hi // 1)
            intervals.append((n, lo, hi))
        by_var: dict = {}
        for n, lo, hi in intervals:
            by_var.setdefault(n, []).append((lo, hi))
        return not any(_covers(iv) for iv in by_var.values())


# -- relation setup ---------------------------------------------------------

@dataclass
class Env:
    """Everything relation setup needs to know about already-solved
    predicates."""

    vp: ValidatedProgram
    graph: CallGraph
    order: AnalysisOrder
    trusted_costs: dict = field(default_factory=dict)   # (pred, resource, approx) -> CostExpr
    trusted_sols: dict = field(default_factory=dict)    # pred -> CostExpr
    sols: dict = field(default_factory=dict)            # pred -> ClosedBound (ub)
    bounds: dict = field(default_factory=dict)          # (pred, res, approx, model) -> ClosedBound
    failure: FailureInfo | None = None

    def scc(self, pred: PredId) -> frozenset:
        return self.order.scc_of(pred)


def instantiate(expr: CostExpr, params: tuple, sizes: tuple, approx: Approx) -> CostExpr:
    """A callee's bound at the caller's argument sizes."""
    mapping = {}
    ub = approx is Approx.UB
    for p, s in zip(params, sizes):
        if p not in free_vars(expr):
            continue
        mono = is_nondecreasing(expr, p) is Mono.YES
        if ub:
            if s.hi is None or (not s.is_exact and not mono):
                return INFINITY
            mapping[p] = s.hi
        else:
            if s.is_exact:
                mapping[p] = s.lo
            elif not mono:
                return ZERO
            else:
                mapping[p] = s.lo if s.lo is not None else ZERO
    return simplify(substitute(expr, mapping))


class RelationBuilder:
    """Builds the guarded equations of one (pred, resource, approx, model).

    ``par_model`` selects how a parallel conjunction aggregates: "par" uses
    the resource's parallel aggregator, "seq" its sequential one.
    ``callee_model`` is the model whose closed bounds are used for
    lower-SCC calls.  ``zero_tasks`` drops task-only branches of parallel
    conjunctions (used for the spine of the bounded-processor bound)."""

    def __init__(self, env: Env, resource: ResourceDef, approx: Approx, model: ExecModel,
                 par_model: str | None = None, callee_model: ExecModel | None = None,
                 zero_tasks: bool = False, name: str | None = None):
        self.env = env
        self.r = resource
        self.approx = approx
        self.model = model
        self.par_model = par_model or ("seq" if model.kind == "seq" else "par")
        self.callee_model = callee_model or model
        self.zero_tasks = zero_tasks
        self.name_override = name
        self.notes: list = []

    # literal costs

    def _callee_bound(self, q: PredId):
        return self.env.bounds.get((q, self.r.name, self.approx, self.callee_model.render()))

    def _trusted(self, q: PredId):
        return self.env.trusted_costs.get((q, self.r.name, self.approx))

    def _sizes(self, rel, q: PredId):
        return rel.input_sizes if rel is not None else tuple(UNKNOWN for _ in self.env.vp.params.get(q, ()))

    def call_cost(self, g: Call, rel, pred: PredId, relname: str) -> CostExpr:
        q = g.pred
        env = self.env
        sizes = self._sizes(rel, q)
        ub = self.approx is Approx.UB
        if q in env.vp.predicates and q in env.scc(pred):
            if q != pred:
                raise UnsupportedMutualRecursion(f"{pred} and {q} are mutually recursive")
            args = []
            for s in sizes:
                if ub:
                    if s.hi is None:
                        raise SizeUnknownAtRecCall(f"input size of recursive call to {q} is unknown")
                    args.append(s.hi)
                else:
                    args.append(s.lo if s.lo is not None else ZERO)
            return RecCall(relname, tuple(args))
        params = tuple(env.vp.param_names(q))
        t = self._trusted(q)
        if t is not None and q not in env.vp.predicates:
            return instantiate(t, params, sizes, self.approx)
        b = self._callee_bound(q)
        if b is None:
            if t is not None:
                return instantiate(t, params, sizes, self.approx)
            self.notes.append(f"no bound for {q}")
            return INFINITY if ub else ZERO
        return instantiate(b.expr, b.params or params, sizes, self.approx)

    def call_sols(self, g: Call, rel) -> CostExpr:
        if self.approx is not Approx.UB:
            return ONE
        q = g.pred
        env = self.env
        params = tuple(env.vp.param_names(q))
        sizes = self._sizes(rel, q)
        if q in env.trusted_sols:
            return instantiate(env.trusted_sols[q], params, sizes, Approx.UB)
        b = env.sols.get(q)
        if b is None:
            return INFINITY
        return instantiate(b.expr, b.params or params, sizes, Approx.UB)

    def goal_sols(self, g, rels: dict, idx: list) -> CostExpr:
        if isinstance(g, Builtin):
            idx[0] += 1
            return ONE
        if isinstance(g, Call):
            rel = rels.get(idx[0])
            idx[0] += 1
            return self.call_sols(g, rel)
        out = ONE
        for x in g.left + g.right:
            out = simplify(out * self.goal_sols(x, rels, idx))
        return out

    def _is_task_branch(self, goals, pred: PredId) -> bool:
        scc = self.env.scc(pred)
        from ..frontend.ast import flat_literals

        return not any(isinstance(x, Call) and x.pred in scc for x in flat_literals(goals))

    def body_cost(self, goals, rels: dict, idx: list, pred: PredId, relname: str,
                  stop: set | None = None) -> tuple[CostExpr, CostExpr, bool]:
        """(cost, solutions, stopped) of a goal sequence."""
        acc: CostExpr | None = None
        sols = ONE
        for g in goals:
            start = idx[0]
            c = self.goal_cost(g, rels, idx, pred, relname, stop)
            idx[0] = start
            s = self.goal_sols(g, rels, idx)
            term = simplify(sols * c) if sols != ONE else c
            acc = term if acc is None else self.r.seq_agg.apply(acc, term)
            sols = simplify(sols * s)
            if stop is not None and id(g) in stop:
                return (acc, sols, True)
        return (acc if acc is not None else ZERO, sols, False)

    def goal_cost(self, g, rels: dict, idx: list, pred: PredId, relname: str,
                  stop: set | None) -> CostExpr:
        if isinstance(g, Builtin):
            idx[0] += 1
            return self.r.builtin_cost(g.kind)
        if isinstance(g, Call):
            rel = rels.get(idx[0])
            idx[0] += 1
            return self.call_cost(g, rel, pred, relname)
        start = idx[0]
        left, _, _ = self.body_cost(g.left, rels, idx, pred, relname)
        right, _, _ = self.body_cost(g.right, rels, idx, pred, relname)
        if self.zero_tasks:
            if self._is_task_branch(g.left, pred) and not self._is_task_branch(g.right, pred):
                left = ZERO
            elif self._is_task_branch(g.right, pred) and not self._is_task_branch(g.left, pred):
                right = ZERO
        agg = self.r.par_agg if self.par_model == "par" else self.r.seq_agg
        del start
        return agg.apply(left, right)

    def clause_cost(self, c: Clause, pred: PredId, relname: str) -> CostExpr:
        rels = {r.literal_index: r for r in infer_size_rels(c, self.env.vp)}
        stop = None
        if self.approx is Approx.LB and self.env.failure is not None:
            _, absorbed = clause_guard_info(c, self.env.vp)
            bound = set(v for a in c.head_args for v in term_vars(a))
            for i, g in enumerate(c.body):
                if self.env.failure.literal_may_fail(g, i in absorbed, bound):
                    stop = {id(g)}
                    break
                for x in ([g] if not isinstance(g, ParConj) else g.left + g.right):
                    bound |= set(v for a in getattr(x, "args", ()) for v in term_vars(a))
        body, _, _ = self.body_cost(c.body, rels, [0], pred, relname, stop)
        head = self.r.head_cost(pred)
        if not c.body:
            return simplify(head)
        return simplify(self.r.seq_agg.apply(head, body))

    def build(self, pred: PredId) -> CostRelation:
        vp = self.env.vp
        relname = self.name_override or relation_name(pred, self.r.name, self.approx, self.model)
        params = tuple(vp.param_names(pred))
        clauses = vp.predicates[pred]
        if self.r.clause_agg == "mutex_max":
            groups = mutex_groups(pred, vp)
        else:
            groups = [0] * len(clauses)
        eqs = []
        for i, c in enumerate(clauses):
            guard, _ = clause_guard_info(c, vp)
            eqs.append(Equation(guard, self.clause_cost(c, pred, relname), groups[i], i))
        return CostRelation(relname, pred, self.r.name, self.approx, self.model, params, eqs)


def setup_cost_relation(pred: PredId, resource: ResourceDef, approx: Approx, model: ExecModel,
                        env: Env) -> CostRelation:
    """Relation for seq or par-inf; a bounded model reuses par-inf."""
    if model.kind == "par":
        model = PAR_INF
    return RelationBuilder(env, resource, approx, model).build(pred)


def setup_sols_relation(pred: PredId, env: Env) -> CostRelation:
    """Upper bound on the number of solutions: product over the body,
    sum within a group of overlapping clauses, max across groups."""
    vp = env.vp
    relname = f"{pred.name}_{pred.arity}_sols"
    params = tuple(vp.param_names(pred))
    groups = mutex_groups(pred, vp)
    b = RelationBuilder(env, _SOLS_RESOURCE, Approx.UB, SEQ)
    eqs = []
    for i, c in enumerate(vp.predicates[pred]):
        rels = {r.literal_index: r for r in infer_size_rels(c, vp)}
        idx = [0]
        s = ONE
        for g in c.body:
            s = simplify(s * _sols_goal(b, g, rels, idx, pred, relname))
        guard, _ = clause_guard_info(c, vp)
        eqs.append(Equation(guard, s, groups[i], i))
    return CostRelation(relname, pred, "sols", Approx.UB, SEQ, params, eqs)


def _sols_goal(b: RelationBuilder, g, rels, idx, pred, relname) -> CostExpr:
    env = b.env
    if isinstance(g, Builtin):
        idx[0] += 1
        return ONE
    if isinstance(g, Call):
        rel = rels.get(idx[0])
        idx[0] += 1
        if g.pred in env.vp.predicates and g.pred in env.scc(pred):
            if g.pred != pred:
                raise UnsupportedMutualRecursion(f"{pred} and {g.pred} are mutually recursive")
            args = []
            for s in rel.input_sizes:
                if s.hi is None:
                    raise SizeUnknownAtRecCall("unknown size at recursive call")
                args.append(s.hi)
            return RecCall(relname, tuple(args))
        return b.call_sols(g, rel)
    out = ONE
    for x in g.left + g.right:
        out = simplify(out * _sols_goal(b, x, rels, idx, pred, relname))
    return out


_SOLS_RESOURCE = ResourceDef("sols", ONE, "mutex_max")


def spine_resource(r: ResourceDef) -> ResourceDef:
    return replace(r, par_agg=MAX)


__all__ = [
    "Env", "FailureInfo", "RelationBuilder", "exclusive", "instantiate",
    "mutex_groups", "setup_cost_relation", "setup_sols_relation",
    "spine_resource",
]
