"""Validate inferred bounds against the reference executor."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .analysis import Analyzer
from .costrel import PAR_INF, SEQ, ExecModel, ResourceDef, is_time_resource
from .costrel.resources import STEPS_PAR, STEPS_SEQ, PTASKS, STHREADS
from .frontend.ast import Approx, Compound, flat_literals
from .oracle import (
    ClauseNode, Failure, ParNode, SeqNode, Timeout, fold_resource, input_points,
    measure, resource_makespan, run,
)
from .oracle.interp import ArithError
from .sizes import head_sizes, infer_size_rels
from .symexpr import evaluate


@dataclass
class Violation:
    pred: str
    sizes: dict
    what: str
    measured: object
    bound: object

    def render(self) -> str:
        sz = ", ".join(f"{k}={v}" for k, v in self.sizes.items())
        return f"{self.pred} [{sz}] {self.what}: measured {self.measured}, bound {self.bound}"


@dataclass
class CheckReport:
    points: int = 0
    comparisons: int = 0
    violations: list = field(default_factory=list)
    timeouts: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    trees: int = 0
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "CheckReport"):
        self.points += other.points
        self.comparisons += other.comparisons
        self.violations += other.violations
        self.timeouts += other.timeouts
        self.failures += other.failures
        self.trees += other.trees
        self.seconds += other.seconds


def _flat_nodes(children) -> list:
    out = []
    for c in children:
        if isinstance(c, ParNode):
            out += _flat_nodes(c.left.children) + _flat_nodes(c.right.children)
        elif isinstance(c, SeqNode):
            out += _flat_nodes(c.children)
        else:
            out.append(c)
    return out


def size_rel_violations(tree, vp) -> list[str]:
    """Compare every inferred size relation with the sizes seen at run time.
    The tree must have been built with recorded arguments."""
    bad = []
    rel_cache: dict = {}
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, (SeqNode,)):
            stack.extend(node.children)
            continue
        if isinstance(node, ParNode):
            stack += [node.left, node.right]
            continue
        if not isinstance(node, ClauseNode):
            continue
        stack.extend(node.children)
        clause = vp.predicates[node.pred][node.clause_index]
        key = (node.pred, node.clause_index)
        if key not in rel_cache:
            rel_cache[key] = infer_size_rels(clause, vp)
        hs = head_sizes(node.pred, node.args, vp)
        if hs is None:
            continue
        flat = _flat_nodes(node.children)
        lits = flat_literals(clause.body)
        assert len(flat) == len(lits)
        for rel in rel_cache[key]:
            callee = flat[rel.literal_index]
            actual = head_sizes(callee.pred, callee.args, vp)
            if actual is None:
                continue
            for p, sb in zip(vp.params.get(callee.pred, ()), rel.input_sizes):
                v = actual[p.name]
                lo = evaluate(sb.lo, hs) if sb.lo is not None else -math.inf
                hi = evaluate(sb.hi, hs) if sb.hi is not None else math.inf
                if not lo <= v <= hi:
                    bad.append(f"{node.pred} clause {node.clause_index + 1} "
                               f"#{rel.literal_index} {p.name}: {v} not in [{lo}, {hi}]")
    return bad


def _unit_steps(r: ResourceDef) -> bool:
    return (not r.head_costs and not r.builtin_costs and evaluate(r.head_default, {}) == 1
            and evaluate(r.builtin_default, {}) == 0)


_METRIC = {STEPS_SEQ.name: "work", STEPS_PAR.name: "depth",
           STHREADS.name: "max_procs", PTASKS.name: "tasks_spawned"}


def check_program(an: Analyzer, max_size: int = 8, procs=(1, 2, 4), resources=None,
                  all_solutions: bool = True, fuel: int = 10 ** 7, seed: int = 0,
                  check_sizes: bool = True, trees_out: list | None = None) -> CheckReport:
    vp = an.vp
    rep = CheckReport()
    t0 = time.perf_counter()
    rdefs = [an.resources[r] for r in (resources or [r.name for r in
             (STEPS_SEQ, STEPS_PAR, STHREADS, PTASKS)])]
    models = [SEQ, PAR_INF] + ([ExecModel("par", "p")] if procs else [])
    for gen in vp.program.check_gens():
        pred = gen.pred
        bounds = {(r.name, ap, m.render()): an.bound(pred, r, ap, m)
                  for r in rdefs for ap in Approx for m in models}
        for pt in input_points(gen, max_size, seed):
            rep.points += 1
            try:
                res = run(vp.program, pt.goal, fuel, all_solutions=True, record_args=check_sizes)
            except Timeout as exc:
                rep.timeouts.append((str(pred), pt.sizes, str(exc)))
                continue
            except (Failure, ArithError) as exc:
                rep.failures.append((str(pred), pt.sizes, str(exc)))
                continue
            first = res.tree.children[0]
            ub_tree = res.tree if all_solutions else first
            rep.trees += 1
            if trees_out is not None:
                trees_out.append(first)
            args = pt.goal.args if isinstance(pt.goal, Compound) else ()
            sizes = head_sizes(pred, args, vp)
            if sizes is None:
                rep.failures.append((str(pred), pt.sizes, "input sizes undefined"))
                continue

            def viol(what, m, b):
                rep.violations.append(Violation(str(pred), sizes, what, m, b))

            m_first = measure(first, procs)
            m_ub = measure(ub_tree, procs) if ub_tree is not first else m_first
            for mm in {id(m_first): m_first, id(m_ub): m_ub}.values():
                for msg in mm.check_invariants():
                    viol("schedule invariant " + msg, None, None)
            for t, mm in ((first, m_first), (ub_tree, m_ub)):
                for r in (STEPS_SEQ, STEPS_PAR, STHREADS, PTASKS):
                    got = fold_resource(t, r)
                    want = getattr(mm, _METRIC[r.name])
                    rep.comparisons += 1
                    if got != want:
                        viol(f"fold {r.name} vs metric", got, want)
                if t is ub_tree:
                    break
            spans: dict = {}
            if check_sizes:
                for msg in size_rel_violations(first, vp):
                    viol("size relation " + msg, None, None)

            for r in rdefs:
                for m in models:
                    ns = procs if m.kind == "par" else (None,)
                    for n in ns:
                        env = dict(sizes)
                        tag = m.render() if n is None else f"par:{n}"
                        if n is not None:
                            env["p"] = n
                        for ap in Approx:
                            t, mm = (ub_tree, m_ub) if ap is Approx.UB else (first, m_first)
                            got = None
                            if n is not None and is_time_resource(r):
                                if _unit_steps(r):
                                    got = mm.makespan[n]
                                else:
                                    key = (id(t), r.name)
                                    if key not in spans:
                                        spans[key] = resource_makespan(t, r, procs)
                                    if spans[key] is not None:
                                        got = spans[key][n]
                            if got is None:
                                got = fold_resource(t, r, seq_par=(m.kind == "seq"))
                            b = bounds[(r.name, ap, m.render())]
                            val = evaluate(b.expr, env)
                            rep.comparisons += 1
                            ok = got <= val if ap is Approx.UB else val <= got
                            if not ok:
                                viol(f"{r.name} {ap.value} {tag}", got, val)
    rep.seconds = time.perf_counter() - t0
    return rep


__all__ = ["CheckReport", "Violation", "check_program", "size_rel_violations"]
