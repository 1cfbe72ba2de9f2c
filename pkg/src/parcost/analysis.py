"""The analysis pipeline: program text to closed bounds."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .costrel import (
    PAR_INF, PTASKS, SEQ, CostRelError, Env, ExecModel, FailureInfo,
    RelationBuilder, ResourceDef, spine_resource, bounded_processor_bound, builtin_resources,
    is_time_resource, setup_cost_relation, setup_solutions,
)
from .costrel.types import NotParallelRecursive
from .frontend import Approx, PredId, ValidatedProgram, parse_program, validate_or_raise
from .ir import analysis_order, build_call_graph
from .recsolve import ClosedBound, resolve_max, solve
from .symexpr import ONE, ZERO, CeilDiv, Const, CostExpr, Domain, Max, SizeVar, ge, prove_leq, simplify


@dataclass
class Result:
    pred: PredId
    resource: str
    approx: Approx
    model: ExecModel
    bound: ClosedBound
    ms: float = 0.0
    error: str | None = None

    @property
    def solved(self) -> bool:
        return self.error is None and not (self.approx is Approx.UB and self.bound.is_infinite)

    def to_json(self) -> dict:
        return {
            "pred": self.pred.name,
            "arity": self.pred.arity,
            "resource": self.resource,
            "approx": self.approx.value,
            "model": self.model.render(),
            "bound": self.bound.text,
            "domain": self.bound.domain.render(),
            "big_o": self.bound.big_o_text(),
            "exact": self.bound.exact,
            "provenance": list(self.bound.provenance),
            "ms": round(self.ms, 3),
        }


@dataclass
class Analyzer:
    vp: ValidatedProgram
    resources: dict = field(default_factory=dict)
    spaw: CostExpr = ZERO
    sched: CostExpr = ZERO
    trace: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        if not self.resources:
            self.resources = {r.name: r for r in builtin_resources()}
        for r in self.vp.program.resource_decls():
            self.resources[r.name] = r
        prog = self.vp.program
        self.graph = build_call_graph(self.vp)
        self.order = analysis_order(self.graph)
        trusted = {(d.pred, d.resource, d.approx): d.cost for d in prog.trusted_costs()}
        tsols = {p: d.bound for p, d in prog.trusted_solutions().items()}
        self.env = Env(self.vp, self.graph, self.order, trusted, tsols)
        tpreds = {d.pred for d in prog.trusted_costs()}
        self.env.failure = FailureInfo(self.vp, self.order, tpreds)
        _, problems = setup_solutions(self.env)
        for pred, kind, msg in problems:
            self.diagnostics.append({"kind": kind, "message": msg, "pred": str(pred)})
        self._done: set = set()
        self.timings: dict = {}

    # ------------------------------------------------------------------

    def _key(self, pred, r, approx, model):
        return (pred, r.name, approx, model.render())

    def _store(self, pred, r, approx, model, b: ClosedBound, ms: float):
        self.env.bounds[self._key(pred, r, approx, model)] = b
        self.timings[self._key(pred, r, approx, model)] = ms

    def _solve_one(self, pred, r: ResourceDef, approx: Approx, model: ExecModel) -> ClosedBound:
        params = tuple(self.vp.param_names(pred))
        dom = Domain.nonneg(params)
        if model.kind == "par":
            return self._bounded(pred, r, approx, model)
        try:
            rel = setup_cost_relation(pred, r, approx, model, self.env)
        except CostRelError as exc:
            self.diagnostics.append({"kind": exc.kind, "message": str(exc), "pred": str(pred)})
            return ClosedBound.trivial(approx, dom, params, exc.kind)
        b = solve(rel)
        self.trace.append((pred, r.name, approx, model, rel, b))
        return b

    def _bounded(self, pred, r: ResourceDef, approx: Approx, model: ExecModel) -> ClosedBound:
        if approx is Approx.LB and is_time_resource(r):
            return self._bounded_lb(pred, r, model)
        if approx is Approx.LB or not is_time_resource(r):
            inf = self.bound(pred, r, approx, PAR_INF)
            return ClosedBound(inf.expr, inf.domain, approx, inf.exact,
                               inf.provenance + ("unbounded-model",), inf.params)
        try:
            return bounded_processor_bound(pred, r, self.env, model, self.spaw, self.sched)
        except CostRelError as exc:
            note = exc.kind
        # sequential composition with callee bounds under the same model
        params = tuple(self.vp.param_names(pred))
        try:
            rel = RelationBuilder(self.env, r, Approx.UB, model, par_model="seq",
                                  callee_model=model).build(pred)
        except CostRelError as exc:
            self.diagnostics.append({"kind": exc.kind, "message": str(exc), "pred": str(pred)})
            return ClosedBound.trivial(approx, Domain.nonneg(params), params, exc.kind)
        b = solve(rel)
        self.trace.append((pred, r.name, approx, model, rel, b))
        if isinstance(note, str) and note == NotParallelRecursive.kind:
            prov = b.provenance + ("sequential-composition",)
        else:
            prov = b.provenance + (note, "sequential-composition")
        return ClosedBound(b.expr, b.domain, b.approx, False, prov, b.params)

    def _bounded_lb(self, pred, r: ResourceDef, model: ExecModel) -> ClosedBound:
        # n processors never beat the critical path nor the work split evenly
        depth_r = replace(spine_resource(r), name=f"{r.name}@depth")
        depth = self.bound(pred, depth_r, Approx.LB, PAR_INF)
        work = self.bound(pred, r, Approx.LB, SEQ)
        procs = Const(Fraction(model.procs)) if isinstance(model.procs, int) else SizeVar(model.procs)
        dom = depth.domain
        if not isinstance(model.procs, int):
            dom = dom.add(ge(procs, ONE))
        if prove_leq(work.expr, depth.expr, dom):
            expr = depth.expr
        else:
            expr = resolve_max(simplify(Max((depth.expr, CeilDiv(work.expr, procs)))), dom)
        prov = ("bounded-processors-lb",) + depth.provenance
        return ClosedBound(expr, dom, Approx.LB, False, prov, depth.params)

    def compute_all(self, r: ResourceDef, approx: Approx, model: ExecModel):
        tag = (r.name, approx, model.render())
        if tag in self._done:
            return
        if model.kind == "par" and approx is Approx.UB and is_time_resource(r):
            self.compute_all(r, Approx.UB, SEQ)
            self.compute_all(PTASKS if "ptasks" not in self.resources else self.resources["ptasks"],
                             Approx.UB, PAR_INF)
        if model.kind == "par":
            self.compute_all(r, approx, PAR_INF)
        for scc in self.order.sccs:
            for pred in sorted(scc):
                if pred not in self.vp.predicates:
                    continue
                t0 = time.perf_counter()
                b = self._solve_one(pred, r, approx, model)
                self._store(pred, r, approx, model, b, (time.perf_counter() - t0) * 1000)
        self._done.add(tag)

    def bound(self, pred: PredId, r: ResourceDef | str, approx: Approx, model: ExecModel) -> ClosedBound:
        if isinstance(r, str):
            r = self.resources[r]
        self.compute_all(r, approx, model)
        return self.env.bounds[self._key(pred, r, approx, model)]

    def result(self, pred, r, approx, model) -> Result:
        if isinstance(r, str):
            r = self.resources[r]
        b = self.bound(pred, r, approx, model)
        ms = self.timings.get(self._key(pred, r, approx, model), 0.0)
        err = None
        if approx is Approx.UB and b.is_infinite:
            err = "unsolved"
        return Result(pred, r.name, approx, model, b, ms, err)


def analyze_source(source: str, name: str = "<input>", **kw) -> Analyzer:
    vp = validate_or_raise(parse_program(source, name))
    return Analyzer(vp, **kw)


def analyze_file(path, **kw) -> Analyzer:
    from pathlib import Path

    p = Path(path)
    return analyze_source(p.read_text(), str(p), **kw)


__all__ = ["Analyzer", "Result", "analyze_source", "analyze_file"]
