"""Static checks that turn a parsed Program into a ValidatedProgram."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    Builtin, BuiltinKind, Call, Clause, Compound, IntConst, Measure, Metric,
    ModeKind, ParConj, PredId, Program, SourceLoc, Term, Variable, term_vars,
)


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    loc: SourceLoc | None = None
    pred: PredId | None = None

    def __str__(self):
        where = f"{self.loc}: " if self.loc else ""
        return f"{where}{self.kind}: {self.message}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "message": self.message,
            "loc": str(self.loc) if self.loc else None,
            "pred": str(self.pred) if self.pred else None,
        }


@dataclass(frozen=True)
class SizeParam:
    arg: int
    metric: Metric
    name: str


@dataclass
class ValidatedProgram:
    program: Program
    modes: dict = field(default_factory=dict)     # PredId -> tuple[ModeKind]
    measures: dict = field(default_factory=dict)  # PredId -> tuple[tuple[MetricSpec]]
    params: dict = field(default_factory=dict)    # PredId -> tuple[SizeParam]

    @property
    def predicates(self) -> dict:
        return self.program.predicates

    def defined(self, pred: PredId) -> bool:
        return pred in self.program.predicates

    def in_positions(self, pred: PredId) -> list[int]:
        return [i for i, m in enumerate(self.modes.get(pred, ())) if m is ModeKind.IN]

    def param_names(self, pred: PredId) -> list[str]:
        return [p.name for p in self.params.get(pred, ())]


class ValidationFailed(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


def _size_params(pred: PredId, measure: Measure, modes) -> tuple:
    out = []
    used = set()
    for i, specs in enumerate(measure.metrics):
        if modes[i] is not ModeKind.IN:
            continue
        for spec in specs:
            name = spec.name or f"x{i + 1}"
            if name in used:
                name = f"{name}_{spec.metric.value}"
            used.add(name)
            out.append(SizeParam(i, spec.metric, name))
    return tuple(out)


_LINEAR_OPS = {"+", "-"}


def is_linear(t: Term) -> bool:
    if isinstance(t, (IntConst, Variable)):
        return True
    if isinstance(t, Compound):
        if t.functor in _LINEAR_OPS and len(t.args) == 2:
            return is_linear(t.args[0]) and is_linear(t.args[1])
        if t.functor == "-" and len(t.args) == 1:
            return is_linear(t.args[0])
        if t.functor == "*" and len(t.args) == 2:
            a, b = t.args
            if not term_vars(a):
                return is_linear(b)
            if not term_vars(b):
                return is_linear(a)
    return False


class _ClauseChecker:
    def __init__(self, vp: ValidatedProgram, trusted: set, clause: Clause, diags: list):
        self.vp, self.trusted, self.clause, self.diags = vp, trusted, clause, diags
        self.pred = clause.pred
        self.int_tracked: set = set()
        modes = vp.modes.get(self.pred)
        self.bound: set = set()
        if modes:
            for i, a in enumerate(clause.head_args):
                if modes[i] is ModeKind.IN:
                    self.bound |= {v for v in term_vars(a) if v != "_"}
        measure = vp.measures.get(self.pred)
        if measure and modes:
            for i, a in enumerate(clause.head_args):
                if modes[i] is ModeKind.IN and any(s.metric is Metric.INT for s in measure[i]):
                    self.int_tracked |= set(term_vars(a))

    def report(self, kind: str, msg: str):
        self.diags.append(Diagnostic(kind, msg, self.clause.loc, self.pred))

    def run(self):
        self.body(self.clause.body, self.bound)

    def body(self, goals, bound: set) -> set:
        for g in goals:
            bound = self.goal(g, bound)
        return bound

    def goal(self, g, bound: set) -> set:
        if isinstance(g, ParConj):
            left = self.body(g.left, set(bound))
            right = self.body(g.right, set(bound))
            shared = (left - bound) & (right - bound)
            if shared:
                self.report("NonIndependentParConj",
                            f"variables {sorted(shared)} are bound by both sides of &")
            return left | right
        if isinstance(g, Call):
            return self.call(g, bound)
        return self.builtin(g, bound)

    def call(self, g: Call, bound: set) -> set:
        callee = g.pred
        if not self.vp.defined(callee) and callee not in self.trusted:
            self.report("UndefinedPredicate", f"{callee} is called but not defined")
            return bound | set(v for a in g.args for v in term_vars(a))
        modes = self.vp.modes.get(callee)
        if modes is not None:
            for i, a in enumerate(g.args):
                if modes[i] is ModeKind.IN:
                    free = [v for v in term_vars(a) if v == "_" or v not in bound]
                    if free:
                        self.report("UnboundInputArgument",
                                    f"argument {i + 1} of {callee} uses unbound {free}")
        return bound | {v for a in g.args for v in term_vars(a) if v != "_"}

    def builtin(self, g: Builtin, bound: set) -> set:
        a, b = g.args
        if g.kind is BuiltinKind.IS:
            free = [v for v in term_vars(b) if v == "_" or v not in bound]
            if free:
                self.report("UnboundInputArgument", f"is/2 uses unbound {free}")
            if not is_linear(b) and set(term_vars(b)) & self.int_tracked:
                self.report("NonLinearArithmetic",
                            "is/2 over int-measured sizes must be linear")
            if set(term_vars(b)) & self.int_tracked:
                self.int_tracked |= set(term_vars(a))
            return bound | set(term_vars(a))
        if g.kind is BuiltinKind.UNIFY:
            va, vb = set(term_vars(a)), set(term_vars(b))
            if va <= bound or vb <= bound:
                return bound | va | vb
            return bound
        free = [v for v in term_vars(a) + term_vars(b) if v == "_" or v not in bound]
        if free:
            self.report("UnboundInputArgument", f"{g.kind.value} uses unbound {free}")
        return bound


def validate(p: Program) -> ValidatedProgram | list[Diagnostic]:
    diags: list[Diagnostic] = []
    vp = ValidatedProgram(program=p)
    modes = p.modes()
    measures = p.measures()
    trusted = {d.pred for d in p.trusted_costs()}
    for pred, m in modes.items():
        if len(m.modes) != pred.arity:
            diags.append(Diagnostic("DirectiveArity", f"mode list of {pred} has wrong length", m.loc, pred))
        else:
            vp.modes[pred] = m.modes
    for pred, m in measures.items():
        if len(m.metrics) != pred.arity:
            diags.append(Diagnostic("DirectiveArity", f"measure list of {pred} has wrong length", m.loc, pred))
        else:
            vp.measures[pred] = m.metrics
    for pred in sorted(set(p.predicates) | trusted):
        if pred not in vp.modes or pred not in vp.measures:
            if pred in modes and pred in measures:
                continue
            loc = p.predicates[pred][0].loc if pred in p.predicates else None
            diags.append(Diagnostic("MissingModeOrMeasure", f"{pred} needs mode and measure directives", loc, pred))
            continue
        vp.params[pred] = _size_params(pred, measures[pred], vp.modes[pred])
    for pred in sorted(p.predicates):
        for clause in p.predicates[pred]:
            _ClauseChecker(vp, trusted, clause, diags).run()
    if diags:
        uniq = []
        for d in diags:
            if d not in uniq:
                uniq.append(d)
        return sorted(uniq, key=lambda d: (str(d.pred), d.loc.line if d.loc else 0, d.kind, d.message))
    return vp


def validate_or_raise(p: Program) -> ValidatedProgram:
    out = validate(p)
    if isinstance(out, list):
        raise ValidationFailed(out)
    return out
