"""Size metrics and the size relations of body literals.

Sizes of body-literal inputs are expressed over the head-input size
variables of the clause.  A size is known exactly, known within an
interval ``[lo, hi]``, or unknown (the lattice top).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .frontend import (
    NIL, Builtin, BuiltinKind, Clause, Compound, IntConst, Metric,
    ModeKind, Term, ValidatedProgram, Variable, flat_literals,
    term_vars,
)
from .symexpr import (
    Const, CostExpr, Domain, Max, SizeVar, ge, render, simplify,
)


class _Undefined:
    def __repr__(self):
        return "Undefined"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


def term_size(metric: Metric, t: Term):
    """Size of a ground term under a metric, or UNDEFINED."""
    if metric is Metric.INT:
        if isinstance(t, IntConst) and t.value >= 0:
            return t.value
        return UNDEFINED
    if metric is Metric.LENGTH:
        n = 0
        while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
            n += 1
            t = t.args[1]
        return n if t == NIL else UNDEFINED
    if metric is Metric.SIZE:
        if isinstance(t, Variable):
            return UNDEFINED
        if isinstance(t, Compound):
            total = 1
            for a in t.args:
                s = term_size(Metric.SIZE, a)
                if s is UNDEFINED:
                    return UNDEFINED
                total += s
            return total
        return 1
    if metric is Metric.MAX:
        best = 0
        while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
            h = t.args[0]
            if not isinstance(h, IntConst) or h.value < 0:
                return UNDEFINED
            best = max(best, h.value)
            t = t.args[1]
        return best if t == NIL else UNDEFINED
    return UNDEFINED


@dataclass(frozen=True)
class SizeBound:
    lo: CostExpr | None
    hi: CostExpr | None

    @staticmethod
    def exact(e: CostExpr) -> "SizeBound":
        e = simplify(e)
        return SizeBound(e, e)

    @property
    def known(self) -> bool:
        return self.hi is not None

    @property
    def is_exact(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def render(self) -> str:
        if self.hi is None:
            return "?"
        if self.is_exact:
            return render(self.hi)
        lo = render(self.lo) if self.lo is not None else "?"
        return f"[{lo}..{render(self.hi)}]"


UNKNOWN = SizeBound(None, None)


@dataclass(frozen=True)
class SizeRel:
    literal_index: int
    pred: object  # PredId of the callee
    input_sizes: tuple  # SizeBound per callee size parameter

    def render(self) -> str:
        return f"#{self.literal_index} {self.pred}(" + ", ".join(s.render() for s in self.input_sizes) + ")"


def _list_pattern(t: Term) -> tuple[list, Term]:
    items = []
    while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
        items.append(t.args[0])
        t = t.args[1]
    return items, t


def _count_symbols(t: Term) -> tuple[int, list[str]]:
    if isinstance(t, Variable):
        return 0, [t.name]
    if isinstance(t, Compound):
        n, vs = 1, []
        for a in t.args:
            k, w = _count_symbols(a)
            n += k
            vs += w
        return n, vs
    return 1, []


def _add(a: CostExpr | None, b: CostExpr | None) -> CostExpr | None:
    if a is None or b is None:
        return None
    return simplify(a + b)


class _Knowledge:
    """Known sizes of clause variables keyed by (variable, metric)."""

    def __init__(self):
        self.facts: dict = {}

    def get(self, var: str, metric: Metric) -> SizeBound:
        return self.facts.get((var, metric), UNKNOWN)

    def put(self, var: str, metric: Metric, b: SizeBound):
        if var == "_" or not b.known:
            return
        self.facts[(var, metric)] = b


def _head_knowledge(clause: Clause, vp: ValidatedProgram) -> _Knowledge:
    kb = _Knowledge()
    for p in vp.params.get(clause.pred, ()):
        t = clause.head_args[p.arg]
        s = SizeVar(p.name)
        if isinstance(t, Variable):
            kb.put(t.name, p.metric, SizeBound.exact(s))
            continue
        if p.metric in (Metric.LENGTH, Metric.MAX):
            items, tail = _list_pattern(t)
            if p.metric is Metric.LENGTH and isinstance(tail, Variable) and items:
                kb.put(tail.name, Metric.LENGTH, SizeBound.exact(s - len(items)))
            if p.metric is Metric.MAX:
                for it in items:
                    if isinstance(it, Variable):
                        kb.put(it.name, Metric.INT, SizeBound(Const(Fraction(0)), s))
                if isinstance(tail, Variable):
                    kb.put(tail.name, Metric.MAX, SizeBound(Const(Fraction(0)), s))
        elif p.metric is Metric.SIZE and isinstance(t, Compound):
            symbols, vs = _count_symbols(t)
            vs = [v for v in vs]
            if len(vs) == 1:
                kb.put(vs[0], Metric.SIZE, SizeBound.exact(s - symbols))
            else:
                for v in vs:
                    kb.put(v, Metric.SIZE, SizeBound(Const(Fraction(1)), simplify(s - symbols - (len(vs) - 1))))
    return kb


def _arith_size(t: Term, kb: _Knowledge) -> SizeBound:
    """Int size of a linear arithmetic term."""
    if isinstance(t, IntConst):
        return SizeBound.exact(Const(Fraction(t.value)))
    if isinstance(t, Variable):
        return kb.get(t.name, Metric.INT)
    if isinstance(t, Compound) and len(t.args) == 2 and t.functor in ("+", "-", "*"):
        a = _arith_size(t.args[0], kb)
        b = _arith_size(t.args[1], kb)
        if not (a.known and b.known):
            return UNKNOWN
        if t.functor == "+":
            return SizeBound(_add(a.lo, b.lo), _add(a.hi, b.hi))
        if t.functor == "-":
            lo = simplify(a.lo - b.hi) if a.lo is not None else None
            hi = simplify(a.hi - b.lo) if b.lo is not None else None
            return SizeBound(lo, hi) if hi is not None else UNKNOWN
        # constant scaling only
        for k, x in ((a, b), (b, a)):
            if k.is_exact and isinstance(k.hi, Const):
                c = k.hi.value
                if c >= 0:
                    lo = simplify(k.hi * x.lo) if x.lo is not None else None
                    return SizeBound(lo, simplify(k.hi * x.hi))
        return UNKNOWN
    if isinstance(t, Compound) and len(t.args) == 1 and t.functor == "-":
        a = _arith_size(t.args[0], kb)
        if a.is_exact:
            return SizeBound.exact(-a.hi)
    return UNKNOWN


def arg_size(t: Term, metric: Metric, kb: _Knowledge) -> SizeBound:
    if metric is Metric.INT:
        return _arith_size(t, kb)
    if isinstance(t, Variable):
        return kb.get(t.name, metric)
    if metric is Metric.LENGTH:
        items, tail = _list_pattern(t)
        if tail == NIL:
            return SizeBound.exact(Const(Fraction(len(items))))
        if isinstance(tail, Variable):
            b = kb.get(tail.name, Metric.LENGTH)
            if b.known:
                lo = _add(b.lo, Const(Fraction(len(items))))
                return SizeBound(lo, _add(b.hi, Const(Fraction(len(items)))))
        return UNKNOWN
    if metric is Metric.SIZE:
        symbols, vs = _count_symbols(t)
        lo: CostExpr | None = Const(Fraction(symbols))
        hi: CostExpr | None = Const(Fraction(symbols))
        for v in vs:
            b = kb.get(v, Metric.SIZE)
            if not b.known:
                return UNKNOWN
            lo, hi = _add(lo, b.lo), _add(hi, b.hi)
        return SizeBound(lo, hi)
    if metric is Metric.MAX:
        items, tail = _list_pattern(t)
        his, los = [], []
        for it in items:
            b = _arith_size(it, kb)
            if not b.known:
                return UNKNOWN
            his.append(b.hi)
            los.append(b.lo)
        if isinstance(tail, Variable):
            b = kb.get(tail.name, Metric.MAX)
            if not b.known:
                return UNKNOWN
            his.append(b.hi)
            los.append(b.lo)
        elif tail != NIL:
            return UNKNOWN
        if not his:
            return SizeBound.exact(Const(Fraction(0)))
        hi = simplify(Max(tuple(his)))
        lo = simplify(Max(tuple(los))) if all(x is not None for x in los) else None
        return SizeBound(lo, hi)
    return UNKNOWN


def _builtin_effect(g: Builtin, kb: _Knowledge):
    a, b = g.args
    if g.kind is BuiltinKind.IS and isinstance(a, Variable):
        kb.put(a.name, Metric.INT, _arith_size(b, kb))
    elif g.kind is BuiltinKind.UNIFY:
        for x, y in ((a, b), (b, a)):
            if isinstance(x, Variable):
                for metric in Metric:
                    if metric is Metric.IGNORE:
                        continue
                    if kb.get(x.name, metric).known:
                        continue
                    s = arg_size(y, metric, kb) if not isinstance(y, Variable) else kb.get(y.name, metric)
                    kb.put(x.name, metric, s)


def infer_size_rels(clause: Clause, vp: ValidatedProgram) -> list[SizeRel]:
    """One SizeRel per call literal; literal indices follow textual order."""
    kb = _head_knowledge(clause, vp)
    out: list[SizeRel] = []
    for idx, g in enumerate(flat_literals(clause.body)):
        if isinstance(g, Builtin):
            _builtin_effect(g, kb)
            continue
        params = vp.params.get(g.pred, ())
        sizes = tuple(arg_size(g.args[p.arg], p.metric, kb) for p in params)
        out.append(SizeRel(idx, g.pred, sizes))
    return out


def literal_size_map(clause: Clause, vp: ValidatedProgram) -> dict:
    """Map from literal index to its SizeRel (calls only)."""
    return {r.literal_index: r for r in infer_size_rels(clause, vp)}


# -- guards -----------------------------------------------------------------

_FLIP = {
    BuiltinKind.LT: BuiltinKind.GT, BuiltinKind.GT: BuiltinKind.LT,
    BuiltinKind.LE: BuiltinKind.GE, BuiltinKind.GE: BuiltinKind.LE,
    BuiltinKind.EQ: BuiltinKind.EQ,
}


def clause_guard(clause: Clause, vp: ValidatedProgram) -> Domain:
    """Linear constraints on head sizes implied by the head patterns and
    the leading arithmetic tests of the body."""
    return clause_guard_info(clause, vp)[0]


def clause_guard_info(clause: Clause, vp: ValidatedProgram) -> tuple[Domain, set]:
    """The guard plus the indices of leading body tests it absorbed."""
    cs = []
    absorbed = set()
    kb = _head_knowledge(clause, vp)
    for p in vp.params.get(clause.pred, ()):
        t = clause.head_args[p.arg]
        s = SizeVar(p.name)
        if p.metric is Metric.INT and isinstance(t, IntConst):
            cs += [ge(s, Const(Fraction(t.value))), ge(Const(Fraction(t.value)), s)]
        elif p.metric is Metric.LENGTH:
            items, tail = _list_pattern(t)
            if tail == NIL:
                k = Const(Fraction(len(items)))
                cs += [ge(s, k), ge(k, s)]
            elif items:
                cs.append(ge(s, Const(Fraction(len(items)))))
        elif p.metric is Metric.SIZE and not isinstance(t, Variable):
            symbols, vs = _count_symbols(t)
            k = Const(Fraction(symbols + len(vs)))
            if vs:
                cs.append(ge(s, k))
            else:
                cs += [ge(s, k), ge(k, s)]
    for i, g in enumerate(clause.body):
        if not isinstance(g, Builtin):
            break
        if g.kind is BuiltinKind.IS or g.kind is BuiltinKind.UNIFY:
            _builtin_effect(g, kb)
            continue
        if g.kind not in _FLIP:
            continue
        a = _arith_size(g.args[0], kb)
        b = _arith_size(g.args[1], kb)
        if not (a.is_exact and b.is_exact):
            continue
        x, y = a.hi, b.hi
        try:
            if g.kind is BuiltinKind.GT:
                cs.append(ge(x, y, strict=True))
            elif g.kind is BuiltinKind.GE:
                cs.append(ge(x, y))
            elif g.kind is BuiltinKind.LT:
                cs.append(ge(y, x, strict=True))
            elif g.kind is BuiltinKind.LE:
                cs.append(ge(y, x))
            else:
                cs += [ge(x, y), ge(y, x)]
        except ValueError:
            continue
        absorbed.add(i)
    return Domain(tuple(cs)), absorbed


def head_sizes(pred, args: tuple, vp: ValidatedProgram) -> dict | None:
    """Measured sizes of a concrete call, keyed by parameter name."""
    out = {}
    for p in vp.params.get(pred, ()):
        v = term_size(p.metric, args[p.arg])
        if v is UNDEFINED:
            return None
        out[p.name] = v
    return out


def dump_sizes(vp: ValidatedProgram) -> str:
    lines = []
    for pred in sorted(vp.predicates):
        for i, c in enumerate(vp.predicates[pred]):
            rels = infer_size_rels(c, vp)
            guard = clause_guard(c, vp)
            lines.append(f"{pred} clause {i + 1} [{guard.render()}]")
            for r in rels:
                lines.append("  " + r.render())
    return "\n".join(lines) + "\n"


def in_mode_vars(clause: Clause, vp: ValidatedProgram) -> set:
    modes = vp.modes.get(clause.pred, ())
    out = set()
    for i, a in enumerate(clause.head_args):
        if i < len(modes) and modes[i] is ModeKind.IN:
            out |= set(term_vars(a))
    return out


__all__ = [
    "UNDEFINED", "UNKNOWN", "SizeBound", "SizeRel", "term_size",
    "infer_size_rels", "literal_size_map", "clause_guard", "clause_guard_info", "head_sizes",
    "dump_sizes", "arg_size", "in_mode_vars",
]
