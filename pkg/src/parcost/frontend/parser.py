"""Tokenizer and operator-precedence parser for the program subset."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..symexpr import (
    INFINITY, CeilDiv, Const, CostExpr, Fib, Lucas, Max, Min, Pow, Prod,
    SizeVar, Sum, parse_expr,
)
from .ast import (
    BUILTIN_OPS, NIL, Approx, Atom, Builtin, Call, CheckGen, Clause, Compound,
    IntConst, Measure, Metric, MetricSpec, Mode, ModeKind, ParConj, PredId,
    Program, ResourceDecl, SourceLoc, Term, TrustCost, TrustSolutions,
    Variable, cons,
)


class SourceSyntaxError(Exception):
    def __init__(self, line: int, col: int, expected: str, found: str = ""):
        self.line, self.col, self.expected, self.found = line, col, expected, found
        super().__init__(f"{line}:{col}: expected {expected}" + (f", found {found!r}" if found else ""))


class DuplicateDirective(Exception):
    def __init__(self, kind: str, pred: PredId, loc: SourceLoc):
        self.kind, self.pred, self.loc = kind, pred, loc
        super().__init__(f"{loc}: duplicate {kind} directive for {pred}")


class DirectiveError(Exception):
    pass


INFIX = {
    ":-": (1200, "xfx"),
    ",": (1000, "xfy"),
    "&": (950, "xfy"),
    "+": (500, "yfx"),
    "-": (500, "yfx"),
    "*": (400, "yfx"),
    "/": (400, "yfx"),
    "//": (400, "yfx"),
    "mod": (400, "yfx"),
}
for _op in ("is", "<", ">", "=<", ">=", "=:=", "=\\=", "="):
    INFIX[_op] = (700, "xfx")
PREFIX = {":-": (1200, "fx"), "-": (200, "fy")}

_SYMBOL_CHARS = "+-*/\\^<>=~:.?@#&$"


@dataclass(frozen=True)
class Token:
    kind: str  # var, int, atom, punct, end, eof
    text: str
    line: int
    col: int
    functional: bool = False  # atom immediately followed by "("


_SPACE = re.compile(r"(?:\s+|%[^\n]*|/\*.*?\*/)+", re.S)
_VAR = re.compile(r"[A-Z_][A-Za-z0-9_]*")
_INT = re.compile(r"\d+")
_NAME = re.compile(r"[a-z][A-Za-z0-9_]*")
_QUOTED = re.compile(r"'((?:[^'\\]|\\.|'')*)'")
_SYMS = re.compile("[" + re.escape(_SYMBOL_CHARS) + "]+")


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(src)

    def advance(to: int):
        nonlocal pos, line, line_start
        chunk = src[pos:to]
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = to

    while True:
        m = _SPACE.match(src, pos)
        if m:
            advance(m.end())
        if pos >= n:
            toks.append(Token("eof", "", line, pos - line_start + 1))
            return toks
        col = pos - line_start + 1
        ch = src[pos]
        for kind, rx in (("var", _VAR), ("int", _INT), ("atom", _NAME)):
            m = rx.match(src, pos)
            if m:
                end = m.end()
                functional = kind == "atom" and end < n and src[end] == "("
                toks.append(Token(kind, m.group(), line, col, functional))
                advance(end)
                break
        else:
            if ch == "'":
                m = _QUOTED.match(src, pos)
                if not m:
                    raise SourceSyntaxError(line, col, "closing quote")
                end = m.end()
                text = m.group(1).replace("''", "'")
                toks.append(Token("qatom", text, line, col, end < n and src[end] == "("))
                advance(end)
            elif ch in "()[]|,":
                toks.append(Token("punct", ch, line, col))
                advance(pos + 1)
            elif ch == "!" or ch == ";":
                toks.append(Token("atom", ch, line, col))
                advance(pos + 1)
            else:
                m = _SYMS.match(src, pos)
                if not m:
                    raise SourceSyntaxError(line, col, "a token", ch)
                text = m.group()
                if text == "." and (m.end() >= n or src[m.end()] in " \t\r\n%"):
                    toks.append(Token("end", ".", line, col))
                    advance(m.end())
                    continue
                if text.endswith(".") and len(text) > 1 and (m.end() >= n or src[m.end()] in " \t\r\n%"):
                    toks.append(Token("atom", text[:-1], line, col))
                    toks.append(Token("end", ".", line, col + len(text) - 1))
                    advance(m.end())
                    continue
                end = m.end()
                toks.append(Token("atom", text, line, col, end < n and src[end] == "("))
                advance(end)


class _TermParser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            raise SourceSyntaxError(t.line, t.col, repr(text) if text else kind, t.text)
        return self.next()

    def _is_infix(self, t: Token) -> bool:
        if t.kind == "punct" and t.text == ",":
            return True
        return t.kind in ("atom", "qatom") and t.text in INFIX

    def parse(self, maxprec: int) -> tuple[Term, int]:
        left, lp = self.primary(maxprec)
        while True:
            t = self.tok
            if not self._is_infix(t):
                break
            prec, typ = INFIX[t.text]
            if prec > maxprec:
                break
            left_max = prec if typ == "yfx" else prec - 1
            if lp > left_max:
                break
            right_max = prec if typ == "xfy" else prec - 1
            self.next()
            right, _ = self.parse(right_max)
            left, lp = Compound(t.text, (left, right)), prec
        return left, lp

    def arglist(self) -> tuple:
        self.expect("punct", "(")
        args = [self.parse(999)[0]]
        while self.tok.kind == "punct" and self.tok.text == ",":
            self.next()
            args.append(self.parse(999)[0])
        self.expect("punct", ")")
        return tuple(args)

    def primary(self, maxprec: int) -> tuple[Term, int]:
        t = self.next()
        if t.kind == "int":
            return IntConst(int(t.text)), 0
        if t.kind == "var":
            return Variable(t.text), 0
        if t.kind == "punct" and t.text == "(":
            inner, _ = self.parse(1200)
            self.expect("punct", ")")
            return inner, 0
        if t.kind == "punct" and t.text == "[":
            if self.tok.kind == "punct" and self.tok.text == "]":
                self.next()
                return NIL, 0
            items = [self.parse(999)[0]]
            while self.tok.kind == "punct" and self.tok.text == ",":
                self.next()
                items.append(self.parse(999)[0])
            tail: Term = NIL
            if self.tok.kind == "punct" and self.tok.text == "|":
                self.next()
                tail = self.parse(999)[0]
            self.expect("punct", "]")
            out = tail
            for it in reversed(items):
                out = cons(it, out)
            return out, 0
        if t.kind in ("atom", "qatom"):
            if t.functional:
                return Compound(t.text, self.arglist()), 0
            if t.kind == "atom" and t.text == "-" and self.tok.kind == "int":
                return IntConst(-int(self.next().text)), 0
            if t.kind == "atom" and t.text in PREFIX and not self._ends_operand():
                prec, typ = PREFIX[t.text]
                if prec > maxprec:
                    return Atom(t.text), 0
                arg_max = prec if typ == "fy" else prec - 1
                arg, _ = self.parse(arg_max)
                return Compound(t.text, (arg,)), prec
            if t.text == "[]":
                return NIL, 0
            prec = INFIX.get(t.text, (0, ""))[0] if t.kind == "atom" else 0
            return Atom(t.text), (prec if prec <= maxprec else 0)
        raise SourceSyntaxError(t.line, t.col, "a term", t.text)

    def _ends_operand(self) -> bool:
        t = self.tok
        return t.kind in ("end", "eof") or (t.kind == "punct" and t.text in ")]|,") or self._is_infix(t)


# -- conversion to clauses and directives ---------------------------------

def _flatten(t: Term, op: str) -> list[Term]:
    out = []
    while isinstance(t, Compound) and t.functor == op and len(t.args) == 2:
        out.append(t.args[0])
        t = t.args[1]
    out.append(t)
    return out


def term_to_body(t: Term, loc: SourceLoc) -> tuple:
    goals = []
    for g in _flatten(t, ","):
        goals.append(term_to_goal(g, loc))
    return tuple(goals)


def term_to_goal(t: Term, loc: SourceLoc):
    if isinstance(t, Compound) and t.functor == "&" and len(t.args) == 2:
        return ParConj(term_to_body(t.args[0], loc), term_to_body(t.args[1], loc))
    if isinstance(t, Compound) and t.functor in BUILTIN_OPS and len(t.args) == 2:
        return Builtin(BUILTIN_OPS[t.functor], t.args)
    if isinstance(t, Compound):
        return Call(PredId(t.functor, len(t.args)), t.args)
    if isinstance(t, Atom):
        return Call(PredId(t.name, 0), ())
    raise SourceSyntaxError(loc.line, loc.col, "a goal", type(t).__name__)


def _pred_indicator(t: Term, loc: SourceLoc) -> PredId:
    if (isinstance(t, Compound) and t.functor == "/" and len(t.args) == 2
            and isinstance(t.args[0], Atom) and isinstance(t.args[1], IntConst)):
        return PredId(t.args[0].name, t.args[1].value)
    raise DirectiveError(f"{loc}: expected name/arity")


def _list_items(t: Term, loc: SourceLoc) -> list[Term]:
    out = []
    while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
        out.append(t.args[0])
        t = t.args[1]
    if t != NIL:
        raise DirectiveError(f"{loc}: expected a proper list")
    return out


def _name_of(t: Term) -> str:
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Variable):
        return t.name.lower()
    raise DirectiveError("expected a name")


def _metric_specs(t: Term, loc: SourceLoc) -> tuple:
    parts = _flatten_left(t, "+")
    out = []
    for p in parts:
        if isinstance(p, Atom):
            try:
                m = Metric(p.name)
            except ValueError:
                raise DirectiveError(f"{loc}: unknown size metric {p.name}") from None
            if m is not Metric.IGNORE:
                out.append(MetricSpec(m))
        elif isinstance(p, Compound) and len(p.args) == 1 and p.functor in {m.value for m in Metric}:
            out.append(MetricSpec(Metric(p.functor), _name_of(p.args[0])))
        else:
            raise DirectiveError(f"{loc}: bad size metric")
    return tuple(out)


def _flatten_left(t: Term, op: str) -> list[Term]:
    if isinstance(t, Compound) and t.functor == op and len(t.args) == 2:
        return _flatten_left(t.args[0], op) + _flatten_left(t.args[1], op)
    return [t]


def term_to_costexpr(t: Term) -> CostExpr:
    """Read a cost expression written as a program term."""
    if isinstance(t, IntConst):
        return Const(Fraction(t.value))
    if isinstance(t, Atom):
        if t.name == "inf":
            return INFINITY
        if any(ch in t.name for ch in "+-*/( "):
            return parse_expr(t.name)
        return SizeVar(t.name)
    if isinstance(t, Variable):
        return SizeVar(t.name.lower())
    f, args = t.functor, t.args
    if f == "+" and len(args) == 2:
        return Sum((term_to_costexpr(args[0]), term_to_costexpr(args[1])))
    if f == "-" and len(args) == 2:
        return Sum((term_to_costexpr(args[0]),
                    Prod((Const(Fraction(-1)), term_to_costexpr(args[1])))))
    if f == "-" and len(args) == 1:
        return Prod((Const(Fraction(-1)), term_to_costexpr(args[0])))
    if f == "*" and len(args) == 2:
        return Prod((term_to_costexpr(args[0]), term_to_costexpr(args[1])))
    if f == "/" and len(args) == 2 and isinstance(args[1], IntConst) and args[1].value:
        return Prod((term_to_costexpr(args[0]), Const(Fraction(1, args[1].value))))
    if f in ("max", "min"):
        return (Max if f == "max" else Min)(tuple(term_to_costexpr(a) for a in args))
    if f == "ceil" and len(args) == 1 and isinstance(args[0], Compound) and args[0].functor == "/":
        return CeilDiv(term_to_costexpr(args[0].args[0]), term_to_costexpr(args[0].args[1]))
    if f == "exp" and len(args) == 2 and isinstance(args[0], IntConst):
        return Pow(Fraction(args[0].value), term_to_costexpr(args[1]))
    if f == "fib" and len(args) == 1:
        return Fib(term_to_costexpr(args[0]))
    if f == "lucas" and len(args) == 1:
        return Lucas(term_to_costexpr(args[0]))
    raise DirectiveError(f"unsupported cost expression {f}/{len(args)}")


def _directive(t: Term, loc: SourceLoc):
    if not isinstance(t, Compound):
        raise DirectiveError(f"{loc}: unknown directive")
    f, args = t.functor, t.args
    if f == "mode" and len(args) == 2:
        pred = _pred_indicator(args[0], loc)
        modes = []
        for m in _list_items(args[1], loc):
            if not isinstance(m, Atom) or m.name not in ("in", "out"):
                raise DirectiveError(f"{loc}: mode must be in or out")
            modes.append(ModeKind(m.name))
        return Mode(pred, tuple(modes), loc)
    if f == "measure" and len(args) == 2:
        pred = _pred_indicator(args[0], loc)
        return Measure(pred, tuple(_metric_specs(m, loc) for m in _list_items(args[1], loc)), loc)
    if f == "trust_cost" and len(args) == 4:
        pred = _pred_indicator(args[0], loc)
        if not isinstance(args[2], Atom) or args[2].name not in ("ub", "lb"):
            raise DirectiveError(f"{loc}: approximation must be ub or lb")
        return TrustCost(pred, _name_of(args[1]), Approx(args[2].name), term_to_costexpr(args[3]), loc)
    if f == "trust_solutions" and len(args) == 2:
        return TrustSolutions(_pred_indicator(args[0], loc), term_to_costexpr(args[1]), loc)
    if f == "resource":
        from ..costrel.resources import resource_from_term

        return ResourceDecl(resource_from_term(t), loc)
    if f == "check_gen" and len(args) == 2:
        return CheckGen(_pred_indicator(args[0], loc), tuple(_list_items(args[1], loc)), loc)
    raise DirectiveError(f"{loc}: unknown directive {f}/{len(args)}")


def parse_program(source: str, name: str = "<input>") -> Program:
    toks = tokenize(source)
    p = _TermParser(toks)
    prog = Program(source_name=name)
    seen: dict = {}
    while p.tok.kind != "eof":
        start = p.tok
        loc = SourceLoc(name, start.line, start.col)
        term, _ = p.parse(1200)
        p.expect("end")
        if isinstance(term, Compound) and term.functor == ":-" and len(term.args) == 1:
            d = _directive(term.args[0], loc)
            if isinstance(d, (Mode, Measure)):
                key = (type(d).__name__, d.pred)
                if key in seen:
                    raise DuplicateDirective(type(d).__name__.lower(), d.pred, loc)
                seen[key] = d
            prog.directives.append(d)
            continue
        if isinstance(term, Compound) and term.functor == ":-" and len(term.args) == 2:
            head, body = term.args[0], term_to_body(term.args[1], loc)
        else:
            head, body = term, ()
        if not isinstance(head, (Atom, Compound)):
            raise SourceSyntaxError(loc.line, loc.col, "a clause head", type(head).__name__)
        clause = Clause(head, body, loc)
        prog.predicates.setdefault(clause.pred, []).append(clause)
    return prog


def parse_term(text: str) -> Term:
    toks = tokenize(text)
    p = _TermParser(toks)
    t, _ = p.parse(1200)
    if p.tok.kind not in ("end", "eof"):
        raise SourceSyntaxError(p.tok.line, p.tok.col, "end of term", p.tok.text)
    return t
