"""Linear constraint domains over size variables.

A constraint ``sum(a_i * x_i) + c >= 0`` (or ``> 0`` when strict).
Satisfiability is decided over the rationals by Fourier-Motzkin
elimination; constraints with integer coefficients have their strict
form tightened to ``>= 1`` since sizes are integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .expr import CostExpr, SizeVar
from .simplify import POLY_INF, to_poly


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple  # sorted ((name, Fraction), ...)
    const: Fraction
    strict: bool = False

    @staticmethod
    def make(coeffs: dict, const, strict: bool = False) -> "Constraint":
        items = tuple(sorted((k, Fraction(v)) for k, v in coeffs.items() if v))
        const = Fraction(const)
        if strict and all(v.denominator == 1 for _, v in items) and const.denominator == 1:
            return Constraint(items, const - 1, False)
        return Constraint(items, const, strict)

    def vars(self) -> set[str]:
        return {k for k, _ in self.coeffs}

    def holds(self, env: dict) -> bool:
        v = sum((c * Fraction(env[k]) for k, c in self.coeffs), self.const)
        return v > 0 if self.strict else v >= 0

    def negate(self) -> "Constraint":
        # not (e >= 0)  <=>  -e > 0
        return Constraint.make({k: -v for k, v in self.coeffs}, -self.const, not self.strict)

    def render(self) -> str:
        coeffs = dict(self.coeffs)
        op = ">" if self.strict else ">="
        if len(coeffs) == 1:
            (name, a), = coeffs.items()
            bound = -self.const / a
            if a > 0:
                return f"{name}{op}{_num(bound)}"
            return f"{name}{'<' if self.strict else '<='}{_num(bound)}"
        lhs = []
        for name, a in self.coeffs:
            if a == 1:
                lhs.append(f"+{name}")
            elif a == -1:
                lhs.append(f"-{name}")
            else:
                lhs.append(f"{'+' if a > 0 else '-'}{_num(abs(a))}*{name}")
        text = "".join(lhs).lstrip("+")
        return f"{text}{op}{_num(-self.const)}"


def _num(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class NonLinearConstraint(ValueError):
    pass


def linear_form(e: CostExpr) -> tuple[dict, Fraction]:
    """Coefficients and constant of a linear expression over SizeVars."""
    p = to_poly(e)
    if p is POLY_INF:
        raise NonLinearConstraint("infinite")
    coeffs: dict = {}
    const = Fraction(0)
    for m, c in p.items():
        if not m:
            const = c
        elif len(m) == 1 and m[0][1] == 1 and isinstance(m[0][0], SizeVar):
            coeffs[m[0][0].name] = c
        else:
            raise NonLinearConstraint(f"non-linear monomial in {e}")
    return coeffs, const


def ge(lhs: CostExpr, rhs: CostExpr, strict: bool = False) -> Constraint:
    """Constraint ``lhs >= rhs`` (or ``>``)."""
    a, c1 = linear_form(lhs)
    b, c2 = linear_form(rhs)
    coeffs = dict(a)
    for k, v in b.items():
        coeffs[k] = coeffs.get(k, 0) - v
    return Constraint.make(coeffs, c1 - c2, strict)


@dataclass(frozen=True)
class Domain:
    constraints: tuple = field(default_factory=tuple)

    @staticmethod
    def nonneg(names: Iterable[str]) -> "Domain":
        return Domain(tuple(Constraint.make({n: 1}, 0) for n in sorted(set(names))))

    def add(self, *cs: Constraint) -> "Domain":
        out = list(self.constraints)
        for c in cs:
            if c not in out:
                out.append(c)
        return Domain(tuple(out))

    def conj(self, other: "Domain") -> "Domain":
        return self.add(*other.constraints)

    def vars(self) -> set[str]:
        out: set = set()
        for c in self.constraints:
            out |= c.vars()
        return out

    def holds(self, env: dict) -> bool:
        return all(c.holds(env) for c in self.constraints)

    def satisfiable(self) -> bool:
        return fm_satisfiable(list(self.constraints))

    def implies(self, c: Constraint) -> bool:
        return not fm_satisfiable(list(self.constraints) + [c.negate()])

    def lower_bound(self, name: str):
        """Best constant lower bound from single-variable constraints."""
        best = None
        for c in self.constraints:
            if len(c.coeffs) == 1 and c.coeffs[0][0] == name and c.coeffs[0][1] > 0:
                b = -c.const / c.coeffs[0][1]
                if best is None or b > best:
                    best = b
        return best

    def upper_bound(self, name: str):
        best = None
        for c in self.constraints:
            if len(c.coeffs) == 1 and c.coeffs[0][0] == name and c.coeffs[0][1] < 0:
                b = c.const / -c.coeffs[0][1]
                if best is None or b < best:
                    best = b
        return best

    def render(self) -> str:
        return ", ".join(c.render() for c in self.constraints) or "true"

    def __str__(self):
        return self.render()


_CONSTRAINT_RE = re.compile(r"^\s*(.+?)\s*(>=|<=|>|<|=)\s*(.+?)\s*$")


def parse_domain(text: str) -> Domain:
    from .parse import parse_expr

    text = text.strip()
    if not text or text == "true":
        return Domain()
    out = []
    for part in text.split(","):
        m = _CONSTRAINT_RE.match(part)
        if not m:
            raise ValueError(f"bad constraint {part!r}")
        lhs, op, rhs = parse_expr(m.group(1)), m.group(2), parse_expr(m.group(3))
        if op in (">=", ">"):
            out.append(ge(lhs, rhs, op == ">"))
        elif op in ("<=", "<"):
            out.append(ge(rhs, lhs, op == "<"))
        else:
            out.append(ge(lhs, rhs))
            out.append(ge(rhs, lhs))
    return Domain(tuple(out))


def fm_satisfiable(cs: list[Constraint]) -> bool:
    rows = [(dict(c.coeffs), c.const, c.strict) for c in cs]
    while True:
        live = []
        for coeffs, const, strict in rows:
            coeffs = {k: v for k, v in coeffs.items() if v}
            if not coeffs:
                if const < 0 or (strict and const == 0):
                    return False
                continue
            live.append((coeffs, const, strict))
        if not live:
            return True
        counts: dict = {}
        for coeffs, _, _ in live:
            for k in coeffs:
                counts[k] = counts.get(k, 0) + 1
        x = min(sorted(counts), key=lambda k: counts[k])
        pos = [r for r in live if r[0].get(x, 0) > 0]
        neg = [r for r in live if r[0].get(x, 0) < 0]
        rest = [r for r in live if x not in r[0]]
        for pc, pk, ps in pos:
            a = pc[x]
            for nc, nk, ns in neg:
                b = -nc[x]
                coeffs: dict = {}
                for k, v in pc.items():
                    coeffs[k] = coeffs.get(k, 0) + v / a
                for k, v in nc.items():
                    coeffs[k] = coeffs.get(k, 0) + v / b
                coeffs.pop(x, None)
                rest.append((coeffs, pk / a + nk / b, ps or ns))
        rows = rest
        if len(rows) > 5000:
            # give up conservatively: report satisfiable
            return True
