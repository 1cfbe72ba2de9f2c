"""Closed forms for max-recurrences."""

from __future__ import annotations

from ..frontend.ast import Approx
from ..symexpr import (
    Domain, Max, SizeVar, ge, is_nondecreasing, simplify, substitute, as_expr,
)
from ..symexpr.compare import Mono
from .bound import ClosedBound
from .forms import Dependence, MaxRecForm


class PreconditionViolation(ValueError):
    pass


class NotApplicableForLb(ValueError):
    pass


def theorem1_expr(form: MaxRecForm):
    x = SizeVar(form.var)
    return simplify(Max((form.C, form.B)) + (x - form.theta) * form.D)


def theorem1(form: MaxRecForm, domain: Domain | None = None, approx: Approx = Approx.UB) -> ClosedBound:
    """Exact solution for x > theta (at theta itself only when C <= B)."""
    if form.dependence is not Dependence.INDEPENDENT:
        raise PreconditionViolation("C and D must not depend on the recursion variable")
    d = domain if domain is not None else Domain.nonneg(form.params or (form.var,))
    for other in form.params:
        if other == form.var:
            continue
        for e in (form.C, form.D):
            if is_nondecreasing(e, other, d) is not Mono.YES:
                raise PreconditionViolation(f"not nondecreasing in {other}")
    dom = d.add(ge(SizeVar(form.var), as_expr(form.theta + 1)))
    return ClosedBound(theorem1_expr(form), dom, approx, True, ("theorem1",), form.params)


def theorem2_expr(form: MaxRecForm):
    x = SizeVar(form.var)
    g, h = form.C, form.D
    h_prev = substitute(h, {form.var: x - 1})
    return simplify(Max((g, form.B)) + (x - form.theta - 1) * Max((g, h_prev)) + h)


def theorem2(form: MaxRecForm, domain: Domain | None = None, approx: Approx = Approx.UB) -> ClosedBound:
    """Upper bound valid for x > theta."""
    if approx is not Approx.UB:
        raise NotApplicableForLb("theorem 2 gives upper bounds only")
    d = domain if domain is not None else Domain.nonneg(form.params or (form.var,))
    for e in (form.C, form.D):
        if is_nondecreasing(e, form.var, d) is not Mono.YES:
            raise PreconditionViolation("g and h must be nondecreasing in the recursion variable")
    prov = ["theorem2"]
    from ..symexpr import free_vars

    if (form.var in free_vars(form.C)) != (form.var in free_vars(form.D)):
        prov.append("theorem2-one-sided-dependence")
    dom = d.add(ge(SizeVar(form.var), as_expr(form.theta + 1)))
    return ClosedBound(theorem2_expr(form), dom, Approx.UB, False, tuple(prov), form.params)
