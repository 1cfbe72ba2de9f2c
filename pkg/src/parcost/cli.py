"""Command-line driver: ``parcost analyze`` and ``parcost check``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

from .analysis import Analyzer
from .costrel import ExecModel, ResourceError
from .frontend import (
    Approx, DirectiveError, DuplicateDirective, SourceSyntaxError, ValidationFailed,
    load_program, validate_or_raise,
)
from .symexpr import ZERO
from .symexpr.parse import ExprSyntaxError, parse_expr

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2


@dataclass
class ReportRow:
    pred: str
    arity: int
    resource: str
    approx: str
    model: str
    bound: str
    domain: str
    big_o: str
    exact: bool
    provenance: list
    ms: float

    def render(self) -> str:
        return f"{self.pred}/{self.arity}: {self.bound} [{self.domain}], {self.big_o}"


@dataclass
class AnalysisReport:
    program: str
    results: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"program": self.program, "results": [asdict(r) for r in self.results],
                "diagnostics": list(self.diagnostics)}

    @classmethod
    def from_json(cls, data: dict) -> "AnalysisReport":
        return cls(data["program"], [ReportRow(**r) for r in data["results"]],
                   list(data["diagnostics"]))

    def render_json(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def render_text(self) -> str:
        lines = []
        last = None
        for r in self.results:
            head = (r.resource, r.approx, r.model)
            if head != last:
                if lines:
                    lines.append("")
                lines.append(f"# {r.resource} {r.approx} {r.model}")
                last = head
            lines.append(r.render())
        for d in self.diagnostics:
            where = f"{d['loc']}: " if d.get("loc") else ""
            lines.append(f"warning: {where}{d['kind']}: {d['message']}")
        return "\n".join(lines) + "\n"

    @property
    def partial(self) -> bool:
        return any(r.approx == "ub" and r.bound == "inf" for r in self.results)


def _load(path: str):
    return validate_or_raise(load_program(path))


def _error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


_LOAD_ERRORS = (OSError, SourceSyntaxError, DirectiveError, DuplicateDirective,
                ValidationFailed, ResourceError)


def _expr_arg(text: str | None):
    return ZERO if text is None else parse_expr(text)


def _pred_loc(an: Analyzer, pred_text: str) -> str | None:
    for pred, clauses in an.vp.predicates.items():
        if str(pred) == pred_text and clauses:
            return str(clauses[0].loc)
    return None


def build_report(an: Analyzer, resources, approxes, models, program: str) -> AnalysisReport:
    rep = AnalysisReport(program)
    preds = [p for scc in an.order.sccs for p in sorted(scc) if p in an.vp.predicates]
    for rname in resources:
        for ap in approxes:
            for m in models:
                for pred in preds:
                    res = an.result(pred, rname, ap, m)
                    rep.results.append(ReportRow(**res.to_json()))
    for d in an.diagnostics:
        rep.diagnostics.append({**d, "loc": _pred_loc(an, d.get("pred", ""))})
    return rep


def cmd_analyze(args) -> int:
    try:
        vp = _load(args.file)
        spaw, sched = _expr_arg(args.spaw), _expr_arg(args.sched)
        models = [ExecModel.parse(m) for m in (args.model or ["par-inf"])]
    except _LOAD_ERRORS as exc:
        return _error(str(exc))
    except (ExprSyntaxError, ValueError) as exc:
        return _error(str(exc))
    an = Analyzer(vp, spaw=spaw, sched=sched)
    resources = args.resource or sorted(an.resources)
    unknown = [r for r in resources if r not in an.resources]
    if unknown:
        return _error(f"unknown resource {', '.join(unknown)}")
    approxes = [Approx.UB, Approx.LB] if args.approx == "both" else [Approx(args.approx)]
    if args.dump_sizes:
        from .sizes import dump_sizes

        print(dump_sizes(vp), end="")
    if args.dump_callgraph:
        print(an.graph.to_dot(), end="")
        print("order: " + " ; ".join(", ".join(str(p) for p in sorted(c)) for c in an.order.sccs))
    rep = build_report(an, resources, approxes, models, args.file)
    if args.trace_solver:
        for pred, rname, ap, m, rel, b in an.trace:
            print(f"-- {pred} {rname} {ap.value} {m.render()}")
            print(rel.render().rstrip())
            print(f"=> {b.text}  ({', '.join(b.provenance)})")
    print(rep.render_json() if args.format == "json" else rep.render_text(), end="")
    return EXIT_PARTIAL if rep.partial else EXIT_OK


def _procs(text: str) -> tuple:
    try:
        ns = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad processor list {text!r}") from None
    if any(n < 1 for n in ns):
        raise argparse.ArgumentTypeError("processor counts must be positive")
    return ns


def cmd_check(args) -> int:
    from .checking import check_program
    from .oracle import tree_to_json

    try:
        vp = _load(args.file)
    except _LOAD_ERRORS as exc:
        return _error(str(exc))
    an = Analyzer(vp)
    resources = args.resource or None
    if resources:
        unknown = [r for r in resources if r not in an.resources]
        if unknown:
            return _error(f"unknown resource {', '.join(unknown)}")
    if not vp.program.check_gens():
        print("note: no check_gen directive, nothing to run")
    trees: list | None = [] if args.dump_tree else None
    rep = check_program(an, args.max_size, args.procs, resources,
                        all_solutions=args.oracle_all_solutions, fuel=args.fuel,
                        seed=args.seed, trees_out=trees)
    if trees:
        for t in trees:
            print(json.dumps(tree_to_json(t)))
    for pred, sizes, msg in rep.timeouts:
        print(f"timeout: {pred} {sizes}: {msg}")
    for pred, sizes, msg in rep.failures:
        print(f"no solution: {pred} {sizes}: {msg}")
    for v in rep.violations:
        print("violation: " + v.render())
    print(f"{rep.points} input points, {rep.comparisons} comparisons, "
          f"{len(rep.violations)} violations")
    return EXIT_OK if rep.ok else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parcost", description="Static cost bounds for and-parallel logic programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="infer cost bounds")
    a.add_argument("file")
    a.add_argument("--resource", action="append", metavar="NAME")
    a.add_argument("--approx", choices=["ub", "lb", "both"], default="ub")
    a.add_argument("--model", action="append", metavar="MODEL",
                   help="seq, par-inf, par:N or par:p (repeatable)")
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.add_argument("--spaw", metavar="EXPR", help="overhead of spawning tasks (may use k)")
    a.add_argument("--sched", metavar="EXPR", help="per-task scheduling overhead (may use k)")
    a.add_argument("--dump-sizes", action="store_true")
    a.add_argument("--dump-callgraph", action="store_true")
    a.add_argument("--trace-solver", action="store_true")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check", help="compare bounds with measured executions")
    c.add_argument("file")
    c.add_argument("--max-size", type=int, default=8)
    c.add_argument("--procs", type=_procs, default=(1, 2, 4))
    c.add_argument("--resource", action="append", metavar="NAME")
    c.add_argument("--oracle-all-solutions", action=argparse.BooleanOptionalAction, default=True,
                   help="measure the full search for upper-bound checks (default on)")
    c.add_argument("--dump-tree", action="store_true", help="print each derivation tree as JSON")
    c.add_argument("--fuel", type=int, default=10 ** 7)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
