from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest

from parcost.analysis import analyze_file, analyze_source
from parcost.costrel import ExecModel
from parcost.frontend import Approx

ROOT = Path(__file__).resolve().parent.parent
BENCH = ROOT / "benchmarks"

BENCHMARKS = [
    "map_add1", "fib", "mmatrix", "blur", "add_mat", "intersect", "union",
    "diff", "dyade", "dyade_map", "append_all",
]
ALL_PROGRAMS = ["scalar"] + BENCHMARKS


@lru_cache(maxsize=None)
def analyzer(name: str):
    return analyze_file(BENCH / f"{name}.pl")


def entry(an):
    """The predicate a benchmark's input generator drives."""
    return an.vp.program.check_gens()[0].pred


def bound_text(name: str, resource: str, model: str, approx: str = "ub", pred=None) -> str:
    an = analyzer(name)
    p = pred if pred is not None else entry(an)
    return an.bound(p, resource, Approx(approx), ExecModel.parse(model)).text


SCALAR_SRC = (BENCH / "scalar.pl").read_text()


@pytest.fixture
def scalar():
    return analyze_source(SCALAR_SRC, "scalar.pl")


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.verdict_line(n))
