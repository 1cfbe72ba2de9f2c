from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from conftest import BENCH
from parcost.cli import AnalysisReport, main

SCALAR = str(BENCH / "scalar.pl")

UNKNOWN_SIZE = (":- mode(p/2,[in,out]).\n:- measure(p/2,[length(l),ignore]).\n"
                ":- mode(q/2,[in,out]).\n:- measure(q/2,[length(l),ignore]).\n"
                "p([],0).\np([_|Xs],N) :- q(Xs,Ys), p(Ys,M), N is M+1.\nq(X,X).\n")


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_scalar_text(capsys):
    code, out, _ = cli(capsys, "analyze", SCALAR, "--resource", "steps_par")
    assert code == 0
    assert "scalar/3: l + n + 1 [l>=0, n>=0], O(l + n)" in out.splitlines()
    assert out.startswith("# steps_par ub par-inf\n")


def test_analyze_fib_sequential(capsys):
    code, out, _ = cli(capsys, "analyze", str(BENCH / "fib.pl"),
                       "--resource", "steps_seq", "--model", "seq")
    assert code == 0
    assert "fib/2: fib(x) + lucas(x) - 1 [x>=0], O(2^x)" in out


def test_analyze_bounded_processors(capsys):
    code, out, _ = cli(capsys, "analyze", str(BENCH / "map_add1.pl"),
                       "--resource", "steps_par", "--model", "par:p")
    assert "map_add1/2: l + 2*ceil(l/p) + 1 [l>=0, p>=1], O(l)" in out


def test_analyze_overheads(capsys):
    code, out, _ = cli(capsys, "analyze", str(BENCH / "map_add1.pl"), "--resource", "steps_seq",
                       "--model", "par:p", "--spaw", "k", "--sched", "1")
    assert code == 0
    assert "map_add1/2: 2*l + 3*ceil(l/p) + 1" in out


def test_both_approximations(capsys):
    code, out, _ = cli(capsys, "analyze", SCALAR, "--resource", "steps_seq",
                       "--model", "seq", "--approx", "both")
    assert "# steps_seq lb seq" in out and "# steps_seq ub seq" in out


def _json(capsys):
    code, out, _ = cli(capsys, "analyze", SCALAR, "--format", "json")
    assert code == 0
    return out


def test_json_round_trip(capsys):
    data = json.loads(_json(capsys))
    rep = AnalysisReport.from_json(data)
    assert rep.to_json() == data
    row = next(r for r in data["results"]
               if (r["pred"], r["resource"]) == ("scalar", "steps_seq"))
    assert row["bound"] == "l*n + 2*l + 1" and row["exact"]


def test_json_deterministic(capsys):
    def strip(text):
        data = json.loads(text)
        for r in data["results"]:
            r.pop("ms")
        return data
    assert strip(_json(capsys)) == strip(_json(capsys))


def test_dump_options(capsys):
    code, out, _ = cli(capsys, "analyze", SCALAR, "--resource", "steps_seq", "--model", "seq",
                       "--dump-sizes", "--dump-callgraph", "--trace-solver")
    assert code == 0
    assert "digraph" in out and "order: mult/3 ; scalar/3" in out
    assert "#1 scalar/3(n, l - 1)" in out
    assert "=> l*n + 2*l + 1" in out


def test_missing_file(capsys):
    code, _, err = cli(capsys, "analyze", "/nonexistent/x.pl")
    assert code == 1 and err.startswith("error:")


def test_syntax_error(tmp_path, capsys):
    f = tmp_path / "bad.pl"
    f.write_text("p(X :- q.\n")
    code, _, err = cli(capsys, "analyze", str(f))
    assert code == 1 and "error:" in err


def test_unknown_resource(capsys):
    code, _, err = cli(capsys, "analyze", SCALAR, "--resource", "joules")
    assert code == 1 and "joules" in err


def test_bad_model(capsys):
    code, _, _ = cli(capsys, "analyze", SCALAR, "--model", "par:0")
    assert code == 1


def test_partial_result(tmp_path, capsys):
    f = tmp_path / "p.pl"
    f.write_text(UNKNOWN_SIZE)
    code, out, _ = cli(capsys, "analyze", str(f), "--resource", "steps_seq")
    assert code == 2
    assert "p/2: inf" in out
    assert "SizeUnknownAtRecCall" in out


def test_check_scalar(capsys):
    code, out, _ = cli(capsys, "check", SCALAR, "--max-size", "8")
    assert code == 0
    assert out.strip().endswith("0 violations")
    assert "81 input points" in out


def test_check_fib_one_resource(capsys):
    code, out, _ = cli(capsys, "check", str(BENCH / "fib.pl"), "--max-size", "10",
                       "--resource", "sthreads")
    assert code == 0 and out.startswith("11 input points")


def test_check_negative_size(capsys):
    code, out, _ = cli(capsys, "check", SCALAR, "--max-size", "-1")
    assert code == 0 and out.startswith("0 input points")


def test_check_dump_tree(capsys):
    code, out, _ = cli(capsys, "check", SCALAR, "--max-size", "0", "--dump-tree")
    first = json.loads(out.splitlines()[0])
    assert code == 0 and ("clause" in first or "seq" in first)


def test_check_missing_file(capsys):
    code, _, err = cli(capsys, "check", "/nonexistent/x.pl")
    assert code == 1 and err.startswith("error:")


@pytest.mark.parametrize("argv", [["check", SCALAR, "--procs", "0"], ["frobnicate"]])
def test_argument_errors(argv, capsys):
    with pytest.raises(SystemExit) as ei:
        main(argv)
    assert ei.value.code == 2


@pytest.mark.skipif(shutil.which("parcost") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["parcost", "analyze", SCALAR, "--resource", "sthreads"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert "scalar/3: l [l>=0, n>=0], O(l)" in p.stdout
