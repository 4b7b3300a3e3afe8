import io

import pytest

from conftest import CORPUS
from tpvsim.cli import main
from tpvsim.constructions import compile_machine
from tpvsim.dsl import parse_machine, parse_system
from tpvsim.render import emit_dot, replay_trace
from tpvsim.tpv import Mode

M = CORPUS / "machines"
S = CORPUS / "systems"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_run_machine_output_contract():
    code, text = run("run-machine", "--program", M / "p1.rm", "--max-steps", 4, "--max-sum", 10)
    assert code == 0
    lines = text.splitlines()
    assert lines[:3] == ["1", "2", "3"]
    assert lines[3].startswith("# complete=false results=3")


def test_run_system_trivial():
    code, text = run("run-system", "--system", S / "trivial.tpv", "--mode", "sequ",
                     "--strategy", "halt", "--max-steps", 5, "--max-size", 5)
    assert code == 0 and text.splitlines()[0] == "1" and text.splitlines()[1].startswith("# complete=true")


def test_output_identical_across_workers():
    args = ["run-system", "--system", S / "countdown.tpv", "--mode", "sequ", "--strategy",
            "term", "--max-steps", 30, "--max-size", 8]
    assert run(*args)[1] == run(*args, "--workers", 4)[1]


def test_trace_is_replayable(tmp_path):
    f = tmp_path / "trap.tpv"
    run("compile", "--construction", "thm1", "--in", M / "trap.rm", "--out", f)
    code, text = run("run-system", "--system", f, "--mode", "smax", "--strategy", "halt-term",
                     "--max-steps", 12, "--max-size", 6, "--trace")
    assert code == 0
    steps = [l for l in text.splitlines() if l.startswith("step ")]
    assert steps and steps[0].startswith("step 1: cell 0 {l0} --[l0=>l1]--> cell r:2 {l1}")
    path = replay_trace(parse_system(f.read_text()), Mode.SMAX, steps)
    assert path[-1].cell == "h"


def test_replay_rejects_bad_step():
    sys = parse_system((S / "choice.tpv").read_text())
    with pytest.raises(ValueError):
        replay_trace(sys, Mode.SEQU, ["step 1: cell 0 {s} --[s=>a]--> cell out {a*2}"])


@pytest.mark.parametrize("construction, name", [("thm1", "p1"), ("thm2", "pairs"), ("thm5", "transfer")])
def test_compare_exits_zero(construction, name):
    code, text = run("compare", "--construction", construction, "--machine", M / f"{name}.rm",
                     "--machine-steps", 10)
    assert code == 0, text


def test_compare_thm4():
    code, _ = run("compare", "--construction", "thm4", "--system", S / "relay.tpv",
                  "--max-steps", 20, "--max-size", 8)
    assert code == 0


def test_compare_mismatch_exits_one(monkeypatch):
    import tpvsim.constructions as c
    monkeypatch.setitem(c.BUDGET_MAPS, "thm1", c.BudgetMap(add=1, dec=1, zero=1, closing=1))
    code, text = run("compare", "--construction", "thm1", "--machine", M / "p1.rm",
                     "--machine-steps", 6)
    assert code == 1 and any(l.startswith("+ ") or l.startswith("- ") for l in text.splitlines())


def test_malformed_input_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.rm"
    bad.write_text("registers 1\noutputs 1\nl0: SUB 1 l0\n")
    assert run("run-machine", "--program", bad, "--max-steps", 3, "--max-sum", 3)[0] == 2
    assert "line 3" in capsys.readouterr().err
    assert run("run-machine", "--program", tmp_path / "missing.rm", "--max-steps", 3,
               "--max-sum", 3)[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["run-system", "--mode", "fast"])
    assert e.value.code == 2


def test_compile_round_trip(tmp_path):
    out = tmp_path / "back.rm"
    assert run("compile", "--construction", "thm4", "--in", S / "choice.tpv", "--out", out)[0] == 0
    assert parse_machine(out.read_text()).blind


def test_graph_polarized():
    sys = compile_machine("thm5", parse_machine((M / "transfer.rm").read_text()))
    dot = emit_dot(sys)
    assert dot.startswith("graph tpv {")
    assert '"r+:1" [label="r+:1 ⟨+⟩"]' in dot and "⟨−⟩" in dot and "⟨0⟩" in dot
    assert dot.count(" -- ") == 5 + 10 * 2


def test_graph_cli_star(tmp_path):
    f = tmp_path / "d.tpv"
    run("compile", "--construction", "thm1", "--in", M / "doubling.rm", "--out", f)
    code, dot = run("graph", "--system", f, "--dot")
    assert code == 0 and dot.startswith("digraph tpv {")
    assert dot.count("[label=") == 11
    assert all(" -> " not in l or '"0"' in l for l in dot.splitlines())


def test_graph_no_rules():
    dot = emit_dot(parse_system((S / "trivial.tpv").read_text()))
    assert "->" not in dot and dot.count("[label=") == 1
