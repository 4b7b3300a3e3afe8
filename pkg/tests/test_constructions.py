import pytest

from conftest import BLIND, GENERAL, SYSTEMS, machine, system
from tpvsim.constructions import (BUDGET_MAPS, TRAP, compare, compile_pbrm_to_pv_sequ,
                                  compile_rm_to_pv_smax, compile_rm_to_uptpv,
                                  compile_tpv_to_pbrm, matched_budgets, round_trip)
from tpvsim.errors import ValidationError
from tpvsim.multiset import Kind, Multiset, delete, insert, substitute
from tpvsim.ptpv import ptpv_enumerate
from tpvsim.regmach import HALT, MachineProgram, Op, add, machine_enumerate, sub, sub_blind
from tpvsim.search import SearchBudget
from tpvsim.tpv import (Mode, Strategy, TpvRule, TpvSystem, comm_graph, is_hierarchical,
                        tpv_enumerate)


def general_machine(k, working=2):
    """Touches every register: outputs by ADD, working registers by ADD and SUB."""
    m = k + working
    code, label = {}, 0
    for r in range(1, m + 1):
        code[f"l{label}"] = (add(r, f"l{label + 1}"),)
        label += 1
    for r in range(k + 1, m + 1):
        code[f"l{label}"] = (sub(r, f"l{label + 1}", f"l{label + 1}"),)
        label += 1
    code[f"l{label}"] = (HALT,)
    return MachineProgram(m, k, code, "l0")


@pytest.mark.parametrize("k", [1, 2, 3])
def test_star_cell_count(k):
    assert len(compile_rm_to_pv_smax(general_machine(k)).cells) == k + 8


def test_star_layout_for_three_registers():
    sys = compile_rm_to_pv_smax(general_machine(1))
    leaves = {"r:1", "r:2", "rm:2", "r0:2", "r:3", "rm:3", "r0:3", "h"}
    assert set(sys.cells) == leaves | {"0"}
    edges = set(comm_graph(sys).edges)
    assert edges == {("0", c) for c in leaves} | {(c, "0") for c in leaves}
    assert is_hierarchical(sys)
    assert all(r.source != r.target for r in sys.rules)


def test_star_rules_for_add_and_sub():
    p = MachineProgram(2, 1, {"p": (add(1, "q", "s"),), "q": (sub(2, "p", "s"),), "s": (HALT,)}, "p")
    rules = set(compile_rm_to_pv_smax(p, Strategy.HALT).rules)
    expected = {
        TpvRule("0", substitute("p", "q"), "r:1"), TpvRule("0", substitute("p", "s"), "r:1"),
        TpvRule("r:1", insert("a1"), "0"),
        TpvRule("0", substitute("q", "p"), "rm:2"), TpvRule("rm:2", delete("a2"), "0"),
        TpvRule("0", substitute("q", "s"), "r0:2"), TpvRule("r0:2", substitute("s", "s"), "0"),
        TpvRule("r0:2", substitute("a2", TRAP), "0"),
        TpvRule("0", delete("s"), "h"),
        TpvRule("h", substitute(TRAP, TRAP), "0"), TpvRule("0", substitute(TRAP, TRAP), "h"),
    }
    assert rules == expected


def test_term_strategy_drops_trap_loop():
    sys = compile_rm_to_pv_smax(machine("trap"), Strategy.TERM)
    assert not any(r.source == "h" for r in sys.rules)


def test_wrong_zero_guess_is_trapped():
    # register 2 holds 1 when tested; the zero branch must write the trap symbol
    sys = compile_rm_to_pv_smax(machine("trap"), Strategy.HALT)
    res = tpv_enumerate(sys, Mode.SMAX, Strategy.HALT, SearchBudget(30, 6), keep_witnesses=True)
    assert res.vectors == ((1,),)
    assert res.diagnostics["nonterminal_residue_results"] == 0


def test_compilers_reject_wrong_machine_kind():
    with pytest.raises(ValidationError):
        compile_rm_to_pv_smax(machine("pairs"))
    with pytest.raises(ValidationError):
        compile_rm_to_uptpv(machine("pairs"))
    with pytest.raises(ValidationError):
        compile_pbrm_to_pv_sequ(machine("p1"))


@pytest.mark.parametrize("k, m", [(1, 1), (1, 3), (2, 4)])
def test_blind_star_cell_count(k, m):
    code = {f"l{r}": (add(r, f"l{r + 1}"),) for r in range(1, m + 1)}
    code.update({f"s{r}": (sub_blind(r, f"s{r + 1}" if r < m else "lh"),) for r in range(k + 1, m + 1)})
    code[f"l{m + 1}"] = (add(1, f"s{k + 1}" if m > k else "lh"),)
    code["lh"] = (HALT,)
    sys = compile_pbrm_to_pv_sequ(MachineProgram(m, k, code, "l1", blind=True))
    assert len(sys.cells) == k + 2 * (m - k) + 2
    assert is_hierarchical(sys)


def test_blind_residue_feeds_trap():
    sys = compile_pbrm_to_pv_sequ(machine("pairs"), Strategy.HALT)
    assert TpvRule("h", substitute("a1", TRAP), "0") not in sys.rules  # outputs are never trapped
    p = MachineProgram(2, 1, {"l": (add(2, "lh"),), "lh": (HALT,)}, "l", blind=True)
    trapped = compile_pbrm_to_pv_sequ(p, Strategy.HALT)
    assert TpvRule("h", substitute("a2", TRAP), "0") in trapped.rules
    assert tpv_enumerate(trapped, Mode.SEQU, Strategy.HALT, SearchBudget(30, 5)).vectors == ()


def test_tpv_to_machine_substitution_uses_intermediate_label():
    sys = TpvSystem(["0", "1"], ["a", "b"], ["b"], [TpvRule("0", substitute("a", "b"), "1")],
                    "0", Multiset.of("a"), "1")
    p = compile_tpv_to_pbrm(sys)
    assert p.blind and p.registers == 2 and p.outputs == 1
    assert [(i.op, i.register, i.next1) for i in p.code["0"]] == [(Op.SUB_BLIND, 2, "0'")]
    assert [(i.op, i.register, i.next1) for i in p.code["0'"]] == [(Op.ADD, 1, "1")]
    assert machine_enumerate(p, SearchBudget(20, 5)).vectors == ((1,),)


@pytest.mark.parametrize("name", SYSTEMS)
def test_tpv_to_machine_label_bound(name):
    sys = system(name)
    p = compile_tpv_to_pbrm(sys)
    chain = sys.init_multiset.size
    assert len(p.labels) <= 2 * len(sys.rules) + len(sys.cells) + 2 + chain + 1


def test_tpv_to_machine_needs_terminals():
    sys = TpvSystem(["0"], ["a"], [], [], "0", Multiset(), "0")
    with pytest.raises(ValidationError):
        compile_tpv_to_pbrm(sys)


@pytest.mark.parametrize("name", SYSTEMS)
def test_round_trip_hand_built(name):
    s_res, m_res = round_trip(system(name), SearchBudget(40, 12))
    assert s_res.complete and m_res.complete
    assert s_res.vectors == m_res.vectors


LAYOUT_POL = {"0": 0, "0'": 0, "00": 0, "0-": 0, "lh": 0, "lh~": 0}
for _r in (1, 2):
    LAYOUT_POL.update({f"r+:{_r}": 1, f"r+~:{_r}": 1, f"r0:{_r}": -1, f"r0~:{_r}": -1,
                     f"r-:{_r}": 1, f"r-~:{_r}": 0, f"r-^:{_r}": -1})


def layout_edges(m):
    e = {("0", "0'"), ("0", "00"), ("0", "0-"), ("0", "lh"), ("lh", "lh~")}
    for r in range(1, m + 1):
        e |= {("0'", f"r+:{r}"), (f"r+:{r}", f"r+~:{r}"), (f"r+~:{r}", "0"),
              ("0", f"r0:{r}"), (f"r0:{r}", f"r0~:{r}"), (f"r0~:{r}", "00"),
              ("0", f"r-:{r}"), (f"r-:{r}", f"r-~:{r}"), (f"r-~:{r}", f"r-^:{r}"),
              (f"r-^:{r}", "0-")}
    return {frozenset(x) for x in e}


def test_polarized_layout_two_registers():
    sys = compile_rm_to_uptpv(machine("transfer"))
    assert sys.pol.cell_pol == LAYOUT_POL
    assert set(sys.edges) == layout_edges(2)
    assert len(sys.base.cells) == 6 + 7 * 2
    assert sys.base.output_cell == "lh~" and sys.base.terminals == ("a1",)


@pytest.mark.parametrize("name", GENERAL)
def test_polarized_compile_constraints(name):
    sys = compile_rm_to_uptpv(machine(name))
    assert all(sys.pol.sym_pol[t] == 0 for t in sys.base.terminals)
    assert sys.pol.cell_pol[sys.base.output_cell] == 0
    assert sys.value(sys.base.init_multiset) == sys.pol.cell_pol[sys.base.init_cell] == 0
    assert sys.mutations["00"] == () and sys.mutations["0-"] == () and sys.mutations["lh~"] == ()


def test_polarized_rejects_mixed_label():
    p = MachineProgram(1, 1, {"l": (add(1, "h"), sub(1, "h", "h")), "h": (HALT,)}, "l")
    with pytest.raises(ValidationError, match="mixes"):
        compile_rm_to_uptpv(p)


def test_matched_budgets():
    assert matched_budgets("thm1", SearchBudget(10, 10)) == SearchBudget(1 + 2 * 9, 11)
    assert matched_budgets("thm5", SearchBudget(10, 10)).max_steps == 2 + 5 * 9
    for c, bm in BUDGET_MAPS.items():
        assert matched_budgets(c, SearchBudget(0, 3)).max_steps == bm.closing


@pytest.mark.parametrize("construction, names, steps", [
    ("thm1", GENERAL, 24), ("thm2", BLIND, 20), ("thm5", GENERAL, 10)])
def test_oracle_equivalence(construction, names, steps):
    for name in names:
        c = compare(construction, machine(name), SearchBudget(steps, steps))
        assert c.ok, (name, c.missing, c.extra)


@pytest.mark.parametrize("strategy", list(Strategy))
def test_blind_star_all_strategies(strategy):
    for name in BLIND:
        assert compare("thm2", machine(name), SearchBudget(14, 14), strategy).ok


def test_star_all_strategies():
    for strategy in Strategy:
        for name in ("transfer", "trap"):
            assert compare("thm1", machine(name), SearchBudget(16, 16), strategy).ok


def test_doubling_needs_zero_tests():
    c = compare("thm5", machine("doubling"), SearchBudget(19, 19))
    assert c.ok and c.system.vectors == ((2,),)
    c = compare("thm1", machine("doubling"), SearchBudget(40, 40))
    assert c.ok and c.system.vectors == ((2,), (4,))


def test_blind_compile_round_trip():
    sys = compile_pbrm_to_pv_sequ(machine("babort"))
    s_res, m_res = round_trip(sys, SearchBudget(40, 12))
    assert s_res.complete and m_res.complete and s_res.vectors == m_res.vectors == ((1,),)


def test_polarized_construction_is_term_only():
    with pytest.raises(ValueError, match="term"):
        compare("thm5", machine("p1"), SearchBudget(4, 4), Strategy.HALT)


def test_leftover_working_register():
    # the output cell only accepts terminal multisets, so a halt with a
    # non-empty working register yields a result only under halt
    p = MachineProgram(2, 1, {"l0": (add(2, "l0", "lh"),), "lh": (HALT,)}, "l0")
    assert compare("thm1", p, SearchBudget(6, 6), Strategy.HALT).system.vectors == ((0,),)
    for construction, strategy in [("thm1", Strategy.TERM), ("thm1", Strategy.HALT_TERM),
                                   ("thm5", Strategy.TERM)]:
        c = compare(construction, p, SearchBudget(6, 6), strategy)
        assert c.ok and c.system.vectors == ()
