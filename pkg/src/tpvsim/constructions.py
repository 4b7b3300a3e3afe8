"""Compilers between register machines and vesicle systems, plus budget matching.

* :func:`compile_rm_to_pv_smax`  general machine -> hierarchical tPV system (smax)
* :func:`compile_pbrm_to_pv_sequ` partially blind machine -> hierarchical tPV system (sequ)
* :func:`compile_tpv_to_pbrm`    tPV system (sequ, term) -> partially blind machine
* :func:`compile_rm_to_uptpv`    general machine -> undirected polarized system (sequ, term)
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ValidationError
from .multiset import Kind, Multiset, PolarizationTable, delete, insert, substitute
from .ptpv import PtpvSystem, ptpv_enumerate
from .regmach import (HALT, MachineProgram, Op, add, machine_enumerate, sub_blind)
from .search import ResultSet, SearchBudget
from .tpv import Mode, Strategy, TpvRule, TpvSystem, tpv_enumerate

TRAP = "#"


def reg_symbol(r: int) -> str:
    return f"a{r}"


def _check_fresh(labels, symbols):
    clash = set(labels) & set(symbols)
    if clash:
        raise ValidationError(f"machine labels clash with generated symbols: {sorted(clash)}")


def _decremented(p: MachineProgram) -> list:
    subs = {i.register for _, i in p.instructions() if i.op in (Op.SUB, Op.SUB_BLIND)}
    return sorted(subs | set(range(p.outputs + 1, p.registers + 1)))


def _star_system(p: MachineProgram, zero_test: bool, strategy: Strategy) -> TpvSystem:
    m, k = p.registers, p.outputs
    regs = [reg_symbol(r) for r in range(1, m + 1)]
    _check_fresh(p.labels, regs + [TRAP])
    dec = _decremented(p)
    cells = ["0"] + [f"r:{r}" for r in range(1, m + 1)]
    for r in dec:
        cells.append(f"rm:{r}")
        if zero_test:
            cells.append(f"r0:{r}")
    cells.append("h")

    rules = []
    for label, i in p.instructions():
        if i.op is Op.HALT:
            continue
        a = reg_symbol(i.register)
        if i.op is Op.ADD:
            cell = f"r:{i.register}"
            rules += [TpvRule("0", substitute(label, i.next1), cell),
                      TpvRule("0", substitute(label, i.next2), cell),
                      TpvRule(cell, insert(a), "0")]
        else:
            rules += [TpvRule("0", substitute(label, i.next1), f"rm:{i.register}"),
                      TpvRule(f"rm:{i.register}", delete(a), "0")]
            if i.op is Op.SUB:
                z = f"r0:{i.register}"
                rules += [TpvRule("0", substitute(label, i.next2), z),
                          TpvRule(z, substitute(i.next2, i.next2), "0"),
                          TpvRule(z, substitute(a, TRAP), "0")]
    rules.append(TpvRule("0", delete(p.halt_label), "h"))
    if Strategy(strategy) is not Strategy.TERM:
        rules += [TpvRule("h", substitute(TRAP, TRAP), "0"),
                  TpvRule("0", substitute(TRAP, TRAP), "h")]
        if not zero_test:
            rules += [TpvRule("h", substitute(reg_symbol(r), TRAP), "0")
                      for r in range(k + 1, m + 1)]
    return TpvSystem(
        cells=cells,
        alphabet=list(p.labels) + regs + [TRAP],
        terminals=regs[:k],
        rules=list(dict.fromkeys(rules)),
        init_cell="0",
        init_multiset=Multiset.of(p.init),
        output_cell="h",
    )


def compile_rm_to_pv_smax(p: MachineProgram, strategy: Strategy = Strategy.HALT_TERM) -> TpvSystem:
    """Hierarchical system simulating a general machine in smax mode.

    Decrement guesses are checked in cell ``r0:r``, where ``s -> s`` and
    ``a_r -> #`` fire together if the register was not empty.  Trap rules are
    left out under the ``term`` strategy, which does not need them.
    """
    if p.blind:
        raise ValidationError("expected a general register machine")
    return _star_system(p, True, strategy)


def compile_pbrm_to_pv_sequ(p: MachineProgram, strategy: Strategy = Strategy.TERM) -> TpvSystem:
    if not p.blind:
        raise ValidationError("expected a partially blind register machine")
    return _star_system(p, False, strategy)


def _fresh(base: str, taken: set) -> str:
    name, n = base, 1
    while name in taken:
        n += 1
        name = f"{base}{n}"
    taken.add(name)
    return name


def compile_tpv_to_pbrm(sys: TpvSystem) -> MachineProgram:
    """Partially blind machine generating the sequ/term results of ``sys``.

    Registers count symbols, terminals first.  Cells become labels; a
    substitution goes through a fresh intermediate label.  Cells without rules
    (other than the output cell) get a blind self-decrement that can only abort.
    """
    if not sys.terminals:
        raise ValidationError("the terminal alphabet is empty")
    order = list(sys.terminals) + [s for s in sys.alphabet if s not in sys.terminals]
    reg = {s: n for n, s in enumerate(order, 1)}
    taken = set(sys.cells)
    code = {c: [] for c in sys.cells}
    h = sys.output_cell
    for r in sys.rules:
        m = r.mutation
        if m.kind is Kind.INSERT:
            code[r.source].append(add(reg[m.rhs], r.target))
        elif m.kind is Kind.DELETE:
            code[r.source].append(sub_blind(reg[m.lhs], r.target))
        else:
            mid = _fresh(f"{r.source}'", taken)
            code[r.source].append(sub_blind(reg[m.lhs], mid))
            code[mid] = [add(reg[m.rhs], r.target)]
    h_tilde, h_hat = _fresh(f"{h}~", taken), _fresh(f"{h}^", taken)
    code[h].append(add(1, h_tilde))
    code[h_tilde] = [sub_blind(1, h_hat)]
    code[h_hat] = [HALT]
    for c in sys.cells:
        if not code[c]:
            code[c] = [sub_blind(1, c)]

    start = sys.init_cell
    chain = [s for s, n in reversed(sys.init_multiset.items()) for _ in range(n)]
    for n, s in enumerate(chain):
        label = _fresh(f"init{len(chain) - n}", taken)
        code[label] = [add(reg[s], start)]
        start = label
    return MachineProgram(len(order), len(sys.terminals),
                          {l: tuple(ins) for l, ins in code.items()}, start, blind=True)


def _polar(name: str, z: int) -> str:
    return name + {0: "", 1: "+", -1: "-"}[z]


def compile_rm_to_uptpv(p: MachineProgram) -> PtpvSystem:
    """Undirected polarized system simulating a general machine in sequ mode (term)."""
    if p.blind:
        raise ValidationError("expected a general register machine")
    for label, ins in p.code.items():
        ops = {i.op for i in ins}
        if Op.ADD in ops and Op.SUB in ops:
            raise ValidationError(f"label {label!r} mixes ADD and SUB")
    m, k = p.registers, p.outputs
    symbols, pol = [], {}
    for base in list(p.labels) + [reg_symbol(r) for r in range(1, m + 1)]:
        for z in (0, 1, -1):
            symbols.append(_polar(base, z))
            pol[_polar(base, z)] = z
    if len(set(symbols)) != len(symbols):
        raise ValidationError("machine labels clash with generated symbols")

    cell_pol = {"0": 0, "0'": 0, "00": 0, "0-": 0, "lh": 0, "lh~": 0}
    edges = [("0", "0'"), ("0", "00"), ("0", "0-"), ("0", "lh"), ("lh", "lh~")]
    for r in range(1, m + 1):
        c = {n: f"{n}:{r}" for n in ("r+", "r+~", "r0", "r0~", "r-", "r-~", "r-^")}
        cell_pol.update({c["r+"]: 1, c["r+~"]: 1, c["r0"]: -1, c["r0~"]: -1,
                         c["r-"]: 1, c["r-~"]: 0, c["r-^"]: -1})
        edges += [("0'", c["r+"]), (c["r+"], c["r+~"]), (c["r+~"], "0"),
                  ("0", c["r0"]), (c["r0"], c["r0~"]), (c["r0~"], "00"),
                  ("0", c["r-"]), (c["r-"], c["r-~"]), (c["r-~"], c["r-^"]), (c["r-^"], "0-")]

    rules = []
    for label, i in p.instructions():
        if i.op is Op.ADD:
            rules += [("0", substitute(label, label)), ("0'", substitute(label, label + "+")),
                      (f"r+~:{i.register}", substitute(label + "+", i.next1)),
                      (f"r+~:{i.register}", substitute(label + "+", i.next2))]
        elif i.op is Op.SUB:
            rules += [("0", substitute(label, label + "+")), ("0", substitute(label, label + "-")),
                      (f"r0~:{i.register}", substitute(label + "-", i.next2)),
                      (f"r-~:{i.register}", substitute(label + "+", i.next1))]
    rules.append(("0", substitute(p.halt_label, p.halt_label)))
    for r in range(1, m + 1):
        a = reg_symbol(r)
        rules += [(f"r+:{r}", insert(a)), (f"r0:{r}", substitute(a, a + "+")),
                  (f"r-:{r}", substitute(a, a + "-")), (f"r-^:{r}", delete(a + "-"))]
    rules.append(("lh", delete(p.halt_label)))

    cells = list(cell_pol)
    return PtpvSystem.undirected(
        cells=cells, alphabet=symbols, terminals=[reg_symbol(r) for r in range(1, k + 1)],
        free_rules=list(dict.fromkeys(rules)), init_cell="0", init_multiset=Multiset.of(p.init),
        output_cell="lh~", pol=PolarizationTable(cell_pol, pol), edges=edges)


@dataclass(frozen=True)
class BudgetMap:
    """System steps taken to simulate one machine step, by outcome.

    ``closing`` covers the HALT step; ``size_overhead`` is the label symbol the
    vesicle carries next to the register symbols.
    """

    add: int
    dec: int
    zero: int
    closing: int
    size_overhead: int = 1

    @property
    def steps_per_instruction(self) -> int:
        return max(self.add, self.dec, self.zero)

    def step_costs(self) -> dict:
        return {"add": self.add, "dec": self.dec, "zero": self.zero, "halt": self.closing}


# hop counts checked against shortest system derivations in tests/test_budget_maps.py
BUDGET_MAPS = {
    "thm1": BudgetMap(add=2, dec=2, zero=2, closing=1),
    "thm2": BudgetMap(add=2, dec=2, zero=2, closing=1),
    "thm5": BudgetMap(add=4, dec=5, zero=4, closing=2),
}

MODES = {"thm1": Mode.SMAX, "thm2": Mode.SEQU, "thm5": Mode.SEQU}
DEFAULT_STRATEGY = {"thm1": Strategy.HALT_TERM, "thm2": Strategy.TERM, "thm5": Strategy.TERM}


def matched_budgets(construction: str, machine_budget: SearchBudget) -> SearchBudget:
    """System budget admitting every computation that ``machine_budget`` admits.

    A machine run of N steps executes N - 1 instructions and then HALT.
    """
    bm = BUDGET_MAPS[construction]
    steps = bm.closing + bm.steps_per_instruction * max(machine_budget.max_steps - 1, 0)
    return SearchBudget(steps, machine_budget.max_state_size + bm.size_overhead,
                        machine_budget.max_states)


def compile_machine(construction: str, p: MachineProgram, strategy: Strategy | None = None):
    strategy = Strategy(strategy or DEFAULT_STRATEGY[construction])
    if construction == "thm1":
        return compile_rm_to_pv_smax(p, strategy)
    if construction == "thm2":
        return compile_pbrm_to_pv_sequ(p, strategy)
    if construction == "thm5":
        if strategy is not Strategy.TERM:
            raise ValueError("the polarized construction only supports the term strategy")
        return compile_rm_to_uptpv(p)
    raise ValueError(f"unknown machine construction {construction!r}")


def run_system(sys, mode, strategy, budget, **kw) -> ResultSet:
    if isinstance(sys, PtpvSystem):
        return ptpv_enumerate(sys, mode, strategy, budget, **kw)
    return tpv_enumerate(sys, mode, strategy, budget, **kw)


@dataclass(frozen=True)
class Comparison:
    """Machine-side and system-side results under matched budgets.

    ``oracle`` explores the machine on the system's step scale (each outcome
    weighted by the budget map); it is what the system result must equal.
    ``machine`` is the plain machine run, which the system must contain.
    """

    construction: str
    machine: ResultSet
    oracle: ResultSet
    system: ResultSet
    machine_budget: SearchBudget
    system_budget: SearchBudget

    @property
    def missing(self) -> set:
        return self.oracle.as_set() - self.system.as_set()

    @property
    def extra(self) -> set:
        return self.system.as_set() - self.oracle.as_set()

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra and self.machine.as_set() <= self.system.as_set()


def compare(construction: str, p: MachineProgram, machine_budget: SearchBudget,
            strategy: Strategy | None = None, workers: int = 1) -> Comparison:
    """Compile ``p`` and check the system against the machine under matched budgets.

    Strategies that demand a terminal-only output cannot report a halt with
    non-empty working registers, so those machine runs are left out of both
    machine-side sets (the usual convention that such registers end empty).
    """
    strategy = Strategy(strategy or DEFAULT_STRATEGY[construction])
    sys = compile_machine(construction, p, strategy)
    sys_budget = matched_budgets(construction, machine_budget)
    final_zero = p.blind or strategy is not Strategy.HALT
    machine = machine_enumerate(p, machine_budget, final_zero=final_zero, workers=workers)
    oracle_budget = replace(sys_budget, max_state_size=machine_budget.max_state_size)
    oracle = machine_enumerate(p, oracle_budget, final_zero=final_zero, workers=workers,
                               step_costs=BUDGET_MAPS[construction].step_costs())
    system = run_system(sys, MODES[construction], strategy, sys_budget, workers=workers)
    return Comparison(construction, machine, oracle, system, machine_budget, sys_budget)


def round_trip(sys: TpvSystem, budget: SearchBudget, workers: int = 1) -> tuple:
    """(system results, machine results) for the tPV -> blind machine compiler.

    The machine needs at most two steps per system step, plus the initial
    chain and the closing sequence, and one register more than the vesicle
    holds symbols.
    """
    machine = compile_tpv_to_pbrm(sys)
    m_budget = SearchBudget(2 * budget.max_steps + sys.init_multiset.size + 3,
                            budget.max_state_size + 1, budget.max_states)
    return (tpv_enumerate(sys, Mode.SEQU, Strategy.TERM, budget, workers=workers),
            machine_enumerate(machine, m_budget, workers=workers))
