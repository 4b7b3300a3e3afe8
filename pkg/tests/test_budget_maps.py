"""Hop counts of each simulated instruction, measured as shortest system paths."""
from collections import deque

import pytest

from tpvsim.constructions import BUDGET_MAPS, MODES, compile_machine
from tpvsim.multiset import Multiset
from tpvsim.ptpv import PtpvSystem, ptpv_successors
from tpvsim.regmach import HALT, MachineProgram, add, sub, sub_blind
from tpvsim.tpv import VesicleConfig, tpv_successors


def distance(sys, mode, start, goal, limit=20):
    succ = ((lambda c: ptpv_successors(sys, mode, c)) if isinstance(sys, PtpvSystem)
            else (lambda c: tpv_successors(sys, mode, c)))
    seen, queue = {start: 0}, deque([start])
    while queue:
        c = queue.popleft()
        if c == goal:
            return seen[c]
        if seen[c] < limit:
            for n in succ(c):
                if n not in seen:
                    seen[n] = seen[c] + 1
                    queue.append(n)
    return None


GENERAL = MachineProgram(2, 1, {"p": (add(2, "q", "q"),), "q": (sub(2, "t", "t"),),
                                "t": (HALT,)}, "p")
BLIND = MachineProgram(2, 1, {"p": (add(2, "q", "q"),), "q": (sub_blind(2, "t"),),
                              "t": (HALT,)}, "p", blind=True)
ROOT = "0"


def at(cell, *syms):
    return VesicleConfig(cell, Multiset.of(*syms))


@pytest.mark.parametrize("construction", ["thm1", "thm2", "thm5"])
def test_instruction_hops(construction):
    p = BLIND if construction == "thm2" else GENERAL
    sys = compile_machine(construction, p)
    mode, bm = MODES[construction], BUDGET_MAPS[construction]
    assert distance(sys, mode, at(ROOT, "p"), at(ROOT, "q", "a2")) == bm.add
    assert distance(sys, mode, at(ROOT, "q", "a2"), at(ROOT, "t")) == bm.dec
    if construction != "thm2":
        assert distance(sys, mode, at(ROOT, "q"), at(ROOT, "t")) == bm.zero
    out = sys.base.output_cell if isinstance(sys, PtpvSystem) else sys.output_cell
    assert distance(sys, mode, at(ROOT, "t"), at(out)) == bm.closing


def test_budget_map_entries_positive():
    for bm in BUDGET_MAPS.values():
        assert min(bm.add, bm.dec, bm.zero, bm.closing) >= 1
        assert bm.steps_per_instruction == max(bm.add, bm.dec, bm.zero)
