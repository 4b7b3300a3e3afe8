"""Register machines and partially blind register machines (generating mode).

Labels may carry several instructions ("relaxed" labeling); a strictly labeled
program is the special case with one instruction per label.  Registers are
numbered from 1 in instructions and stored 0-based in configurations.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

from .errors import ContractError, ValidationError
from .search import ResultSet, SearchBudget, closure


class Op(str, Enum):
    ADD = "ADD"
    SUB = "SUB"
    SUB_BLIND = "SUBB"
    HALT = "HALT"


@dataclass(frozen=True)
class Instruction:
    op: Op
    register: int | None = None
    next1: str | None = None
    next2: str | None = None

    def __post_init__(self):
        if self.op is Op.HALT:
            if (self.register, self.next1, self.next2) != (None, None, None):
                raise ValidationError("HALT takes no operands")
        elif self.op is Op.SUB_BLIND:
            if self.register is None or self.next1 is None or self.next2 is not None:
                raise ValidationError("blind SUB takes a register and one successor")
        elif self.register is None or self.next1 is None or self.next2 is None:
            raise ValidationError(f"{self.op.value} takes a register and two successors")

    def targets(self) -> tuple:
        return tuple(t for t in (self.next1, self.next2) if t is not None)


def add(r: int, q: str, s: str | None = None) -> Instruction:
    return Instruction(Op.ADD, r, q, q if s is None else s)


def sub(r: int, q: str, s: str) -> Instruction:
    return Instruction(Op.SUB, r, q, s)


def sub_blind(r: int, q: str) -> Instruction:
    return Instruction(Op.SUB_BLIND, r, q)


HALT = Instruction(Op.HALT)


@dataclass(frozen=True)
class MachineProgram:
    """``registers`` = m, ``outputs`` = k; ``code`` maps labels to their instructions."""

    registers: int
    outputs: int
    code: Mapping[str, tuple]
    init: str
    blind: bool = False

    def __post_init__(self):
        m, k = self.registers, self.outputs
        if m < 1 or not 0 <= k <= m:
            raise ValidationError(f"need 1 <= m and 0 <= k <= m, got m={m}, k={k}")
        if self.init not in self.code:
            raise ValidationError(f"initial label {self.init!r} has no instruction")
        halts = [l for l, ins in self.code.items() if any(i.op is Op.HALT for i in ins)]
        if not halts:
            raise ValidationError("program has no HALT instruction")
        if len(halts) > 1:
            raise ValidationError(f"HALT appears under several labels: {halts}")
        for label, ins in self.code.items():
            if not ins:
                raise ValidationError(f"label {label!r} has no instruction")
            if len(set(ins)) != len(ins):
                raise ValidationError(f"duplicate instruction at {label!r}")
            if label == halts[0] and len(ins) != 1:
                raise ValidationError("the halting label carries only HALT")
            for i in ins:
                if i.op is Op.HALT:
                    continue
                if not 1 <= i.register <= m:
                    raise ValidationError(f"register {i.register} out of range at {label!r}")
                if i.op is Op.SUB and self.blind:
                    raise ValidationError(f"two-branch SUB in a partially blind program at {label!r}")
                if i.op is Op.SUB_BLIND and not self.blind:
                    raise ValidationError(f"blind SUB in a general program at {label!r}")
                for t in i.targets():
                    if t not in self.code:
                        raise ValidationError(f"label {t!r} referenced at {label!r} is undefined")

    @property
    def halt_label(self) -> str:
        return next(l for l, ins in self.code.items() if ins[0].op is Op.HALT)

    @property
    def labels(self) -> tuple:
        return tuple(self.code)

    @property
    def kind(self) -> str:
        return "blind" if self.blind else "general"

    def is_strict(self) -> bool:
        return all(len(ins) == 1 for ins in self.code.values())

    def instructions(self) -> Iterator[tuple]:
        for label, ins in self.code.items():
            for i in ins:
                yield label, i


@dataclass(frozen=True, order=True)
class MachineConfig:
    label: str
    regs: tuple

    @classmethod
    def initial(cls, p: MachineProgram) -> MachineConfig:
        return cls(p.init, (0,) * p.registers)


def transitions(p: MachineProgram, c: MachineConfig) -> Iterator[tuple]:
    """Yield ``(outcome, successor)`` with outcome in add/dec/zero."""
    try:
        ins = p.code[c.label]
    except KeyError:
        raise ContractError(f"unknown label {c.label!r}") from None
    for i in ins:
        if i.op is Op.HALT:
            continue
        r = i.register - 1
        regs = list(c.regs)
        if i.op is Op.ADD:
            regs[r] += 1
            regs = tuple(regs)
            yield "add", MachineConfig(i.next1, regs)
            if i.next2 != i.next1:
                yield "add", MachineConfig(i.next2, regs)
        elif regs[r] > 0:
            regs[r] -= 1
            yield "dec", MachineConfig(i.next1, tuple(regs))
        elif i.op is Op.SUB:
            yield "zero", MachineConfig(i.next2, c.regs)
        # blind SUB on an empty register aborts: no successor


def machine_step(p: MachineProgram, c: MachineConfig) -> set:
    return {nxt for _, nxt in transitions(p, c)}


def is_accepting(p: MachineProgram, c: MachineConfig) -> bool:
    if c.label != p.halt_label:
        return False
    return not p.blind or not any(c.regs[p.outputs:])


# search states: (phase, label, regs, wait); phase 1 marks an executed HALT
_RUN, _HALTED = 0, 1


def machine_enumerate(
    p: MachineProgram,
    budget: SearchBudget,
    *,
    step_costs: Mapping[str, int] | None = None,
    final_zero: bool | None = None,
    workers: int = 1,
    keep_witnesses: bool = False,
) -> ResultSet:
    """Output vectors of all accepting computations that fit in ``budget``.

    Executing an instruction, HALT included, costs one step.  ``step_costs``
    overrides that per outcome (keys ``add``, ``dec``, ``zero``, ``halt``) so a
    machine can be explored on the step scale of a system simulating it.
    ``final_zero`` demands empty working registers at HALT; it defaults to
    the machine kind (on for partially blind machines).
    """
    costs = {"add": 1, "dec": 1, "zero": 1, "halt": 1}
    if step_costs:
        costs.update(step_costs)
    halt_label = p.halt_label
    if final_zero is None:
        final_zero = p.blind

    def successors(state):
        phase, label, regs, wait = state
        if wait:
            return [(phase, label, regs, wait - 1)]
        if phase == _HALTED:
            return []
        if label == halt_label:
            return [(_HALTED, "", regs, costs["halt"] - 1)]
        return [(_RUN, nxt.label, nxt.regs, costs[kind] - 1)
                for kind, nxt in transitions(p, MachineConfig(label, regs))]

    def record(state, halting, diag):
        phase, _, regs, wait = state
        if phase == _HALTED and not wait and (not final_zero or not any(regs[p.outputs:])):
            return regs[:p.outputs]
        return None

    start = (_RUN, p.init, (0,) * p.registers, 0)
    res = closure(start, successors, record, budget, size=lambda s: sum(s[2]),
                  workers=workers, keep_witnesses=keep_witnesses)
    if keep_witnesses and res.witnesses is not None:
        paths = {v: tuple(MachineConfig(s[1], s[2]) for s in path if s[0] == _RUN and not s[3])
                 for v, path in res.witnesses.items()}
        res = ResultSet(res.vectors, res.diagnostics, paths)
    return res
