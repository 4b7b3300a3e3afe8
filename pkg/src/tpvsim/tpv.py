"""Tissue P systems working on a single vesicle of a multiset.

A configuration is the cell holding the vesicle plus the vesicle's content.
In ``sequ`` mode one applicable rule of the current cell fires; in ``smax``
mode a non-extendable set of distinct rules sharing one target fires.  The
vesicle then moves to the rules' target.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Sequence

from .errors import ValidationError
from .multiset import (Kind, Multiset, Mutation, applicable, apply_one, apply_set,
                       parikh)
from .search import ResultSet, SearchBudget, closure


class Mode(str, Enum):
    SEQU = "sequ"
    SMAX = "smax"


class Strategy(str, Enum):
    HALT = "halt"
    TERM = "term"
    HALT_TERM = "halt-term"

    @classmethod
    def parse(cls, text: str) -> Strategy:
        return cls(text.replace("_", "-").replace("(", "").replace(")", "").replace(",", "-"))


@dataclass(frozen=True)
class TpvRule:
    source: str
    mutation: Mutation
    target: str

    def __str__(self):
        return f"({self.source}, {self.mutation}, {self.target})"


@dataclass(frozen=True)
class TpvSystem:
    cells: tuple
    alphabet: tuple
    terminals: tuple
    rules: tuple
    init_cell: str
    init_multiset: Multiset
    output_cell: str
    by_cell: dict = field(init=False, compare=False, repr=False, hash=False)

    def __post_init__(self):
        for name in ("cells", "alphabet", "terminals", "rules"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        cells, V = set(self.cells), set(self.alphabet)
        if len(cells) != len(self.cells):
            raise ValidationError("duplicate cell")
        if len(V) != len(self.alphabet):
            raise ValidationError("duplicate alphabet symbol")
        if len(set(self.terminals)) != len(self.terminals):
            raise ValidationError("duplicate terminal symbol")
        if not set(self.terminals) <= V:
            raise ValidationError(f"terminals {sorted(set(self.terminals) - V)} not in the alphabet")
        for c in (self.init_cell, self.output_cell):
            if c not in cells:
                raise ValidationError(f"unknown cell {c!r}")
        if not self.init_multiset.support() <= V:
            raise ValidationError(f"initial multiset uses symbols outside the alphabet")
        if len(set(self.rules)) != len(self.rules):
            raise ValidationError("duplicate rule")
        by_cell = defaultdict(list)
        for r in self.rules:
            if r.source not in cells or r.target not in cells:
                raise ValidationError(f"rule {r} refers to an unknown cell")
            for s in (r.mutation.lhs, r.mutation.rhs):
                if s is not None and s not in V:
                    raise ValidationError(f"rule {r} uses symbol {s!r} outside the alphabet")
            by_cell[r.source].append(r)
        object.__setattr__(self, "by_cell", {c: tuple(by_cell[c]) for c in self.cells})

    def rules_of(self, cell: str) -> tuple:
        return self.by_cell.get(cell, ())

    @property
    def nonterminals(self) -> frozenset:
        return frozenset(self.alphabet) - frozenset(self.terminals)


@dataclass(frozen=True, order=True)
class VesicleConfig:
    cell: str
    content: Multiset

    def __len__(self):
        return self.content.size

    def __str__(self):
        return f"cell {self.cell} {self.content}"


class CommGraph(NamedTuple):
    nodes: tuple
    edges: tuple


def comm_graph(sys: TpvSystem) -> CommGraph:
    edges = dict.fromkeys((r.source, r.target) for r in sys.rules)
    return CommGraph(sys.cells, tuple(edges))


def _is_tree(nodes: Sequence[str], pairs: Iterable[tuple], root: str) -> bool:
    undirected = {frozenset(p) for p in pairs if p[0] != p[1]}
    if len(undirected) != len(nodes) - 1:
        return False
    adj = defaultdict(set)
    for e in undirected:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {root}, [root]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return seen == set(nodes)


def is_hierarchical(sys: TpvSystem) -> bool:
    """Communication graph (loops dropped, direction ignored) is a tree spanning all cells."""
    return _is_tree(sys.cells, comm_graph(sys).edges, sys.init_cell)


def is_hybrid(sys: TpvSystem) -> bool:
    return all(len({r.mutation.kind for r in rules}) <= 1 for rules in sys.by_cell.values())


def maximal_sets(w: Multiset, items: Sequence, mutation=lambda x: x) -> list:
    """All non-empty non-extendable subsets of ``items`` jointly applicable to ``w``.

    Insertions are always in; for each consumed symbol ``a`` exactly
    ``min(count(w, a), #rules consuming a)`` of its rules are chosen.
    """
    inserts, consumers = [], defaultdict(list)
    for it in items:
        m = mutation(it)
        if m.kind is Kind.INSERT:
            inserts.append(it)
        elif w.count(m.lhs):
            consumers[m.lhs].append(it)
    groups = [itertools.combinations(g, min(w.count(a), len(g))) for a, g in consumers.items()]
    out = []
    for pick in itertools.product(*groups):
        chosen = tuple(inserts) + tuple(x for combo in pick for x in combo)
        if chosen:
            out.append(chosen)
    return out


def smax_choices(sys: TpvSystem, cfg: VesicleConfig) -> list:
    """``(target, rules)`` pairs; maximality is taken per target."""
    by_target = defaultdict(list)
    for r in sys.rules_of(cfg.cell):
        by_target[r.target].append(r)
    return [(j, s) for j, rules in by_target.items()
            for s in maximal_sets(cfg.content, rules, lambda r: r.mutation)]


def tpv_successors(sys: TpvSystem, mode: Mode, cfg: VesicleConfig) -> set:
    w = cfg.content
    if Mode(mode) is Mode.SEQU:
        return {VesicleConfig(r.target, apply_one(w, r.mutation))
                for r in sys.rules_of(cfg.cell) if applicable(w, r.mutation)}
    return {VesicleConfig(j, apply_set(w, [r.mutation for r in s]))
            for j, s in smax_choices(sys, cfg)}


def is_halting(sys: TpvSystem, cfg: VesicleConfig) -> bool:
    return not any(applicable(cfg.content, r.mutation) for r in sys.rules_of(cfg.cell))


def has_residue(sys: TpvSystem, w: Multiset) -> bool:
    return not w.support() <= frozenset(sys.terminals)


def record_result(sys: TpvSystem, strategy: Strategy, cfg: VesicleConfig,
                  halting: bool) -> tuple | None:
    """Terminal Parikh vector of ``cfg`` if it counts as a result, else ``None``.

    Under ``halt`` a vesicle with nonterminals still yields its terminal
    projection; :func:`has_residue` tells such results apart.
    """
    if cfg.cell != sys.output_cell:
        return None
    strategy = Strategy(strategy)
    if strategy is not Strategy.TERM and not halting:
        return None
    if strategy is not Strategy.HALT and has_residue(sys, cfg.content):
        return None
    return parikh(cfg.content, sys.terminals)


def initial_config(sys: TpvSystem) -> VesicleConfig:
    return VesicleConfig(sys.init_cell, sys.init_multiset)


def recorder(sys: TpvSystem, strategy: Strategy):
    def record(cfg, halting, diag):
        v = record_result(sys, strategy, cfg, halting)
        if v is not None and has_residue(sys, cfg.content):
            diag["nonterminal_residue_results"] += 1
        return v
    return record


def tpv_enumerate(sys: TpvSystem, mode: Mode, strategy: Strategy, budget: SearchBudget,
                  *, workers: int = 1, keep_witnesses: bool = False) -> ResultSet:
    mode = Mode(mode)
    return closure(initial_config(sys), lambda c: tpv_successors(sys, mode, c),
                   recorder(sys, strategy), budget, workers=workers,
                   keep_witnesses=keep_witnesses)


def explain_step(sys: TpvSystem, mode: Mode, cfg: VesicleConfig, nxt: VesicleConfig) -> list:
    """Rule sets of ``cfg.cell`` that turn ``cfg`` into ``nxt`` (empty if none do)."""
    if Mode(mode) is Mode.SEQU:
        return [(r,) for r in sys.rules_of(cfg.cell)
                if r.target == nxt.cell and applicable(cfg.content, r.mutation)
                and apply_one(cfg.content, r.mutation) == nxt.content]
    return [s for j, s in smax_choices(sys, cfg)
            if j == nxt.cell and apply_set(cfg.content, [r.mutation for r in s]) == nxt.content]
