"""Polarized tissue P systems on vesicles (directed ptPV and undirected uptPV).

A step has two substeps: evolution by the derivation mode, then the vesicle
moves to a *different* cell whose polarization equals the sign of the summed
symbol polarizations of the new content.  A vesicle with no such cell is
eliminated, which ends that branch.

Evolution may be empty only when no rule of the cell is applicable: cells
without applicable rules are passed through unchanged, but an applicable rule
cannot be skipped.  ``always_idle=True`` instead offers the unchanged content
alongside every rule application.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .multiset import Multiset, PolarizationTable, applicable, apply_set, evaluate_sum, sign
from .search import ResultSet, SearchBudget, closure
from .tpv import (Mode, Strategy, TpvRule, TpvSystem, VesicleConfig, _is_tree,
                  has_residue, initial_config, maximal_sets, record_result, smax_choices)

SUM = "sum"


@dataclass(frozen=True)
class PtpvSystem:
    """``edges`` is ``None`` for directed systems, else the undirected graph G.

    In the undirected case rules are declared without targets (``free_rules``,
    pairs of cell and mutation); ``base.rules`` holds their expansion to every
    G-neighbour.
    """

    base: TpvSystem
    pol: PolarizationTable
    edges: frozenset | None = None
    free_rules: tuple = ()
    evaluation: str = SUM
    neighbours: dict = field(init=False, compare=False, repr=False, hash=False)
    mutations: dict = field(init=False, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.evaluation != SUM:
            raise ValidationError(f"unsupported evaluation function {self.evaluation!r}")
        b, pol = self.base, self.pol
        for c in b.cells:
            if c not in pol.cell_pol:
                raise ValidationError(f"cell {c!r} has no polarization")
        for s in b.alphabet:
            if s not in pol.sym_pol:
                raise ValidationError(f"symbol {s!r} has no polarization")
        for t in b.terminals:
            if pol.sym_pol[t] != 0:
                raise ValidationError(f"terminal {t!r} must have polarization 0")
        if pol.cell_pol[b.output_cell] != 0:
            raise ValidationError(f"output cell {b.output_cell!r} must have polarization 0")
        s0 = sign(evaluate_sum(b.init_multiset, pol))
        if s0 != pol.cell_pol[b.init_cell]:
            raise ValidationError(
                f"initial multiset has sign {s0:+d} but cell {b.init_cell!r} "
                f"has polarization {pol.cell_pol[b.init_cell]:+d}")
        nbrs = {c: set() for c in b.cells}
        if self.edges is None:
            if self.free_rules:
                raise ValidationError("targetless rules need an undirected graph")
            for r in b.rules:
                nbrs[r.source].add(r.target)
            muts = {c: tuple(dict.fromkeys(r.mutation for r in b.rules_of(c))) for c in b.cells}
        else:
            for e in self.edges:
                if len(e) != 2 or not set(e) <= set(b.cells):
                    raise ValidationError(f"bad edge {sorted(e)}")
                i, j = tuple(e)
                nbrs[i].add(j)
                nbrs[j].add(i)
            for r in b.rules:
                if frozenset((r.source, r.target)) not in self.edges:
                    raise ValidationError(f"rule {r} does not follow an edge of G")
            muts = {c: [] for c in b.cells}
            for c, m in self.free_rules:
                if c not in muts:
                    raise ValidationError(f"rule for unknown cell {c!r}")
                muts[c].append(m)
            muts = {c: tuple(ms) for c, ms in muts.items()}
        for c in nbrs:
            nbrs[c].discard(c)
        object.__setattr__(self, "neighbours", {c: tuple(sorted(n)) for c, n in nbrs.items()})
        object.__setattr__(self, "mutations", muts)

    @property
    def directed(self) -> bool:
        return self.edges is None

    @classmethod
    def undirected(cls, cells, alphabet, terminals, free_rules, init_cell, init_multiset,
                   output_cell, pol, edges) -> PtpvSystem:
        """Build a uptPV system, expanding each ``(cell, mutation)`` along G."""
        edges = frozenset(frozenset(e) for e in edges)
        free_rules = tuple(free_rules)
        if len(set(free_rules)) != len(free_rules):
            raise ValidationError("duplicate rule")
        adj = {c: [] for c in cells}
        for e in sorted(edges, key=sorted):
            i, j = sorted(e)
            adj.setdefault(i, []).append(j)
            adj.setdefault(j, []).append(i)
        rules = [TpvRule(c, m, j) for c, m in free_rules for j in sorted(adj.get(c, ()))]
        base = TpvSystem(cells, alphabet, terminals, rules, init_cell, init_multiset, output_cell)
        return cls(base, pol, edges, free_rules)

    def value(self, w: Multiset) -> int:
        return evaluate_sum(w, self.pol)


def _rule_sets(sys, mode, w, cell):
    """Non-empty mutation sets the derivation mode may apply to ``w`` in ``cell``."""
    if Mode(mode) is Mode.SEQU:
        return [(m,) for m in sys.mutations[cell] if applicable(w, m)]
    if sys.directed:
        return [tuple(r.mutation for r in s)
                for _, s in smax_choices(sys.base, VesicleConfig(cell, w))]
    return [tuple(s) for s in maximal_sets(w, sys.mutations[cell])]


def evolution_substep(sys: PtpvSystem, mode: Mode, cfg: VesicleConfig,
                      *, always_idle: bool = False) -> set:
    w = cfg.content
    out = {apply_set(w, s) for s in _rule_sets(sys, mode, w, cfg.cell)}
    if always_idle or not out:
        out.add(w)
    return out


def candidate_cells(sys: PtpvSystem, source: str, w: Multiset) -> tuple:
    s = sign(sys.value(w))
    return tuple(j for j in sys.neighbours[source] if sys.pol.cell_pol[j] == s)


def _moves(sys, mode, cfg, always_idle):
    """(successors, number of evolved multisets that found no cell)."""
    succs, dead = set(), 0
    for w in evolution_substep(sys, mode, cfg, always_idle=always_idle):
        targets = candidate_cells(sys, cfg.cell, w)
        if not targets:
            dead += 1
        succs.update(VesicleConfig(j, w) for j in targets)
    return succs, dead


def ptpv_successors(sys: PtpvSystem, mode: Mode, cfg: VesicleConfig,
                    *, always_idle: bool = False) -> set:
    return _moves(sys, mode, cfg, always_idle)[0]


def ptpv_enumerate(sys: PtpvSystem, mode: Mode, strategy: Strategy, budget: SearchBudget,
                   *, workers: int = 1, keep_witnesses: bool = False,
                   always_idle: bool = False) -> ResultSet:
    mode = Mode(mode)
    eliminated = {}

    def successors(cfg):
        succs, dead = _moves(sys, mode, cfg, always_idle)
        eliminated[cfg] = dead
        return succs

    def record(cfg, halting, diag):
        diag["eliminated_branches"] += eliminated.pop(cfg, 0)
        v = record_result(sys.base, strategy, cfg, halting)
        if v is not None and has_residue(sys.base, cfg.content):
            diag["nonterminal_residue_results"] += 1
        return v

    return closure(initial_config(sys.base), successors, record, budget,
                   workers=workers, keep_witnesses=keep_witnesses)


def explain_step(sys: PtpvSystem, mode: Mode, cfg: VesicleConfig, nxt: VesicleConfig,
                 *, always_idle: bool = False) -> list:
    """Mutation sets (``()`` for an empty evolution) leading from ``cfg`` to ``nxt``."""
    if nxt.cell not in candidate_cells(sys, cfg.cell, nxt.content):
        return []
    w = cfg.content
    sets = _rule_sets(sys, mode, w, cfg.cell)
    found = [s for s in dict.fromkeys(sets) if apply_set(w, s) == nxt.content]
    if nxt.content == w and (always_idle or not sets):
        found.append(())
    return found


def is_hierarchical(sys: PtpvSystem) -> bool:
    pairs = [tuple(e) for e in sys.edges] if sys.edges is not None else \
        [(r.source, r.target) for r in sys.base.rules]
    return _is_tree(sys.base.cells, pairs, sys.base.init_cell)
