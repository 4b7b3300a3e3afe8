"""Bounded breadth-first closure over a nondeterministic successor relation.

The three simulators (register machines, plain and polarized vesicle systems)
all enumerate their result sets through :func:`closure`.  States are expanded
layer by layer; each layer is sorted before it is processed, so the result set
and every counter are independent of the number of worker threads.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Optional

Vector = tuple

PRUNING = ("steps_pruned", "size_pruned", "states_pruned")
COUNTERS = PRUNING + ("nonterminal_residue_results", "eliminated_branches")


@dataclass(frozen=True)
class SearchBudget:
    max_steps: int
    max_state_size: int
    max_states: int = 1_000_000

    def __post_init__(self):
        # zero steps is meaningful (initial state only); the caps must be positive
        if self.max_steps < 0 or self.max_state_size < 1 or self.max_states < 1:
            raise ValueError(f"invalid budget {self}")

    def covers(self, other: SearchBudget) -> bool:
        return (self.max_steps >= other.max_steps
                and self.max_state_size >= other.max_state_size
                and self.max_states >= other.max_states)


@dataclass(frozen=True)
class ResultSet:
    vectors: tuple
    diagnostics: Mapping[str, int]
    witnesses: Optional[Mapping[Vector, tuple]] = field(default=None, compare=False, repr=False)

    @property
    def complete(self) -> bool:
        return not any(self.diagnostics.get(c, 0) for c in PRUNING)

    def __contains__(self, v):
        return tuple(v) in set(self.vectors)

    def as_set(self) -> set:
        return set(self.vectors)

    def footer(self) -> str:
        d = self.diagnostics
        parts = [f"complete={'true' if self.complete else 'false'}",
                 f"results={len(self.vectors)}",
                 f"states={d.get('states_visited', 0)}"]
        parts += [f"{c}={d.get(c, 0)}" for c in COUNTERS]
        return "# " + " ".join(parts)


def closure(
    initial: Hashable,
    successors: Callable[[Hashable], Iterable[Hashable]],
    record: Callable[[Hashable, bool, Counter], Optional[Vector]],
    budget: SearchBudget,
    *,
    size: Callable[[Hashable], int] = len,
    key: Optional[Callable] = None,
    workers: int = 1,
    keep_witnesses: bool = False,
) -> ResultSet:
    """Collect the vectors ``record`` emits over all states reachable within ``budget``.

    ``record(state, halting, diag)`` is called once per visited state, serially,
    and may bump counters in ``diag``.  ``halting`` is true iff the state has no
    successors.  Visited-state deduplication is global, which is sound because
    every client's successor relation and recording depend on the state alone.
    """
    diag = Counter({c: 0 for c in COUNTERS})
    results = set()
    witnesses = {}
    parent = {initial: None} if keep_witnesses else None

    if size(initial) > budget.max_state_size:
        diag["size_pruned"] += 1
        return _finish(results, diag, 0, witnesses)

    visited = {initial}
    layer = [initial]
    pruned = {c: set() for c in PRUNING}
    depth = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while layer:
            if pool is None:
                expanded = [list(successors(s)) for s in layer]
            else:
                expanded = list(pool.map(lambda s: list(successors(s)), layer,
                                         chunksize=max(1, len(layer) // (4 * workers))))
            nxt = []
            for state, succs in zip(layer, expanded):
                v = record(state, not succs, diag)
                if v is not None:
                    v = tuple(v)
                    if v not in results:
                        results.add(v)
                        if keep_witnesses:
                            witnesses[v] = _path(parent, state)
                for s in sorted(set(succs), key=key):
                    if s in visited:
                        continue
                    if depth >= budget.max_steps:
                        pruned["steps_pruned"].add(s)
                    elif size(s) > budget.max_state_size:
                        pruned["size_pruned"].add(s)
                    elif len(visited) >= budget.max_states:
                        pruned["states_pruned"].add(s)
                    else:
                        visited.add(s)
                        nxt.append(s)
                        if keep_witnesses:
                            parent[s] = state
            layer = sorted(nxt, key=key)
            depth += 1
    finally:
        if pool is not None:
            pool.shutdown()
    for c, states in pruned.items():
        diag[c] = len(states)
    return _finish(results, diag, len(visited), witnesses if keep_witnesses else None)


def _path(parent, state):
    path = []
    while state is not None:
        path.append(state)
        state = parent[state]
    return tuple(reversed(path))


def _finish(results, diag, visited, witnesses):
    diag["states_visited"] = visited
    return ResultSet(tuple(sorted(results)), dict(diag), witnesses)
