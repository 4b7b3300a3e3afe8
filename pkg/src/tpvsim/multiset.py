"""Multisets over string symbols and single-symbol point mutations.

Symbols are plain ``str`` values; two symbols are equal iff their names are.
``"#"`` is an ordinary symbol as far as this module is concerned.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, ValidationError


@total_ordering
class Multiset:
    """Immutable finite multiset. Hashable and totally ordered (by sorted items)."""

    __slots__ = ("_counts", "_items", "_hash", "size")

    def __init__(self, counts: Mapping[str, int] | Iterable[str] | None = None):
        if counts is None:
            counts = {}
        elif not isinstance(counts, Mapping):
            counts = Counter(counts)
        clean = {}
        for sym, n in counts.items():
            if n < 0:
                raise ValueError(f"negative count for {sym!r}")
            if n:
                clean[sym] = n
        self._items = tuple(sorted(clean.items()))
        self._counts = dict(self._items)
        self._hash = hash(self._items)
        self.size = sum(clean.values())

    @classmethod
    def of(cls, *symbols: str) -> Multiset:
        return cls(symbols)

    def count(self, sym: str) -> int:
        return self._counts.get(sym, 0)

    def items(self):
        return self._items

    def support(self) -> frozenset:
        return frozenset(self._counts)

    def includes(self, other: Multiset) -> bool:
        """Containment: every symbol of ``other`` occurs here at least as often."""
        return all(self._counts.get(s, 0) >= n for s, n in other._items)

    def __add__(self, other: Multiset) -> Multiset:
        c = Counter(self._counts)
        c.update(other._counts)
        return Multiset(c)

    def __len__(self):
        return self.size

    def __bool__(self):
        return bool(self._items)

    def __contains__(self, sym):
        return sym in self._counts

    def __eq__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._items == other._items

    def __lt__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._items < other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Multiset({self._counts!r})"

    def __str__(self):
        parts = [s if n == 1 else f"{s}*{n}" for s, n in self._items]
        return "{" + " ".join(parts) + "}"


EMPTY = Multiset()


class Kind(str, Enum):
    INSERT = "insert"
    DELETE = "delete"
    SUBSTITUTE = "substitute"


@dataclass(frozen=True)
class Mutation:
    """A point mutation ``lhs -> rhs``; ``None`` stands for the empty word."""

    kind: Kind
    lhs: str | None = None
    rhs: str | None = None

    def __post_init__(self):
        ok = {
            Kind.INSERT: self.lhs is None and self.rhs is not None,
            Kind.DELETE: self.lhs is not None and self.rhs is None,
            Kind.SUBSTITUTE: self.lhs is not None and self.rhs is not None,
        }[self.kind]
        if not ok:
            raise ValidationError(f"malformed {self.kind.value} rule {self.lhs!r} -> {self.rhs!r}")

    def __str__(self):
        if self.kind is Kind.INSERT:
            return f"+{self.rhs}"
        if self.kind is Kind.DELETE:
            return f"{self.lhs}-"
        return f"{self.lhs}=>{self.rhs}"


def insert(b: str) -> Mutation:
    return Mutation(Kind.INSERT, None, b)


def delete(a: str) -> Mutation:
    return Mutation(Kind.DELETE, a, None)


def substitute(a: str, b: str) -> Mutation:
    return Mutation(Kind.SUBSTITUTE, a, b)


def applicable(w: Multiset, m: Mutation) -> bool:
    return m.kind is Kind.INSERT or w.count(m.lhs) >= 1


def apply_one(w: Multiset, m: Mutation) -> Multiset:
    if not applicable(w, m):
        raise ContractError(f"rule {m} not applicable to {w}")
    c = dict(w.items())
    if m.lhs is not None:
        c[m.lhs] -= 1
    if m.rhs is not None:
        c[m.rhs] = c.get(m.rhs, 0) + 1
    return Multiset(c)


def demand(ms: Iterable[Mutation]) -> Counter:
    """Total number of occurrences consumed by a collection of rules."""
    return Counter(m.lhs for m in ms if m.lhs is not None)


def jointly_applicable(w: Multiset, ms: Iterable[Mutation]) -> bool:
    return all(w.count(s) >= n for s, n in demand(ms).items())


def apply_set(w: Multiset, ms: Iterable[Mutation]) -> Multiset:
    ms = list(ms)
    if len(set(ms)) != len(ms):
        raise ContractError("rule set contains duplicates")
    if not jointly_applicable(w, ms):
        raise ContractError(f"rules {[str(m) for m in ms]} not jointly applicable to {w}")
    c = Counter(dict(w.items()))
    c.subtract(demand(ms))
    c.update(m.rhs for m in ms if m.rhs is not None)
    return Multiset(c)


def parikh(w: Multiset, order: Sequence[str]) -> tuple[int, ...]:
    if len(set(order)) != len(order):
        raise ContractError("duplicate symbol in Parikh order")
    return tuple(w.count(s) for s in order)


@dataclass(frozen=True)
class PolarizationTable:
    cell_pol: Mapping[str, int]
    sym_pol: Mapping[str, int]

    def __post_init__(self):
        for table in (self.cell_pol, self.sym_pol):
            for name, p in table.items():
                if p not in (-1, 0, 1):
                    raise ValidationError(f"polarization of {name!r} must be -1, 0 or 1, got {p}")

    def __hash__(self):
        return hash((tuple(sorted(self.cell_pol.items())), tuple(sorted(self.sym_pol.items()))))


def sign(x: int) -> int:
    return (x > 0) - (x < 0)


def evaluate_sum(w: Multiset, pol: PolarizationTable) -> int:
    total = 0
    for s, n in w.items():
        try:
            total += n * pol.sym_pol[s]
        except KeyError:
            raise ValidationError(f"symbol {s!r} has no polarization") from None
    return total
