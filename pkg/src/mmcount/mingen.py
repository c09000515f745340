"""Minimal generators of a transaction database as minimal models.

Each item ``a`` gets a variable ``p_a`` and each transaction ``i`` a
variable ``q_i``; transaction ``i`` contributes the clause
``q_i | OR(p_a for a not in I_i)``.  The true ``p`` variables of a minimal
model form a minimal generator and its true ``q`` variables the cover.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .formula import CnfFormula

BRUTE_FORCE_MAX_ITEMS = 16


class TransactionParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class TransactionDb:
    items: tuple[int, ...]
    transactions: tuple[tuple[int, frozenset[int]], ...]
    names: dict[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ids = [i for i, _ in self.transactions]
        if len(set(ids)) != len(ids):
            raise ValueError("transaction ids must be unique")
        universe = set(self.items)
        for i, its in self.transactions:
            if not its <= universe:
                raise ValueError(f"transaction {i} mentions items outside the universe")

    @classmethod
    def from_itemsets(cls, itemsets: Iterable[Iterable[int]], items: Iterable[int] = ()) -> "TransactionDb":
        txns = tuple((i, frozenset(s)) for i, s in enumerate(itemsets, start=1))
        universe = set(items).union(*(s for _, s in txns)) if txns else set(items)
        return cls(tuple(sorted(universe)), txns)


def parse_transactions(text: str) -> TransactionDb:
    """One transaction per non-blank line of whitespace-separated item ids.

    Transactions are numbered 1, 2, ... in order, blank lines skipped.
    """
    txns = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        items = set()
        for m in re.finditer(r"\S+", line):
            if not m.group().isdigit():
                raise TransactionParseError(f"bad item id {m.group()!r}", lineno, m.start() + 1)
            items.add(int(m.group()))
        txns.append(items)
    return TransactionDb.from_itemsets(txns)


def read_transactions(path) -> TransactionDb:
    with open(path, encoding="utf-8") as fh:
        return parse_transactions(fh.read())


@dataclass(frozen=True)
class MingenEncoding:
    formula: CnfFormula
    item_var: dict[int, int]
    txn_var: dict[int, int]

    @property
    def num_literals(self) -> int:
        return sum(len(c) for c in self.formula.clauses)


def encode_mingen(db: TransactionDb) -> MingenEncoding:
    """Item variables come first (in item order), then one per transaction."""
    item_var = {a: k for k, a in enumerate(db.items, start=1)}
    base = len(item_var)
    txn_var = {i: base + k for k, (i, _) in enumerate(db.transactions, start=1)}
    clauses = []
    for i, its in db.transactions:
        clauses.append((txn_var[i],) + tuple(item_var[a] for a in db.items if a not in its))
    return MingenEncoding(CnfFormula(base + len(txn_var), tuple(clauses)), item_var, txn_var)


def decode_generator(sigma: Iterable[int], enc: MingenEncoding) -> tuple[frozenset[int], frozenset[int]]:
    """``(itemset, cover ids)`` read off a minimal model."""
    s = set(sigma)
    items = frozenset(a for a, v in enc.item_var.items() if v in s)
    ids = frozenset(i for i, v in enc.txn_var.items() if v in s)
    return items, ids


def cover(itemset: Iterable[int], db: TransactionDb) -> frozenset[int]:
    j = frozenset(itemset)
    return frozenset(i for i, its in db.transactions if j <= its)


def brute_force_min_generators(db: TransactionDb,
                               max_items: int = BRUTE_FORCE_MAX_ITEMS) -> set[frozenset[int]]:
    """Itemsets whose cover strictly grows when any single item is removed.

    Cover is antitone, so testing the immediate subsets is enough.
    """
    if len(db.items) > max_items:
        raise ValueError(f"brute force refused: {len(db.items)} items exceeds {max_items}")
    out = set()
    for r in range(len(db.items) + 1):
        for combo in combinations(db.items, r):
            itemset = frozenset(combo)
            c = cover(itemset, db)
            if all(c < cover(itemset - {a}, db) for a in itemset):
                out.add(itemset)
    return out

