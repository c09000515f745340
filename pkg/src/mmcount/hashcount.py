"""Hashing-based probabilistic lower bounds on the number of minimal models.

Random XOR constraints ``Q1, Q2, ...`` over an independent support are
added as a nested prefix.  A galloping/bisection search finds the largest
``m`` such that some minimal model survives ``Q1..Qm``; with
``alpha = 1 - log2(delta)``, ``2 ** (m - alpha)`` is a lower bound that holds
with probability at least ``1 - delta``.
"""
from __future__ import annotations

import itertools
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .formula import Assignment, CnfFormula, VarSet
from .minmodel import MinimalModelSearch
from .results import LowerBoundResult
from .sat import Budget, BudgetExceeded, SolverSession, Status

log = logging.getLogger(__name__)

DEFAULT_DELTA = 0.2
CHUNK_WIDTH = 4


@dataclass(frozen=True)
class XorConstraint:
    """``x_1 xor ... xor x_k xor parity``.

    With ``parity=1`` the constraint holds iff an even number of the
    variables are true; with ``parity=0`` iff an odd number are.
    """

    variables: tuple[int, ...]
    parity: int

    def holds(self, assignment: Iterable[int]) -> bool:
        a = assignment if isinstance(assignment, (set, frozenset)) else set(assignment)
        return (sum(1 for v in self.variables if v in a) + self.parity) % 2 == 1


@dataclass(frozen=True)
class XorPool:
    constraints: tuple[XorConstraint, ...]
    seed: int
    support: tuple[int, ...]

    def __len__(self):
        return len(self.constraints)


def alpha(delta: float) -> float:
    """Precision slack ``1 - log2(delta)``."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return -math.log2(delta) + 1


def sample_xors(xs: Iterable[int], seed: int) -> XorPool:
    """``|xs| - 1`` constraints, each variable and the parity drawn by fair coins."""
    support = tuple(sorted(xs))
    if not support:
        raise ValueError("empty support")
    rng = np.random.default_rng(seed)
    k = len(support)
    coins = rng.integers(0, 2, size=(k - 1, k + 1))
    qs = tuple(
        XorConstraint(tuple(v for v, a in zip(support, row[:k]) if a), int(row[k]))
        for row in coins
    )
    return XorPool(qs, seed, support)


def _parity_clauses(vs: Sequence[int], target: int) -> list[tuple[int, ...]]:
    # forbid every pattern over vs whose number of trues has the wrong parity
    out = []
    for bits in itertools.product((0, 1), repeat=len(vs)):
        if sum(bits) % 2 != target:
            out.append(tuple(-v if b else v for v, b in zip(vs, bits)))
    return out


def encode_xor_cnf(q: XorConstraint, aux_base: int,
                   width: int = CHUNK_WIDTH) -> tuple[list[tuple[int, ...]], int]:
    """CNF for ``q`` with fresh variables ``aux_base, aux_base+1, ...``.

    Variables are processed in chunks of at most ``width`` (counting the
    carried auxiliary); each non-final chunk defines a fresh variable as the
    parity of its inputs.  Returns ``(clauses, number_of_aux_vars)``.
    """
    if width < 3:
        raise ValueError("chunk width must be at least 3")
    target = 1 - q.parity
    queue = list(q.variables)
    clauses: list[tuple[int, ...]] = []
    carry: list[int] = []
    naux = 0
    while True:
        room = width - len(carry)
        if len(queue) <= room:
            clauses += _parity_clauses(carry + queue, target)
            return clauses, naux
        take = room - 1
        inputs, queue = carry + queue[:take], queue[take:]
        aux = aux_base + naux
        naux += 1
        clauses += _parity_clauses(inputs + [aux], 0)
        carry = [aux]


class XorSearch:
    """Minimal-model queries under prefixes of one XOR pool.

    All constraints are encoded once behind activation literals; asking for
    prefix ``m`` assumes the first ``m`` of them.  Blocking clauses learned
    while rejecting non-minimal candidates depend on F alone, so they are
    shared by every prefix.
    """

    def __init__(self, formula: CnfFormula, pool: XorPool):
        self.search = MinimalModelSearch(formula)
        session = self.search.session
        self.acts: list[int] = []
        for q in pool.constraints:
            clauses, naux = encode_xor_cnf(q, session.num_vars + 1)
            session.new_vars(naux)
            act = session.new_var()
            for c in clauses:
                session.add_clause((-act,) + c)
            self.acts.append(act)

    def witness(self, m: int, budget: Budget | None = None) -> Optional[Assignment]:
        self.search.budget = budget
        return self.search.find(self.acts[:m])

    def query(self, m: int, budget: Budget | None = None) -> Optional[bool]:
        """``True``/``False`` for yes/no, ``None`` when the budget ran out."""
        try:
            return self.witness(m, budget) is not None
        except BudgetExceeded:
            return None

    def close(self):
        self.search.close()


def has_min_model_under_xors(formula: CnfFormula, pool: XorPool, m: int,
                             budget: Budget | None = None) -> Optional[bool]:
    """Does some minimal model of F satisfy the first ``m`` constraints?"""
    if not 0 <= m <= len(pool):
        raise ValueError("m out of range")
    xs = XorSearch(formula, pool)
    try:
        return xs.query(m, budget)
    finally:
        xs.close()


def hashcount_lower_bound(formula: CnfFormula, xs: Iterable[int], delta: float = DEFAULT_DELTA,
                          seed: int = 0, budget: Budget | float | None = None,
                          query_fraction: float = 0.25, query_floor: float = 10.0) -> LowerBoundResult:
    """Probabilistic lower bound ``2 ** (m_star - alpha)``.

    The caller guarantees that ``formula`` has a minimal model.  Each query
    gets ``max(remaining * query_fraction, query_floor)`` seconds; a query
    that runs out is treated as a global timeout, falling back on the largest
    ``m`` already answered yes.
    """
    start = time.monotonic()
    budget = Budget.of(budget)
    a = alpha(delta)
    support = tuple(sorted(xs))
    k = len(support)
    details = {"support_size": k, "seed": seed, "alpha": a, "trace": [], "timed_out": False}

    def done(m_star: int) -> LowerBoundResult:
        details["m_star"] = m_star
        return LowerBoundResult(bound_log2=m_star - a, exact=False, method="HashCount",
                                confidence=1 - delta, delta=delta,
                                elapsed=time.monotonic() - start, details=details)

    if k <= 1:
        return done(0)
    pool = sample_xors(support, seed)
    search = XorSearch(formula, pool)
    has: list[Optional[int]] = [None] * (k + 1)
    has[0], has[k] = 1, 0
    lo, hi, m = 0, k, 1
    m_hat: Optional[int] = None
    try:
        while True:
            answer = None
            if not budget.expired:
                answer = search.query(m, budget.child(query_fraction, query_floor))
            if answer is None:
                details["timed_out"] = True
                details["m_hat"] = m_hat
                return done(m_hat if m_hat is not None else 0)
            details["trace"].append((m, answer))
            if answer:
                m_hat = m if m_hat is None else max(m_hat, m)
                if has[m + 1] == 0:
                    return done(m)
                for i in range(1, m + 1):
                    has[i] = 1
                lo = m
                m = 2 * m if 2 * m < k else (hi + m) // 2
            else:
                if has[m - 1] == 1:
                    return done(m - 1)
                for i in range(m, k):
                    has[i] = 0
                hi = m
                m = (lo + m) // 2
    finally:
        search.close()


# -- independent support -------------------------------------------------------

class DefinabilityChecker:
    """Padoa-style definability queries over one incremental session.

    Holds ``F(V)``, a renamed copy ``F(V')`` and selector variables ``e_s``
    with ``e_s -> (s <-> s')``.  ``v`` is defined by ``S`` iff
    ``F(V) & F(V') & {e_s : s in S} & v & -v'`` is unsatisfiable.
    """

    def __init__(self, formula: CnfFormula):
        n = self.n = formula.num_vars
        self.session = SolverSession(num_vars=3 * n)
        for c in formula.clauses:
            self.session.add_clause(c)
            self.session.add_clause(tuple(l + n if l > 0 else l - n for l in c))
        for v in range(1, n + 1):
            e = 2 * n + v
            self.session.add_clause((-e, -v, v + n))
            self.session.add_clause((-e, v, -(v + n)))

    def definable(self, v: int, by: Iterable[int], budget: Budget | None = None) -> Optional[bool]:
        if v in set(by):
            raise ValueError("v must not belong to the defining set")
        n = self.n
        r = self.session.solve([2 * n + s for s in sorted(by)] + [v, -(v + n)], budget)
        if r.status is Status.BUDGET_EXCEEDED:
            return None
        return r.status is Status.UNSAT

    def close(self):
        self.session.close()


def padoa_definable(formula: CnfFormula, v: int, by: Iterable[int],
                    budget: Budget | None = None) -> Optional[bool]:
    """Whether ``v`` is a function of ``by`` in every model of ``formula``.

    ``None`` means the budget ran out; treat it as not definable.
    """
    checker = DefinabilityChecker(formula)
    try:
        return checker.definable(v, by, budget)
    finally:
        checker.close()


def independent_support(formula: CnfFormula, budget: Budget | float | None = None) -> VarSet:
    """Greedily drop variables definable from the rest.

    Candidates are tried by descending occurrence count.  Every variable
    left out is definable from the returned set, which therefore projects
    the models of ``formula`` (and hence its minimal models) injectively.
    """
    budget = Budget.of(budget)
    occ = Counter(abs(l) for c in formula.clauses for l in c)
    order = sorted(range(1, formula.num_vars + 1), key=lambda v: (-occ[v], v))
    current = set(order)
    checker = DefinabilityChecker(formula)
    try:
        for v in order:
            if budget.expired:
                log.info("independent support: budget exhausted, keeping %d vars", len(current))
                break
            if checker.definable(v, current - {v}, budget):
                current.discard(v)
    finally:
        checker.close()
    return frozenset(current)
