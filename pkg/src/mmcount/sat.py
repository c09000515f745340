"""Incremental SAT sessions with assumptions and wall-clock budgets.

The search itself is delegated to MiniSat 2.2 through ``pysat``.  Budgets
are enforced by a single process-wide watchdog thread that interrupts the
running solver once its deadline passes.
"""
from __future__ import annotations

import enum
import heapq
import itertools
import threading
import time
from dataclasses import dataclass
from typing import Iterable, Optional

from pysat.solvers import Minisat22

from .formula import Assignment, CnfFormula


class BudgetExceeded(Exception):
    """Raised by searches that ran out of their time budget."""


class Budget:
    """A wall-clock deadline.  ``Budget(None)`` never expires."""

    def __init__(self, seconds: Optional[float] = None, *, deadline: Optional[float] = None):
        if deadline is None and seconds is not None:
            deadline = time.monotonic() + seconds
        self.deadline = deadline

    @classmethod
    def of(cls, budget: "Budget | float | None") -> "Budget":
        return budget if isinstance(budget, Budget) else cls(budget)

    def remaining(self) -> float:
        if self.deadline is None:
            return float("inf")
        return max(0.0, self.deadline - time.monotonic())

    @property
    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() >= self.deadline

    def check(self) -> None:
        if self.expired:
            raise BudgetExceeded

    def child(self, fraction: float = 1.0, floor: float = 0.0) -> "Budget":
        """Sub-budget of ``max(remaining * fraction, floor)``, capped by this one."""
        if self.deadline is None:
            return Budget(None)
        share = max(self.remaining() * fraction, floor)
        return Budget(deadline=min(self.deadline, time.monotonic() + share))


class _Watchdog:
    def __init__(self):
        self._cond = threading.Condition()
        self._heap: list = []
        self._live: set[int] = set()
        self._ids = itertools.count()
        self._thread: Optional[threading.Thread] = None

    def arm(self, deadline: float, solver) -> int:
        with self._cond:
            token = next(self._ids)
            heapq.heappush(self._heap, (deadline, token, solver))
            self._live.add(token)
            if self._thread is None:
                self._thread = threading.Thread(target=self._run, name="mmcount-watchdog", daemon=True)
                self._thread.start()
            self._cond.notify()
            return token

    def disarm(self, token: int) -> None:
        with self._cond:
            self._live.discard(token)

    def _run(self):
        with self._cond:
            while True:
                while self._heap and self._heap[0][1] not in self._live:
                    heapq.heappop(self._heap)
                if not self._heap:
                    self._cond.wait()
                    continue
                delay = self._heap[0][0] - time.monotonic()
                if delay > 0:
                    self._cond.wait(delay)
                    continue
                _, token, solver = heapq.heappop(self._heap)
                self._live.discard(token)
                solver.interrupt()


_watchdog = _Watchdog()


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass(frozen=True)
class SatResult:
    status: Status
    witness: Optional[Assignment] = None

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


class SolverSession:
    """A growable clause database answering queries under assumptions.

    Clauses only ever accumulate, so an UNSAT answer stays UNSAT.  Fresh
    auxiliary variables come from :meth:`new_var`; witnesses are total over
    every variable allocated so far.
    """

    def __init__(self, formula: CnfFormula | None = None, num_vars: int = 0):
        self.num_vars = formula.num_vars if formula is not None else num_vars
        self._solver = Minisat22()
        self._inconsistent = False
        self.calls = 0
        if formula is not None:
            for c in formula.clauses:
                self.add_clause(c)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def new_vars(self, k: int) -> range:
        start = self.num_vars + 1
        self.num_vars += k
        return range(start, start + k)

    def add_clause(self, clause: Iterable[int]) -> None:
        clause = list(clause)
        for l in clause:
            if l == 0 or abs(l) > self.num_vars:
                raise ValueError(f"literal {l} outside 1..{self.num_vars}")
        if not clause:
            self._inconsistent = True
            return
        self._solver.add_clause(clause)

    def solve(self, assumptions: Iterable[int] = (), budget: Budget | None = None) -> SatResult:
        assumptions = list(assumptions)
        self.calls += 1
        if self._inconsistent:
            return SatResult(Status.UNSAT)
        if budget is None or budget.deadline is None:
            outcome = self._solver.solve(assumptions=assumptions)
        else:
            if budget.expired:
                return SatResult(Status.BUDGET_EXCEEDED)
            token = _watchdog.arm(budget.deadline, self._solver)
            try:
                outcome = self._solver.solve_limited(assumptions=assumptions, expect_interrupt=True)
            finally:
                _watchdog.disarm(token)
                self._solver.clear_interrupt()
            if outcome is None:
                return SatResult(Status.BUDGET_EXCEEDED)
        if not outcome:
            return SatResult(Status.UNSAT)
        return SatResult(Status.SAT, self._witness(assumptions))

    def _witness(self, assumptions: list[int]) -> Assignment:
        model = self._solver.get_model() or []
        # variables the solver never saw are unconstrained: default 0 unless assumed
        value = {abs(l): l for l in model}
        for l in assumptions:
            value.setdefault(abs(l), l)
        return frozenset(value.get(v, -v) for v in range(1, self.num_vars + 1))

    def close(self) -> None:
        if self._solver is not None:
            self._solver.delete()
            self._solver = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass


def is_satisfiable(formula: CnfFormula, budget: Budget | None = None) -> Optional[bool]:
    """One plain SAT call; ``None`` when the budget ran out."""
    with SolverSession(formula) as s:
        r = s.solve(budget=budget)
    if r.status is Status.BUDGET_EXCEEDED:
        return None
    return r.sat
