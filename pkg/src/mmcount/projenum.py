"""Counting minimal models by cut conditioning and projected enumeration.

For every projection ``tau`` of a minimal model onto the cut, the formula
is conditioned on the false part of ``tau`` only (false bindings never need
a justification), split into primal components, and the projections of the
minimal models agreeing with ``tau`` onto each component are enumerated.
Their sizes multiply to the number of minimal models extending ``tau``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .formula import (Assignment, CnfFormula, VarSet, components, compute_cut, condition,
                      justified_restriction, negation, project)
from .minmodel import DEFAULT_CAP, MinimalityChecker, MinimalModelSearch, proj_enum
from .results import LowerBoundResult
from .sat import Budget, BudgetExceeded


@dataclass
class ProjEnumConfig:
    cap: int = DEFAULT_CAP
    timeout_s: Optional[float] = None

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("cap must be >= 1")


@dataclass
class Pass:
    """One iteration of the outer loop: a cut projection and its factors."""

    tau: Assignment
    blocks: list[VarSet]
    factors: list[int]
    truncated: bool = False

    @property
    def product(self) -> int:
        d = 1
        for f in self.factors:
            d *= f
        return d


@dataclass
class _State:
    budget_hit: bool = False
    passes: list[Pass] = field(default_factory=list)


def iter_passes(formula: CnfFormula, cut: VarSet, cap: int = DEFAULT_CAP,
                budget: Budget | None = None, state: _State | None = None) -> Iterator[Pass]:
    """Run the outer enumeration loop, yielding one :class:`Pass` per cut projection."""
    budget = budget or Budget(None)
    state = state if state is not None else _State()
    cut = frozenset(cut)
    if not cut <= formula.all_vars:
        raise ValueError("cut must be a subset of the formula's variables")
    checker = MinimalityChecker(formula)
    search = MinimalModelSearch(formula, checker=checker, budget=budget)
    try:
        while True:
            try:
                sigma = search.find()
            except BudgetExceeded:
                state.budget_hit = True
                return
            if sigma is None:
                return
            tau = project(sigma, cut)
            blocks = components(condition(formula, justified_restriction(tau)))
            if len(blocks) == 1:
                blocks = [formula.all_vars]
            p = Pass(tau, blocks, [])
            for block in blocks:
                found, truncated = proj_enum(formula, tau, block, cap, budget, checker)
                p.factors.append(len(found))
                p.truncated |= truncated
            state.passes.append(p)
            yield p
            if budget.expired:
                state.budget_hit = True
                return
            search.add_clause(negation(tau))
    finally:
        search.close()
        checker.close()


def proj_enum_count(formula: CnfFormula, cut: VarSet | None = None,
                    cfg: ProjEnumConfig | None = None, budget: Budget | None = None) -> LowerBoundResult:
    """Exact minimal-model count, or a lower bound if enumeration was cut short."""
    cfg = cfg or ProjEnumConfig()
    start = time.monotonic()
    if budget is None:
        budget = Budget(cfg.timeout_s)
    if formula.is_falsum:
        return LowerBoundResult.from_count(0, True, "ProjEnum", elapsed=time.monotonic() - start,
                                           details={"cut_size": 0, "passes": 0})
    if cut is None:
        cut = compute_cut(formula)
    state = _State()
    cnt = 0
    exact = True
    for p in iter_passes(formula, cut, cfg.cap, budget, state):
        cnt += p.product
        exact &= not p.truncated
    exact &= not state.budget_hit
    return LowerBoundResult.from_count(
        cnt, exact, "ProjEnum", elapsed=time.monotonic() - start,
        details={"cut_size": len(cut), "passes": len(state.passes), "budget_hit": state.budget_hit},
    )
