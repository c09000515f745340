"""Hybrid lower bound: enumerate when the formula decomposes, hash otherwise."""
from __future__ import annotations

import time
from typing import Optional

from .formula import CnfFormula, compute_cut
from .hashcount import DEFAULT_DELTA, hashcount_lower_bound, independent_support
from .projenum import ProjEnumConfig, proj_enum_count
from .results import LowerBoundResult
from .sat import Budget, BudgetExceeded, is_satisfiable

DEFAULT_CUT_LIMIT = 50


def minlb(formula: CnfFormula, delta: float = DEFAULT_DELTA, cut_limit: int = DEFAULT_CUT_LIMIT,
          cfg: Optional[ProjEnumConfig] = None, seed: int = 0,
          budget: Budget | float | None = None, xor_over_all_vars: bool = False) -> LowerBoundResult:
    """Lower bound on the number of minimal models holding with probability ``>= 1 - delta``.

    Unsatisfiable formulas give an exact 0.  Formulas whose heuristic cut has
    at most ``cut_limit`` variables are counted by projected enumeration
    (deterministic); the rest get a hashing-based bound over an independent
    support, or over all variables with ``xor_over_all_vars``.

    The result's ``method`` names the branch that produced it.

    Raises :class:`BudgetExceeded` if the budget runs out before the
    satisfiability test is decided.
    """
    start = time.monotonic()
    cfg = cfg or ProjEnumConfig()
    if budget is None:
        budget = cfg.timeout_s
    budget = Budget.of(budget)

    sat = is_satisfiable(formula, budget)
    if sat is None:
        raise BudgetExceeded
    if not sat:
        res = LowerBoundResult.from_count(0, True, "MinLB", details={"branch": "unsat"})
    else:
        cut = compute_cut(formula)
        if len(cut) <= cut_limit:
            res = proj_enum_count(formula, cut, cfg, budget)
            res.details["branch"] = "ProjEnum"
        else:
            xs = formula.all_vars if xor_over_all_vars else independent_support(formula, budget)
            res = hashcount_lower_bound(formula, xs, delta, seed, budget)
            res.details["branch"] = "HashCount"
            res.details["cut_size"] = len(cut)
    res.elapsed = time.monotonic() - start
    return res
