"""Minimal-model oracles built on incremental SAT.

Every search here follows minimize-then-verify: a model of the constrained
formula is shrunk until no smaller constrained model exists, then checked
for minimality against the bare formula.  Candidates that fail the check
have all their supersets blocked (none of them can be minimal) and the
search resumes.

Search sessions also require every true variable to be justified, i.e. to
be the only true literal of some clause.  All minimal models satisfy this,
so nothing is lost, and it removes most non-minimal candidates up front.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Optional

import numpy as np

from .formula import Assignment, Clause, CnfFormula, negation, project, true_vars
from .sat import Budget, BudgetExceeded, SolverSession, Status

DEFAULT_CAP = 10**6
BRUTE_FORCE_MAX_VARS = 22


class TooLarge(ValueError):
    """Exhaustive enumeration refused because of the variable bound."""


def is_justified(formula: CnfFormula, sigma: Iterable[int]) -> bool:
    """Every true variable has a clause it alone satisfies."""
    sigma = frozenset(sigma)
    for v in true_vars(sigma):
        if not any(v in c and all(l == v or l not in sigma for l in c) for c in formula.clauses):
            return False
    return True


def _check_total(formula: CnfFormula, tau: Iterable[int]) -> frozenset[int]:
    tau = frozenset(tau)
    bound = {abs(l) for l in tau}
    missing = formula.variables - bound
    if missing:
        raise ValueError(f"assignment is not total: unbound {sorted(missing)[:5]}")
    # declared but unused variables default to 0
    return tau | {-v for v in formula.all_vars - bound}


def add_justification(session: SolverSession, formula: CnfFormula) -> None:
    """``v -> OR_c j(v, c)`` and ``j(v, c) -> every other literal of c is false``."""
    support: dict[int, list[Clause]] = {}
    for c in formula.clauses:
        for l in c:
            if l > 0:
                support.setdefault(l, []).append(c)
    for v in range(1, formula.num_vars + 1):
        cs = support.get(v, [])
        if len(cs) == 1 and len(cs[0]) == 1:
            continue
        js = []
        for c in cs:
            j = session.new_var()
            js.append(j)
            for l in c:
                if l != v:
                    session.add_clause((-j, -l))
        session.add_clause([-v] + js)


class MinimalityChecker:
    """Answers "is this model minimal for F?" with one SAT query per call."""

    def __init__(self, formula: CnfFormula):
        self.formula = formula
        self.session = SolverSession(formula)

    def smaller_model(self, sigma: Assignment, budget: Budget | None = None) -> Optional[Assignment]:
        """A model of F strictly below ``sigma``, or ``None`` if ``sigma`` is minimal."""
        n = self.formula.num_vars
        ones = [v for v in range(1, n + 1) if v in sigma]
        if not ones:
            return None
        zeros = [-v for v in range(1, n + 1) if v not in sigma]
        act = self.session.new_var()
        self.session.add_clause([-act] + [-v for v in ones])
        r = self.session.solve(zeros + [act], budget)
        self.session.add_clause([-act])
        if r.status is Status.BUDGET_EXCEEDED:
            raise BudgetExceeded
        return project(r.witness, range(1, n + 1)) if r.sat else None

    def close(self):
        self.session.close()


def is_minimal(formula: CnfFormula, tau: Iterable[int], budget: Budget | None = None) -> bool:
    """Whether the model ``tau`` has no strictly smaller model of ``formula``."""
    tau = _check_total(formula, tau)
    if not formula.satisfied_by(tau):
        raise ValueError("assignment is not a model of the formula")
    checker = MinimalityChecker(formula)
    try:
        return checker.smaller_model(tau, budget) is None
    finally:
        checker.close()


class MinimalModelSearch:
    """Search for minimal models of F that also satisfy side constraints.

    Side constraints are clauses added with :meth:`add_clause` (blocking
    clauses, encoded XORs); they may mention auxiliary variables allocated
    through :attr:`session`.  Per-query conditions go in ``assumptions``.
    Only variables ``1..num_vars`` take part in minimization.
    """

    def __init__(self, formula: CnfFormula, checker: MinimalityChecker | None = None,
                 budget: Budget | None = None):
        self.formula = formula
        self.n = formula.num_vars
        self.session = SolverSession(formula)
        add_justification(self.session, formula)
        self._own_checker = checker is None
        self.checker = checker or MinimalityChecker(formula)
        self.budget = budget
        self.rejected = 0

    def add_clause(self, clause: Iterable[int]) -> None:
        self.session.add_clause(clause)

    def _solve(self, assumptions: list[int]) -> Optional[Assignment]:
        r = self.session.solve(assumptions, self.budget)
        if r.status is Status.BUDGET_EXCEEDED:
            raise BudgetExceeded
        return project(r.witness, range(1, self.n + 1)) if r.sat else None

    def shrink(self, mu: Assignment, assumptions: list[int]) -> Assignment:
        """Descend from ``mu`` to a minimal model of the constrained formula."""
        forced = {l for l in assumptions if 0 < l <= self.n}
        while True:
            ones = [v for v in range(1, self.n + 1) if v in mu and v not in forced]
            if not ones:
                return mu
            zeros = [-v for v in range(1, self.n + 1) if v not in mu]
            act = self.session.new_var()
            self.session.add_clause([-act] + [-v for v in ones])
            try:
                nxt = self._solve(assumptions + zeros + [act])
            finally:
                self.session.add_clause([-act])
            if nxt is None:
                return mu
            mu = nxt

    def find(self, assumptions: Iterable[int] = ()) -> Optional[Assignment]:
        """A minimal model of F satisfying the side constraints and assumptions.

        Positive assumptions on formula variables stay true during
        minimization.  Raises :class:`BudgetExceeded` when out of time.
        """
        assumptions = list(assumptions)
        while True:
            mu = self._solve(assumptions)
            if mu is None:
                return None
            sigma = self.shrink(mu, assumptions)
            if self.checker.smaller_model(sigma, self.budget) is None:
                return sigma
            self.rejected += 1
            self.session.add_clause([-v for v in true_vars(sigma)])

    def close(self):
        self.session.close()
        if self._own_checker:
            self.checker.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def minimize(formula: CnfFormula, mu: Iterable[int], forced: Iterable[int] = (),
             budget: Budget | None = None) -> Assignment:
    """Shrink the model ``mu`` of ``formula`` while keeping ``forced`` literals.

    The result is minimal among models of ``formula`` that satisfy
    ``forced``; it is not necessarily minimal for ``formula`` alone.
    """
    mu = _check_total(formula, mu)
    forced = list(forced)
    if not formula.satisfied_by(mu) or any(l not in mu for l in forced):
        raise ValueError("mu must be a model of the formula satisfying forced")
    with MinimalModelSearch(formula, budget=budget) as search:
        return search.shrink(mu, forced)


def find_minimal_model(formula: CnfFormula, budget: Budget | None = None) -> Optional[Assignment]:
    """Some minimal model, or ``None`` when the formula is unsatisfiable."""
    with MinimalModelSearch(formula, budget=budget) as search:
        return search.find()


def blocked_min_model(formula: CnfFormula, cut: Iterable[int], blocked: Iterable[Assignment],
                      budget: Budget | None = None) -> Optional[Assignment]:
    """A minimal model whose projection on ``cut`` is none of ``blocked``."""
    cut = frozenset(cut)
    with MinimalModelSearch(formula, budget=budget) as search:
        for tau in blocked:
            if frozenset(abs(l) for l in tau) != cut:
                raise ValueError("every blocked assignment must bind exactly the cut")
            search.add_clause(negation(tau))
        return search.find()


def proj_enum(formula: CnfFormula, tau: Iterable[int], xs: Iterable[int], cap: int = DEFAULT_CAP,
              budget: Budget | None = None,
              checker: MinimalityChecker | None = None) -> tuple[set[Assignment], bool]:
    """Projections onto ``xs`` of the minimal models agreeing with ``tau``.

    Returns ``(projections, truncated)``.  At most ``cap`` projections are
    returned; ``truncated`` is set when more exist or the budget ran out.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    xs = frozenset(xs)
    assumptions = sorted(tau, key=abs)
    found: set[Assignment] = set()
    search = MinimalModelSearch(formula, checker=checker, budget=budget)
    try:
        while True:
            sigma = search.find(assumptions)
            if sigma is None:
                return found, False
            if len(found) >= cap:
                return found, True
            p = project(sigma, xs)
            found.add(p)
            search.add_clause(negation(p))
    except BudgetExceeded:
        return found, True
    finally:
        search.close()


def enumerate_minimal_models(formula: CnfFormula, budget: Budget | None = None) -> Iterator[Assignment]:
    """Yield every minimal model once; supersets of each are blocked."""
    with MinimalModelSearch(formula, budget=budget) as search:
        while True:
            sigma = search.find()
            if sigma is None:
                return
            yield sigma
            search.add_clause([-v for v in true_vars(sigma)])


# -- exhaustive oracle ---------------------------------------------------------

def _minimal_mask(formula: CnfFormula, max_vars: int) -> np.ndarray:
    n = formula.num_vars
    if n > max_vars:
        raise TooLarge(f"brute force refused: {n} variables exceeds the bound of {max_vars}")
    idx = np.arange(1 << n, dtype=np.uint32)
    models = np.ones(1 << n, dtype=bool)
    for c in formula.clauses:
        pos = sum(1 << (l - 1) for l in c if l > 0)
        neg = sum(1 << (-l - 1) for l in c if l < 0)
        sat = (idx & np.uint32(pos)) != 0 if pos else np.zeros(1 << n, dtype=bool)
        if neg:
            sat |= (idx & np.uint32(neg)) != neg
        models &= sat
    # below[x]: some model y with y subset-of x
    below = models.copy()
    for i in range(n):
        view = below.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    minimal = models.copy()
    for i in range(n):
        mv = minimal.reshape(-1, 2, 1 << i)
        mv[:, 1, :] &= ~below.reshape(-1, 2, 1 << i)[:, 0, :]
    return minimal


def brute_force_count(formula: CnfFormula, max_vars: int = BRUTE_FORCE_MAX_VARS) -> int:
    return int(_minimal_mask(formula, max_vars).sum())


def brute_force_mm(formula: CnfFormula, max_vars: int = BRUTE_FORCE_MAX_VARS) -> set[Assignment]:
    """All minimal models by exhaustive evaluation of every assignment."""
    mask = _minimal_mask(formula, max_vars)
    n = formula.num_vars
    out = set()
    for x in np.flatnonzero(mask):
        x = int(x)
        out.add(frozenset(v if x >> (v - 1) & 1 else -v for v in range(1, n + 1)))
    return out
