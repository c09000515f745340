import time

import pytest
from hypothesis import given, settings

from mmcount.formula import CnfFormula
from mmcount.sat import Budget, BudgetExceeded, SolverSession, Status, is_satisfiable

from _gen import formulas, naive_models, pigeonhole


def test_assumption_contradiction():
    with SolverSession(CnfFormula(1, ((1,),))) as s:
        assert s.solve([-1]).status is Status.UNSAT
        assert s.solve().sat


def test_witness_satisfies():
    f = CnfFormula(2, ((1, 2),))
    with SolverSession(f) as s:
        r = s.solve()
        assert r.sat and f.satisfied_by(r.witness)
        assert {abs(l) for l in r.witness} == {1, 2}


def test_falsum_unsat():
    assert is_satisfiable(CnfFormula.falsum(3)) is False
    with SolverSession(CnfFormula.falsum(3)) as s:
        assert s.solve().status is Status.UNSAT


def test_add_clause_narrows():
    with SolverSession(CnfFormula(2, ((1, 2),))) as s:
        s.add_clause([-1])
        r = s.solve()
        assert r.sat and 2 in r.witness and -1 in r.witness
        s.add_clause([-1])  # duplicate: no change
        assert s.solve().sat


def test_empty_clause_is_permanent():
    with SolverSession(CnfFormula(2, ((1, 2),))) as s:
        s.add_clause([])
        assert s.solve().status is Status.UNSAT
        s.add_clause([1])
        assert s.solve([1]).status is Status.UNSAT


def test_new_vars():
    with SolverSession(num_vars=3) as s:
        assert s.new_var() == 4
        assert list(s.new_vars(2)) == [5, 6]
        assert s.num_vars == 6


def test_queries_repeatable():
    f = CnfFormula(3, ((1, 2), (-1, 3), (-2, -3)))
    with SolverSession(f) as s:
        for assum in ([], [1], [-3], [2, 3]):
            assert s.solve(assum).status == s.solve(assum).status


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_agrees_with_exhaustive(f):
    assert is_satisfiable(f) == bool(naive_models(f))


def test_budget_interrupts_hard_instance():
    f = pigeonhole(11)
    start = time.monotonic()
    assert is_satisfiable(f, Budget(0.3)) is None
    assert time.monotonic() - start < 5


def test_budget_basics():
    b = Budget(None)
    assert not b.expired and b.remaining() == float("inf")
    b = Budget(0)
    assert b.expired
    with pytest.raises(BudgetExceeded):
        b.check()
    parent = Budget(100)
    child = parent.child(0.25, 1)
    assert child.remaining() <= 25.1
    assert Budget(0.5).child(1.0, 10).remaining() <= 0.5
