"""Exact counts and probabilistic lower bounds on the number of minimal models of a CNF formula."""
from .formula import (CnfFormula, DimacsError, compute_cut, condition, dlp_export, parse_dimacs,
                      read_dimacs)
from .hashcount import hashcount_lower_bound, independent_support
from .mingen import TransactionDb, encode_mingen, parse_transactions
from .minlb import minlb
from .minmodel import brute_force_count, brute_force_mm, enumerate_minimal_models, is_minimal
from .projenum import ProjEnumConfig, proj_enum_count
from .results import LowerBoundResult
from .sat import Budget, BudgetExceeded

__version__ = "0.1.0"

__all__ = [
    "Budget", "BudgetExceeded", "CnfFormula", "DimacsError", "LowerBoundResult", "ProjEnumConfig",
    "TransactionDb", "brute_force_count", "brute_force_mm", "compute_cut", "condition", "dlp_export",
    "encode_mingen", "enumerate_minimal_models", "hashcount_lower_bound", "independent_support",
    "is_minimal", "minlb", "parse_dimacs", "parse_transactions", "proj_enum_count", "read_dimacs",
]
