"""Reproducible refutation of a bounded expand-and-resolve 3SAT procedure."""

__version__ = "0.1.0"

from .cnf import TAUTOLOGY, Formula, canonicalize_clause, cnf, count_bound, evaluate, normalize
from .engine import EngineConfig, SolveReport, quigley_solve
from .oracle import brute_force_sat, dpll_sat, entails

__all__ = [
    "TAUTOLOGY",
    "Formula",
    "canonicalize_clause",
    "cnf",
    "count_bound",
    "evaluate",
    "normalize",
    "EngineConfig",
    "SolveReport",
    "quigley_solve",
    "brute_force_sat",
    "dpll_sat",
    "entails",
]
