"""Ground-truth satisfiability: exhaustive truth tables and a small DPLL.

Nothing here shares code with the engine; the oracle only reads formulas.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from .cnf import (
    Assignment,
    Clause,
    Formula,
    IncompleteAssignmentError,
    evaluate,
    normalize,
    var,
)

SAT = "sat"
UNSAT = "unsat"

DEFAULT_MAX_VARS = 26
DEFAULT_MAX_STEPS = 1_000_000
_CHUNK = 1 << 16


class OracleError(Exception):
    pass


class TooManyVariables(OracleError):
    pass


class StepBudgetExceeded(OracleError):
    pass


@dataclass
class OracleVerdict:
    status: str
    model: Optional[dict] = None
    method: str = "truth_table"
    decisions: int = 0
    propagations: int = 0

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def stats(self) -> dict:
        return {
            "method": self.method,
            "decisions": self.decisions,
            "propagations": self.propagations,
        }


class TruthTable:
    """All models of a formula over its own (sorted) variables.

    Row ``i`` is the assignment whose bits, most significant first, give the
    values of the variables in ascending id order, so row order is the
    lexicographic order with False < True.
    """

    def __init__(self, formula: Formula, max_vars: int = DEFAULT_MAX_VARS, extra_vars=()):
        self.variables = sorted(set(formula.variables) | set(extra_vars))
        n = len(self.variables)
        if n > max_vars:
            raise TooManyVariables(f"{n} variables exceeds truth-table cap {max_vars}")
        self.column = {v: i for i, v in enumerate(self.variables)}
        self.formula = formula
        self._models = None

    def _rows(self, start: int, stop: int) -> np.ndarray:
        n = len(self.variables)
        idx = np.arange(start, stop, dtype=np.int64)
        shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
        return ((idx[:, None] >> shifts) & 1).astype(bool)

    def _sat_mask(self, bits: np.ndarray) -> np.ndarray:
        ok = np.ones(bits.shape[0], dtype=bool)
        for clause in self.formula.clauses:
            c = np.zeros(bits.shape[0], dtype=bool)
            for lit in clause:
                col = bits[:, self.column[var(lit)]]
                c |= col if lit > 0 else ~col
            ok &= c
        return ok

    @property
    def models(self) -> np.ndarray:
        """Boolean matrix, one row per satisfying assignment."""
        if self._models is None:
            total = 1 << len(self.variables)
            parts = []
            for start in range(0, total, _CHUNK):
                bits = self._rows(start, min(total, start + _CHUNK))
                parts.append(bits[self._sat_mask(bits)])
            self._models = np.concatenate(parts) if parts else np.zeros((0, 0), bool)
        return self._models

    def first_model(self) -> Optional[dict]:
        total = 1 << len(self.variables)
        for start in range(0, total, _CHUNK):
            bits = self._rows(start, min(total, start + _CHUNK))
            hits = np.flatnonzero(self._sat_mask(bits))
            if hits.size:
                row = bits[hits[0]]
                return {v: bool(row[i]) for i, v in enumerate(self.variables)}
        return None

    def entails(self, clause: Clause) -> bool:
        """True iff every model of the formula satisfies ``clause``."""
        for lit in clause:
            if var(lit) not in self.column:
                raise OracleError(f"variable {var(lit)} is outside this truth table")
        m = self.models
        ok = np.zeros(m.shape[0], dtype=bool)
        for lit in clause:
            col = m[:, self.column[var(lit)]]
            ok |= col if lit > 0 else ~col
        return bool(ok.all())


def brute_force_sat(formula: Formula, max_vars: int = DEFAULT_MAX_VARS) -> OracleVerdict:
    """Exhaustive check; the model is the lexicographically smallest one."""
    model = TruthTable(formula, max_vars=max_vars).first_model()
    if model is None:
        return OracleVerdict(UNSAT, None, "truth_table")
    return OracleVerdict(SAT, model, "truth_table")


@dataclass
class _Stats:
    max_steps: int
    decisions: int = 0
    propagations: int = 0


def _assign(clauses: list, lit: int) -> Optional[list]:
    """Simplify under ``lit`` = true; None on an emptied clause."""
    out = []
    for c in clauses:
        if lit in c:
            continue
        if -lit in c:
            c = tuple(l for l in c if l != -lit)
            if not c:
                return None
        out.append(c)
    return out


def _dpll(clauses: list, assignment: dict, stats: _Stats) -> Optional[dict]:
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is not None:
            stats.propagations += 1
            assignment[var(unit)] = unit > 0
            clauses = _assign(clauses, unit)
            if clauses is None:
                return None
            continue
        lits = {l for c in clauses for l in c}
        pure = sorted((l for l in lits if -l not in lits), key=abs)
        if not pure:
            break
        for lit in pure:
            assignment[var(lit)] = lit > 0
            clauses = _assign(clauses, lit)
    if not clauses:
        return assignment
    v = min(var(l) for c in clauses for l in c)
    for lit in (v, -v):
        stats.decisions += 1
        if stats.decisions > stats.max_steps:
            raise StepBudgetExceeded(f"DPLL exceeded {stats.max_steps} decisions")
        reduced = _assign(clauses, lit)
        if reduced is None:
            continue
        found = _dpll(reduced, {**assignment, v: lit > 0}, stats)
        if found is not None:
            return found
    return None


def dpll_sat(formula: Formula, max_steps: int = DEFAULT_MAX_STEPS) -> OracleVerdict:
    """DPLL with unit propagation, pure literals, smallest-variable/true-first branching."""
    formula = normalize(formula)
    if any(len(c) == 0 for c in formula.clauses):
        return OracleVerdict(UNSAT, None, "dpll")
    stats = _Stats(max_steps)
    limit = sys.getrecursionlimit()
    if formula.num_variables + 100 > limit:
        sys.setrecursionlimit(formula.num_variables + 1000)
    found = _dpll(list(formula.clauses), {}, stats)
    if found is None:
        return OracleVerdict(UNSAT, None, "dpll", stats.decisions, stats.propagations)
    model = {v: found.get(v, False) for v in sorted(formula.variables)}
    if not evaluate(formula, model):
        raise AssertionError("DPLL produced a non-model")  # pragma: no cover
    return OracleVerdict(SAT, model, "dpll", stats.decisions, stats.propagations)


def solve(formula: Formula, method: str = "dpll", **kw) -> OracleVerdict:
    if method in ("brute", "truth_table"):
        return brute_force_sat(formula, **kw)
    if method == "dpll":
        return dpll_sat(formula, **kw)
    raise ValueError(f"unknown oracle method {method!r}")


def blocks(clause: Clause, assignment: Assignment) -> bool:
    """True iff every literal of ``clause`` is false under ``assignment``."""
    for lit in clause:
        if var(lit) not in assignment:
            raise IncompleteAssignmentError(var(lit))
    return all(assignment[var(l)] != (l > 0) for l in clause)


def clause_implies(c: Clause, d: Clause) -> bool:
    """Every assignment blocked by ``d`` is also blocked by ``c``.

    Checked over all assignments to the union of both clauses' variables.
    """
    vs = sorted({var(l) for l in c} | {var(l) for l in d})
    for values in product((False, True), repeat=len(vs)):
        a = dict(zip(vs, values))
        if blocks(d, a) and not blocks(c, a):
            return False
    return True


def entails(formula: Formula, clause: Clause, max_vars: int = DEFAULT_MAX_VARS) -> bool:
    """True iff ``formula & ~clause`` is unsatisfiable."""
    negated = Formula(tuple(formula.clauses) + tuple((-l,) for l in clause))
    return brute_force_sat(negated, max_vars=max_vars).status == UNSAT
