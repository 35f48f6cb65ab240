"""Literals, clauses and CNF formulas in canonical form.

Literals are DIMACS-style signed integers: ``3`` is x3, ``-3`` is not-x3.
A clause is a tuple of literals sorted by variable id with every variable
occurring at most once.  Two clauses with the same literal set therefore
compare (and hash) equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Sequence, Union

Literal = int
Clause = tuple  # tuple[int, ...], canonical
Assignment = Mapping[int, bool]


class _Tautology:
    """Marker for a clause containing both polarities of some variable."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TAUTOLOGY"

    def __reduce__(self):
        return (_Tautology, ())


TAUTOLOGY = _Tautology()


class EmptyClauseError(ValueError):
    pass


class IncompleteAssignmentError(KeyError):
    """Raised when an assignment leaves a referenced variable unset."""

    def __init__(self, variable: int):
        super().__init__(variable)
        self.variable = variable

    def __str__(self):
        return f"assignment does not cover variable {self.variable}"


def var(lit: Literal) -> int:
    return lit if lit > 0 else -lit


def canonicalize_clause(
    raw: Iterable[Literal], allow_empty: bool = False
) -> Union[Clause, _Tautology]:
    """Collapse duplicates, sort by variable, or report a tautology."""
    seen: dict[int, int] = {}
    for lit in raw:
        lit = int(lit)
        if lit == 0:
            raise ValueError("0 is not a literal")
        v = var(lit)
        prev = seen.get(v)
        if prev is None:
            seen[v] = lit
        elif prev != lit:
            return TAUTOLOGY
    if not seen and not allow_empty:
        raise EmptyClauseError("empty clause")
    return tuple(seen[v] for v in sorted(seen))


def clause_variables(clause: Clause) -> frozenset[int]:
    return frozenset(var(lit) for lit in clause)


def format_clause(clause: Clause) -> str:
    if not clause:
        return "()"
    return "(" + " | ".join(f"x{l}" if l > 0 else f"~x{-l}" for l in clause) + ")"


@dataclass(frozen=True)
class Formula:
    """A CNF formula; clause order is preserved."""

    clauses: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))

    @cached_property
    def variables(self) -> frozenset[int]:
        return frozenset(var(lit) for c in self.clauses for lit in c)

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def max_variable(self) -> int:
        return max(self.variables, default=0)

    def widths(self) -> set[int]:
        return {len(c) for c in self.clauses}

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __str__(self):
        return " & ".join(format_clause(c) for c in self.clauses) or "TRUE"


def normalize(formula: Formula | Iterable[Sequence[Literal]]) -> Formula:
    """Canonicalize every clause, drop tautologies and repeated clauses.

    First occurrences keep their relative order.
    """
    clauses = formula.clauses if isinstance(formula, Formula) else formula
    out: dict[Clause, None] = {}
    for raw in clauses:
        c = canonicalize_clause(raw, allow_empty=True)
        if c is TAUTOLOGY:
            continue
        out.setdefault(c, None)
    return Formula(tuple(out))


def cnf(*clauses: Sequence[Literal]) -> Formula:
    """Shorthand: ``cnf([1, -2], [2])`` builds a normalized formula."""
    return normalize(clauses)


def count_bound(n: int, max_len: int) -> int:
    """Number of distinct canonical clauses of length 1..max_len over n variables."""
    if n < 0 or max_len < 0:
        raise ValueError("n and max_len must be non-negative")
    # Python ints do not overflow; no range check needed.
    return sum(comb(n, k) * 2**k for k in range(1, min(max_len, n) + 1))


def evaluate(obj: Formula | Clause, assignment: Assignment) -> bool:
    """Evaluate a clause or a formula under a complete assignment."""
    if isinstance(obj, Formula):
        # check completeness up front so the error does not depend on clause order
        for v in sorted(obj.variables):
            if v not in assignment:
                raise IncompleteAssignmentError(v)
        return all(_eval_clause(c, assignment) for c in obj.clauses)
    return _eval_clause(obj, assignment)


def _eval_clause(clause: Clause, assignment: Assignment) -> bool:
    for v in sorted(var(l) for l in clause):
        if v not in assignment:
            raise IncompleteAssignmentError(v)
    return any(assignment[var(l)] == (l > 0) for l in clause)


def is_complete(assignment: Assignment, formula: Formula) -> bool:
    return all(v in assignment for v in formula.variables)
