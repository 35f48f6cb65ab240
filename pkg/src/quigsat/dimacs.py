"""DIMACS CNF reading and writing."""

from __future__ import annotations

import warnings

from .cnf import Formula, normalize


class DimacsError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DimacsWarning(UserWarning):
    pass


def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF text into a normalized formula.

    Clauses may span lines.  Header mismatches, variables above the declared
    count and dropped tautologies/duplicates are reported as ``DimacsWarning``.
    """
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    start = None
    body_lines: list[tuple[int, str]] = []

    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate problem line", lineno, 1)
            fields = stripped.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise DimacsError(f"malformed problem line {stripped!r}", lineno, 1)
            try:
                nv, nc = int(fields[2]), int(fields[3])
            except ValueError:
                raise DimacsError(f"malformed problem line {stripped!r}", lineno, 1) from None
            if nv < 0 or nc < 0:
                raise DimacsError("negative count in problem line", lineno, 1)
            header = (nv, nc)
            continue
        if header is None:
            raise DimacsError("clause data before problem line", lineno, 1)
        body_lines.append((lineno, line))

    if header is None:
        raise DimacsError("missing problem line", 1, 1)
    declared_vars, declared_clauses = header
    max_seen = 0

    for lineno, line in body_lines:
        col = 0
        for part in line.split():
            col = line.index(part, col)
            try:
                lit = int(part)
            except ValueError:
                raise DimacsError(f"invalid literal {part!r}", lineno, col + 1) from None
            if start is None:
                start = (lineno, col + 1)
            col += len(part)
            if lit == 0:
                if not current:
                    raise DimacsError("empty clause in input", *start)
                clauses.append(current)
                current, start = [], None
            else:
                current.append(lit)
                max_seen = max(max_seen, abs(lit))

    if current:
        raise DimacsError("last clause is not terminated by 0", *start)
    if max_seen > declared_vars:
        warnings.warn(
            f"variable {max_seen} exceeds declared count {declared_vars}; count raised",
            DimacsWarning,
            stacklevel=2,
        )
    if len(clauses) != declared_clauses:
        warnings.warn(
            f"header declares {declared_clauses} clauses, found {len(clauses)}",
            DimacsWarning,
            stacklevel=2,
        )
    formula = normalize(clauses)
    if len(formula) != len(clauses):
        warnings.warn(
            f"normalization dropped {len(clauses) - len(formula)} tautological or repeated clauses",
            DimacsWarning,
            stacklevel=2,
        )
    return formula


def emit_dimacs(formula: Formula, comments: tuple = ()) -> str:
    """Canonical text: header with the largest variable id, one clause per line."""
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.max_variable} {len(formula)}")
    lines += [" ".join(map(str, c)) + " 0" for c in formula.clauses]
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> Formula:
    with open(path) as f:
        return parse_dimacs(f.read())


def write_dimacs(path, formula: Formula, comments: tuple = ()) -> None:
    with open(path, "w") as f:
        f.write(emit_dimacs(formula, comments))
