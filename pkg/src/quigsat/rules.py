"""Expansion and resolution, the two derivation rules of the engine."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Optional, Union

from .cnf import TAUTOLOGY, Clause, _Tautology, canonicalize_clause, var


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class Resolvent:
    clause: Union[Clause, _Tautology]
    pivot: int
    parents: tuple

    @property
    def is_tautology(self) -> bool:
        return self.clause is TAUTOLOGY


def expand(clause: Clause, t: int) -> tuple[Clause, Clause]:
    """Return ``clause | t`` and ``clause | ~t``."""
    if t <= 0:
        raise RuleError(f"expansion variable must be a positive id, got {t}")
    if any(var(l) == t for l in clause):
        raise RuleError(f"variable {t} already occurs in {clause}")
    return canonicalize_clause((*clause, t)), canonicalize_clause((*clause, -t))


def iter_expansions(
    clause: Clause, max_len: Optional[int], universe: Iterable[int], min_len: int = 0
) -> Iterator[Clause]:
    """Yield every strict superset of ``clause`` built from ``universe``.

    Results are grouped by length (shortest first); ``max_len=None`` means
    no cap and ``min_len`` skips shorter layers.  Equivalent to closing
    ``expand`` under repetition.
    """
    used = {var(l) for l in clause}
    free = sorted(set(universe) - used)
    top = len(clause) + len(free) if max_len is None else min(max_len, len(clause) + len(free))
    base = list(clause)
    for extra in range(max(1, min_len - len(clause)), top - len(clause) + 1):
        for vs in combinations(free, extra):
            for signs in product((1, -1), repeat=extra):
                lits = base + [s * v for s, v in zip(signs, vs)]
                lits.sort(key=abs)
                yield tuple(lits)


def expansions_up_to(clause: Clause, max_len: int, universe: Iterable[int]) -> set:
    if len(clause) > max_len:
        raise RuleError(f"clause of length {len(clause)} exceeds cap {max_len}")
    return set(iter_expansions(clause, max_len, universe))


def resolve(c: Clause, d: Clause) -> list[Resolvent]:
    """One resolvent per clashing variable, ordered by pivot id.

    A resolvent that still holds a complementary pair is returned as
    ``TAUTOLOGY`` rather than dropped; filtering is the caller's call.
    """
    return [Resolvent(r, pivot, (c, d)) for pivot, r in resolve_pairs(c, d)]


def resolve_pairs(c: Clause, d: Clause) -> list:
    """Bare ``(pivot, clause_or_TAUTOLOGY)`` pairs; the engine's hot path."""
    dset = set(d)
    clashes = [l for l in c if -l in dset]
    if not clashes:
        return []
    if len(clashes) > 1:
        return [(var(l), TAUTOLOGY) for l in sorted(clashes, key=abs)]
    lit = clashes[0]
    merged = {x for x in c if x != lit}
    merged.update(x for x in d if x != -lit)
    return [(var(lit), tuple(sorted(merged, key=abs)))]


def resolvent_length_bounds(k: int, m: int) -> tuple[int, int]:
    if k < 1 or m < 1:
        raise ValueError("clause lengths must be >= 1")
    return max(k, m) - 1, k + m - 2
