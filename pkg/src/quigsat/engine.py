"""The bounded expand-and-resolve procedure claimed to decide 3SAT.

Each outer iteration works on a snapshot of the clause database:

1. every ordered pair of snapshot clauses is resolved; resolvents that are
   tautological, over the length bound, empty, or already known are dropped;
2. every snapshot clause is expanded to all supersets within the bound;
3. the collected clauses are inserted (they only take part from the next
   iteration on);
4. a pair of complementary unit clauses ends the run with ``unsat``.

The loop ends with ``claimed_sat`` as soon as an iteration inserts nothing.
That verdict is not trustworthy, which is the point of this package.
"""

from __future__ import annotations

import time
from math import comb
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional

from .cnf import Clause, Formula, count_bound, normalize, var
from .rules import iter_expansions

CLAIMED_SAT = "claimed_sat"
UNSAT = "unsat"

DEFAULT_MAX_CLAUSES = 2_000_000


class EngineError(Exception):
    pass


class InputClauseTooLong(EngineError):
    def __init__(self, clause: Clause, bound: int):
        super().__init__(
            f"input clause of length {len(clause)} exceeds bound {bound}: {clause}"
        )
        self.clause = clause
        self.bound = bound


class IterationLimitExceeded(EngineError):
    """The fixpoint was not reached within max_iterations.

    With the default limit this cannot happen for a correct engine, so it
    signals a bug rather than a property of the input.
    """


class BudgetExceeded(EngineError):
    def __init__(self, limit: int, reached: int, partial=None):
        super().__init__(f"clause budget of {limit} exceeded (reached {reached})")
        self.limit = limit
        self.reached = reached
        self.partial = partial


@dataclass
class EngineConfig:
    length_bound: int = 3
    unbounded: bool = False
    max_iterations: Optional[int] = None
    trace: bool = True
    max_clauses: int = DEFAULT_MAX_CLAUSES

    def __post_init__(self):
        if not self.unbounded and self.length_bound < 1:
            raise ValueError("length_bound must be >= 1 in bounded mode")

    @property
    def cap(self) -> Optional[int]:
        return None if self.unbounded else self.length_bound


class Origin(NamedTuple):
    kind: str  # "input" | "resolved" | "expanded"
    iteration: int
    parents: tuple = ()
    pivot: Optional[int] = None


class ClauseDb:
    """Deduplicating clause store, insertion ordered, with origin tags."""

    def __init__(self, clauses: Iterable[Clause] = (), universe: Iterable[int] = ()):
        self._origin: dict[Clause, Origin] = {}
        self._by_len: dict[int, list[Clause]] = {}
        self.universe = frozenset(universe)
        self.iteration = 0
        for c in clauses:
            self.add(c, Origin("input", 0))

    @classmethod
    def from_formula(cls, formula: Formula) -> "ClauseDb":
        return cls(formula.clauses, universe=formula.variables)

    def add(self, clause: Clause, origin: Origin) -> bool:
        if clause in self._origin:
            return False
        self._origin[clause] = origin
        self._by_len.setdefault(len(clause), []).append(clause)
        vs = {var(l) for l in clause}
        if not vs <= self.universe:
            self.universe = self.universe | vs
        return True

    def origin(self, clause: Clause) -> Origin:
        return self._origin[clause]

    def of_length(self, k: int) -> list[Clause]:
        return list(self._by_len.get(k, ()))

    def lengths(self) -> dict[int, int]:
        return {k: len(v) for k, v in sorted(self._by_len.items())}

    def derived(self) -> Iterator[tuple[Clause, Origin]]:
        return ((c, o) for c, o in self._origin.items() if o.kind != "input")

    def __contains__(self, clause) -> bool:
        return clause in self._origin

    def __len__(self) -> int:
        return len(self._origin)

    def __iter__(self) -> Iterator[Clause]:
        return iter(list(self._origin))

    def __repr__(self):
        return f"ClauseDb({len(self)} clauses, lengths={self.lengths()})"


@dataclass
class IterationRecord:
    iteration: int
    snapshot_size: int
    inserted: int = 0
    resolved: int = 0
    expanded: int = 0
    discarded_long: int = 0
    discarded_tautologies: int = 0
    empty_resolvents: int = 0
    contradiction_variable: Optional[int] = None


@dataclass
class SolveReport:
    verdict: str
    iterations: int
    added_per_iteration: list
    discarded_long: int
    discarded_tautologies: int
    final_db_size: int
    contradiction_variable: Optional[int]
    elapsed: float
    trace: list = field(default_factory=list)
    db: Optional[ClauseDb] = field(default=None, repr=False, compare=False)

    def to_dict(self, timings: bool = True) -> dict:
        d = {
            "verdict": self.verdict,
            "iterations": self.iterations,
            "added_per_iteration": list(self.added_per_iteration),
            "discarded_long": self.discarded_long,
            "discarded_tautologies": self.discarded_tautologies,
            "final_db_size": self.final_db_size,
            "contradiction_variable": self.contradiction_variable,
            "trace": [asdict(r) for r in self.trace],
        }
        if timings:
            d["elapsed"] = self.elapsed
        return d


def find_unit_contradiction(db: Iterable[Clause] | ClauseDb) -> Optional[int]:
    """Smallest variable v with both (v) and (~v) present, else None."""
    units = db.of_length(1) if isinstance(db, ClauseDb) else [c for c in db if len(c) == 1]
    lits = {c[0] for c in units}
    clashing = [l for l in lits if l > 0 and -l in lits]
    return min(clashing) if clashing else None


def run_iteration(
    db: ClauseDb, config: EngineConfig | None = None, universe: Iterable[int] | None = None
) -> IterationRecord:
    """One outer pass over ``db``; mutates it and returns the pass record."""
    config = config or EngineConfig()
    cap = config.cap
    universe = db.universe if universe is None else frozenset(universe)
    db.iteration += 1
    it = db.iteration

    snapshot = [c for c in db if cap is None or len(c) <= cap]
    rec = IterationRecord(iteration=it, snapshot_size=len(snapshot))
    occurs: dict[int, list[int]] = {}
    for i, c in enumerate(snapshot):
        for lit in c:
            occurs.setdefault(lit, []).append(i)

    pending: dict[Clause, Origin] = {}
    budget = config.max_clauses

    def collect(clause: Clause, origin: Origin) -> None:
        if clause in db or clause in pending:
            return
        pending[clause] = origin
        if len(db) + len(pending) > budget:
            raise BudgetExceeded(budget, len(db) + len(pending))

    # inlined resolve_pairs: same counts and order, but skips sorting over-cap results
    sets = [frozenset(c) for c in snapshot]
    for i, c in enumerate(snapshot):
        cs = sets[i]
        negated = frozenset(-l for l in c)
        # only clashing partners can yield resolvents; other pairs are no-ops
        partners = sorted({j for lit in c for j in occurs.get(-lit, ())})
        for j in partners:
            clash = negated & sets[j]
            if len(clash) > 1:
                rec.discarded_tautologies += len(clash)
                continue
            (lit,) = clash
            merged = (cs | sets[j]) - {lit, -lit}
            if cap is not None and len(merged) > cap:
                rec.discarded_long += 1
            elif not merged:
                rec.empty_resolvents += 1
            else:
                r = tuple(sorted(merged, key=abs))
                if r not in pending and r not in db:
                    collect(r, Origin("resolved", it, (c, snapshot[j]), abs(lit)))
        for e in iter_expansions(c, cap, universe):
            collect(e, Origin("expanded", it, (c,)))

    for clause, origin in pending.items():
        db.add(clause, origin)
        if origin.kind == "resolved":
            rec.resolved += 1
        else:
            rec.expanded += 1
    rec.inserted = len(pending)
    rec.contradiction_variable = find_unit_contradiction(db)
    return rec


def default_max_iterations(n: int, config: EngineConfig) -> int:
    if config.unbounded:
        return 3**n + 1  # every non-tautological clause over n variables, plus 2
    return count_bound(n, config.length_bound) + 2


def quigley_solve(formula: Formula, config: EngineConfig | None = None) -> SolveReport:
    config = config or EngineConfig()
    start = time.perf_counter()
    formula = normalize(formula)
    for c in formula.clauses:
        if not c:
            raise ValueError("input contains the empty clause")
        if not config.unbounded and len(c) > config.length_bound:
            raise InputClauseTooLong(c, config.length_bound)

    db = ClauseDb.from_formula(formula)
    limit = config.max_iterations or default_max_iterations(formula.num_variables, config)
    trace: list[IterationRecord] = []
    verdict = None
    contradiction = None
    while verdict is None:
        if db.iteration >= limit:
            raise IterationLimitExceeded(
                f"no fixpoint after {limit} iterations ({len(db)} clauses)"
            )
        rec = run_iteration(db, config)
        trace.append(rec)
        if rec.contradiction_variable is not None:
            verdict, contradiction = UNSAT, rec.contradiction_variable
        elif rec.inserted == 0:
            verdict = CLAIMED_SAT

    return SolveReport(
        verdict=verdict,
        iterations=len(trace),
        added_per_iteration=[r.inserted for r in trace],
        discarded_long=sum(r.discarded_long for r in trace),
        discarded_tautologies=sum(r.discarded_tautologies for r in trace),
        final_db_size=len(db),
        contradiction_variable=contradiction,
        elapsed=time.perf_counter() - start,
        trace=trace if config.trace else [],
        db=db,
    )


@dataclass
class BlowupReport:
    n: int
    full_length: int
    by_length: dict
    total: int
    # False when shorter layers were counted by formula instead of enumerated
    enumerated: bool = True


def blowup_demo(
    n: int, max_clauses: int = 1 << 20, stream_limit: int = 1 << 22
) -> BlowupReport:
    """Expansions of (x1) within x1 & x2 & ... & xn when no length cap applies.

    ``full_length`` counts the length-n clauses containing x1 once the pass
    is over, so for n = 1 it is the seed itself. ``total`` counts only new
    expansions and is 0 for n = 1.

    The full-length layer is materialized through the engine's expansion
    routine (distinctness checked) and must not exceed ``max_clauses``.
    Shorter layers are streamed and counted while the whole expansion set
    stays under ``stream_limit``; past that they are counted as
    C(n-1, j) * 2**j.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    formula = Formula(tuple((i,) for i in range(1, n + 1)))
    db = ClauseDb.from_formula(formula)
    expected_full = 2 ** (n - 1)
    if expected_full > max_clauses:
        raise BudgetExceeded(max_clauses, expected_full)
    full = set(iter_expansions((1,), None, db.universe, min_len=n)) if n > 1 else set()
    by_length: dict[int, int] = {}
    enumerated = 3 ** (n - 1) - 1 <= stream_limit
    if enumerated:
        for e in iter_expansions((1,), n - 1, db.universe):
            by_length[len(e)] = by_length.get(len(e), 0) + 1
    else:
        for j in range(1, n - 1):
            by_length[j + 1] = comb(n - 1, j) * 2**j
    if full:
        by_length[n] = len(full)
    return BlowupReport(
        n=n,
        full_length=len(full) if n > 1 else 1,
        by_length=by_length,
        total=sum(by_length.values()),
        enumerated=enumerated,
    )
