"""Constructions that break the engine.

* Derivation scenarios showing that some clauses are reachable only through
  an intermediate clause wider than the processing cap, plus a bounded
  closure checker to confirm them.
* The width-halving split transform, its iteration down to 3CNF and the
  width sequence 3, 4, 6, 10, 18, ... that makes the iteration land on 3.
* Unsatisfiable seed formulas (complete sign-pattern CNFs, random ones).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Iterable, Optional

from .cnf import TAUTOLOGY, Clause, Formula, canonicalize_clause, format_clause, var
from .engine import ClauseDb, Origin
from .oracle import UNSAT, brute_force_sat, DEFAULT_MAX_VARS
from .rules import expand, resolve, resolve_pairs

RESOLUTION = "resolution"
EXPANSION = "expansion"


class ForgeError(ValueError):
    pass


def _c(*lits: int) -> Clause:
    return canonicalize_clause(lits)


# ---------------------------------------------------------------------------
# derivation scenarios


@dataclass(frozen=True)
class ChainStep:
    name: str
    rule: str
    parents: tuple  # names
    variable: int  # pivot for resolution, added variable for expansion
    clause: Clause


@dataclass
class LemmaScenario:
    name: str
    k: int
    premises: dict
    chain: list
    target: str
    rules: frozenset = frozenset({RESOLUTION})

    def clause(self, name: str) -> Clause:
        if name in self.premises:
            return self.premises[name]
        for step in self.chain:
            if step.name == name:
                return step.clause
        raise KeyError(name)

    @property
    def target_clause(self) -> Clause:
        return self.clause(self.target)


def lemma511_instance(k: int = 4) -> LemmaScenario:
    """A, B, C of width k-1 reach D only through E of width k."""
    if k < 4:
        raise ForgeError("the family is defined for k >= 4")
    a = range(0, k + 2)  # a[i] is variable i; a[0] unused
    A = _c(*a[1:k])
    B = _c(-a[1], *a[4 : k + 2])
    C = _c(-a[1], -a[2], *a[4 : k + 1])
    D = _c(-a[1], a[3], *a[4 : k + 2])
    E = _c(*a[2 : k + 2])
    return LemmaScenario(
        name="L511",
        k=k,
        premises={"A": A, "B": B, "C": C},
        chain=[
            ChainStep("E", RESOLUTION, ("A", "B"), 1, E),
            ChainStep("D", RESOLUTION, ("C", "E"), 2, D),
        ],
        target="D",
    )


def lemma517_instance() -> LemmaScenario:
    """Two width-4 intermediates E, F resolve to the width-3 target G."""
    return LemmaScenario(
        name="L517",
        k=4,
        premises={
            "A": _c(1, 2, 5),
            "B": _c(3, 4, -5),
            "C": _c(-1, 2, 6),
            "D": _c(3, 4, -6),
        },
        chain=[
            ChainStep("E", RESOLUTION, ("A", "B"), 5, _c(1, 2, 3, 4)),
            ChainStep("F", RESOLUTION, ("C", "D"), 6, _c(-1, 2, 3, 4)),
            ChainStep("G", RESOLUTION, ("E", "F"), 1, _c(2, 3, 4)),
        ],
        target="G",
    )


def lemma518_instance() -> LemmaScenario:
    """Resolution plus one expansion, again through width-4 intermediates."""
    return LemmaScenario(
        name="L518",
        k=4,
        premises={"A": _c(1, 2, 5), "B": _c(3, 4, -5), "C": _c(-1, 3, 4)},
        chain=[
            ChainStep("D", RESOLUTION, ("A", "B"), 5, _c(1, 2, 3, 4)),
            ChainStep("E", EXPANSION, ("C",), 2, _c(-1, 2, 3, 4)),
            ChainStep("F", RESOLUTION, ("D", "E"), 1, _c(2, 3, 4)),
        ],
        target="F",
        rules=frozenset({RESOLUTION, EXPANSION}),
    )


def all_scenarios(ks: Iterable[int] = range(4, 11)) -> list:
    return [lemma511_instance(k) for k in ks] + [lemma517_instance(), lemma518_instance()]


def bounded_closure(
    seed: Iterable[Clause],
    max_len: int,
    rules: Iterable[str] = (RESOLUTION,),
    universe: Optional[Iterable[int]] = None,
) -> ClauseDb:
    """Least set containing ``seed`` and closed under ``rules`` within width ``max_len``.

    Derived clauses wider than ``max_len`` are never formed, so they can
    never act as intermediates; seed clauses take part whatever their
    length.  Tautologies are excluded.  Expansion adds one variable
    at a time from ``universe`` (default: the seed's variables).
    """
    seed = [canonicalize_clause(c, allow_empty=True) for c in seed]
    rules = frozenset(rules)
    if universe is None:
        universe = {var(l) for c in seed for l in c}
    universe = sorted(set(universe))

    db = ClauseDb(seed, universe=universe)
    done: list[Clause] = []
    queue = list(db)
    while queue:
        c = queue.pop(0)
        new: list[tuple[Clause, Origin]] = []
        if RESOLUTION in rules:
            for d in done + [c]:
                for pivot, r in resolve_pairs(c, d):
                    if r is not TAUTOLOGY and len(r) <= max_len:
                        new.append((r, Origin("resolved", 0, (c, d), pivot)))
        if EXPANSION in rules and len(c) < max_len:
            used = {var(l) for l in c}
            for t in universe:
                if t not in used:
                    for e in expand(c, t):
                        new.append((e, Origin("expanded", 0, (c,), t)))
        done.append(c)
        for clause, origin in new:
            if db.add(clause, origin):
                queue.append(clause)
    return db


def derivation(db: ClauseDb, clause: Clause) -> list:
    """Derivation steps for ``clause`` from the seed, parents first."""
    steps: list = []
    seen: set = set()

    def visit(c):
        if c in seen:
            return
        seen.add(c)
        o = db.origin(c)
        if o.kind == "input":
            return
        for p in o.parents:
            visit(p)
        rule = RESOLUTION if o.kind == "resolved" else EXPANSION
        steps.append({
            "rule": rule,
            "parents": [list(p) for p in o.parents],
            "variable": o.pivot,
            "clause": list(c),
        })

    visit(clause)
    return steps


@dataclass
class CheckReport:
    scenario: str
    k: int
    hypotheses_ok: bool
    failures: list = field(default_factory=list)
    bounded_closure_size: int = 0
    bounded_added: list = field(default_factory=list)
    target_in_bounded_closure: bool = False
    target_in_relaxed_closure: bool = False
    witness_chain: list = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return (
            self.hypotheses_ok
            and not self.target_in_bounded_closure
            and self.target_in_relaxed_closure
        )

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "k": self.k,
            "confirmed": self.confirmed,
            "hypotheses_ok": self.hypotheses_ok,
            "failures": list(self.failures),
            "bounded_closure_size": self.bounded_closure_size,
            "bounded_added": [list(c) for c in self.bounded_added],
            "target_in_bounded_closure": self.target_in_bounded_closure,
            "target_in_relaxed_closure": self.target_in_relaxed_closure,
            "witness_chain": self.witness_chain,
        }


def _check_hypotheses(s: LemmaScenario) -> list:
    k = s.k
    failures = []
    for name, c in s.premises.items():
        if not len(c) < k:
            failures.append(f"premise {name} has length {len(c)}, expected < {k}")
    for step in s.chain:
        parents = [s.clause(p) for p in step.parents]
        if step.rule == RESOLUTION:
            got = [r.clause for r in resolve(*parents) if r.pivot == step.variable]
        else:
            try:
                got = list(expand(parents[0], step.variable))
            except ValueError as exc:
                got = []
                failures.append(f"step {step.name}: {exc}")
        if step.clause not in got:
            failures.append(
                f"step {step.name}: {step.rule} of {', '.join(step.parents)} on "
                f"x{step.variable} does not give {format_clause(step.clause)}"
            )
        if step.name != s.target and len(step.clause) != k:
            failures.append(f"intermediate {step.name} has length {len(step.clause)}, expected {k}")
    if len(s.target_clause) not in (k - 1, k):
        failures.append(f"target {s.target} has length {len(s.target_clause)}")
    return failures


def check_scenario(s: LemmaScenario) -> CheckReport:
    failures = _check_hypotheses(s)
    seed = list(s.premises.values())
    target = s.target_clause
    bounded = bounded_closure(seed, s.k - 1, s.rules)
    relaxed = bounded_closure(seed, s.k, s.rules)
    report = CheckReport(
        scenario=s.name,
        k=s.k,
        hypotheses_ok=not failures,
        failures=failures,
        bounded_closure_size=len(bounded),
        bounded_added=[c for c, _ in bounded.derived()],
        target_in_bounded_closure=target in bounded,
        target_in_relaxed_closure=target in relaxed,
    )
    if report.target_in_relaxed_closure:
        report.witness_chain = derivation(relaxed, target)
    return report


# ---------------------------------------------------------------------------
# width sequence and splitting


def b_sequence(n: int) -> int:
    """Width at chain index n: 3, 4, 6, 10, 18, ... (2**n + 2)."""
    if n < 0:
        raise ValueError("index must be >= 0")
    return 2**n + 2


def b_recurrence(n: int) -> int:
    if n < 0:
        raise ValueError("index must be >= 0")
    b = 3
    for _ in range(n):
        b = 2 * (b - 1)
    return b


@dataclass
class SplitMetadata:
    original_variables: frozenset
    fresh_variables: tuple
    # fresh variable -> (clause holding it positively, clause holding it negatively)
    fresh_clauses: dict
    input_width: int
    output_width: int

    @property
    def original_terms(self) -> frozenset:
        return frozenset(
            l for pos, neg in self.fresh_clauses.values() for l in pos + neg
            if var(l) in self.original_variables
        )

    @property
    def fresh_terms(self) -> frozenset:
        return frozenset(v for v in self.fresh_variables) | frozenset(-v for v in self.fresh_variables)

    def to_dict(self) -> dict:
        fresh = self.fresh_variables
        return {
            "input_width": self.input_width,
            "output_width": self.output_width,
            "original_variables": sorted(self.original_variables),
            "fresh_range": [fresh[0], fresh[-1]] if fresh else None,
            "fresh_count": len(fresh),
        }


def split_once(phi: Formula) -> tuple[Formula, SplitMetadata]:
    """Replace each width-w clause by two width w/2+1 clauses linked by a fresh variable.

    Halves follow the clause's canonical literal order; fresh variables are
    numbered from max id + 1 in clause order.
    """
    widths = {len(c) for c in phi.clauses}
    if len(widths) > 1:
        raise ForgeError(f"non-uniform clause widths {sorted(widths)}")
    w = widths.pop() if widths else 4
    if w % 2 or w < 4:
        raise ForgeError(f"width must be even and >= 4, got {w}")
    for c in phi.clauses:
        if len({var(l) for l in c}) != len(c):
            raise ForgeError(f"clause {c} repeats a variable")

    nxt = phi.max_variable + 1
    out: list[Clause] = []
    fresh: list[int] = []
    fresh_clauses: dict = {}
    half = w // 2
    for c in phi.clauses:
        c = tuple(sorted(c, key=abs))
        x = nxt
        nxt += 1
        first = c[:half] + (x,)
        second = c[half:] + (-x,)
        out += [first, second]
        fresh.append(x)
        fresh_clauses[x] = (first, second)
    meta = SplitMetadata(
        original_variables=phi.variables,
        fresh_variables=tuple(fresh),
        fresh_clauses=fresh_clauses,
        input_width=w,
        output_width=half + 1,
    )
    return Formula(tuple(out)), meta


def split_to_3cnf(phi_k: Formula, k: int) -> tuple[Formula, list]:
    expected = b_sequence(k)
    widths = phi_k.widths()
    if widths and widths != {expected}:
        raise ForgeError(f"chain index {k} needs width {expected}, got {sorted(widths)}")
    metas = []
    phi = phi_k
    for _ in range(k):
        phi, meta = split_once(phi)
        metas.append(meta)
    return phi, metas


# ---------------------------------------------------------------------------
# unsatisfiable seeds

MAX_COMPLETE_WIDTH = 20


def complete_unsat_cnf(w: int, first_var: int = 1) -> Formula:
    """All 2**w sign patterns over w consecutive variables."""
    if w < 1:
        raise ForgeError("width must be >= 1")
    if w > MAX_COMPLETE_WIDTH:
        raise ForgeError(f"width {w} exceeds budget {MAX_COMPLETE_WIDTH}")
    vs = range(first_var, first_var + w)
    return Formula(
        tuple(tuple(s * v for s, v in zip(signs, vs)) for signs in product((1, -1), repeat=w))
    )


def random_kcnf(w: int, n_vars: int, n_clauses: int, rng: random.Random) -> Formula:
    """``n_clauses`` distinct clauses, each over w distinct variables of 1..n_vars."""
    if w > n_vars:
        raise ForgeError(f"width {w} exceeds variable count {n_vars}")
    available = comb(n_vars, w) * 2**w
    if n_clauses > available:
        raise ForgeError(f"only {available} distinct width-{w} clauses over {n_vars} variables")
    seen: dict = {}
    while len(seen) < n_clauses:
        vs = rng.sample(range(1, n_vars + 1), w)
        c = canonicalize_clause(v if rng.random() < 0.5 else -v for v in vs)
        seen.setdefault(c, None)
    return Formula(tuple(seen))


def random_unsat_kcnf(
    w: int,
    n_vars: int,
    n_clauses: int,
    seed: int,
    max_attempts: int = 10_000,
    max_vars: int = DEFAULT_MAX_VARS,
) -> Formula:
    """Rejection-sample random w-CNFs until the truth table certifies UNSAT."""
    if n_vars > max_vars:
        raise ForgeError(f"{n_vars} variables exceeds oracle cap {max_vars}")
    rng = random.Random(seed)
    for _ in range(max_attempts):
        phi = random_kcnf(w, n_vars, n_clauses, rng)
        if brute_force_sat(phi, max_vars=max_vars).status == UNSAT:
            return phi
    raise ForgeError(f"no UNSAT formula after {max_attempts} attempts")
