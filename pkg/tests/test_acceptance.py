"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line and the lines are
repeated in the terminal summary. Run with ``-s`` to see them inline.
"""

import random
import time
from math import comb

import pytest

from quigsat.cnf import count_bound
from quigsat.dimacs import emit_dimacs, parse_dimacs, write_dimacs
from quigsat.engine import CLAIMED_SAT, UNSAT, ClauseDb, blowup_demo, quigley_solve, run_iteration
from quigsat.forge import (
    b_recurrence,
    b_sequence,
    bounded_closure,
    check_scenario,
    complete_unsat_cnf,
    lemma511_instance,
    lemma517_instance,
    lemma518_instance,
    random_kcnf,
    random_unsat_kcnf,
    split_once,
    split_to_3cnf,
)
from quigsat.harness import random_3cnf
from quigsat.oracle import TruthTable, brute_force_sat, dpll_sat

CORPUS_SEED = 20240
CORPUS_SIZE = 200


@pytest.fixture
def verdict(request):
    def _verdict(number, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        print(line)
        request.config.acceptance_lines.append(line)
        return ok
    return _verdict


def _corpus():
    rng = random.Random(CORPUS_SEED)
    out = []
    for _ in range(CORPUS_SIZE):
        n = rng.randint(3, 10)
        m = rng.randint(1, 30)
        out.append(random_3cnf(n, m, rng))
    return out


@pytest.fixture(scope="module")
def solved_corpus():
    """Corpus instances with engine reports and truth tables, plus wall time."""
    t0 = time.perf_counter()
    rows = []
    for f in _corpus():
        report = quigley_solve(f)
        rows.append((f, report, TruthTable(f)))
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="module")
def phi_prime():
    return split_once(complete_unsat_cnf(4))[0]


@pytest.fixture(scope="module")
def phi_zero():
    return split_to_3cnf(complete_unsat_cnf(6), 2)[0]


def test_base_refutation(verdict, phi_prime):
    t0 = time.perf_counter()
    base = complete_unsat_cnf(4)
    phi, _ = split_once(base)
    report = quigley_solve(phi)
    oracle = dpll_sat(phi)
    elapsed = time.perf_counter() - t0
    ok = (
        len(base) == 16
        and (len(phi), phi.num_variables) == (32, 20)
        and report.verdict == CLAIMED_SAT
        and report.iterations == 2
        and report.added_per_iteration[-1] == 0
        and oracle.status == "unsat"
        and elapsed < 1.0
    )
    assert verdict(1, "split complete 4CNF claimed satisfiable, oracle unsat", ok,
                   f"{len(phi)} clauses, {phi.num_variables} vars, iterations={report.iterations}, "
                   f"added={report.added_per_iteration}, oracle={oracle.status}, {elapsed:.3f}s")


def test_chain_refutation(verdict):
    t0 = time.perf_counter()
    phi, _ = split_to_3cnf(complete_unsat_cnf(6), 2)
    report = quigley_solve(phi)
    oracle = dpll_sat(phi)
    elapsed = time.perf_counter() - t0
    ok = (
        (len(phi), phi.num_variables, phi.widths()) == (256, 198, {3})
        and report.verdict == CLAIMED_SAT
        and oracle.status == "unsat"
        and elapsed < 30.0
    )
    assert verdict(2, "twice-split complete 6CNF claimed satisfiable, DPLL unsat", ok,
                   f"{len(phi)} clauses, {phi.num_variables} vars, engine={report.verdict}, "
                   f"dpll={oracle.status} after {oracle.decisions} decisions, {elapsed:.2f}s")


def test_lemma_counterexamples(verdict):
    t0 = time.perf_counter()
    reports = [check_scenario(lemma511_instance(k)) for k in range(4, 11)]
    reports += [check_scenario(lemma517_instance()), check_scenario(lemma518_instance())]
    s517 = lemma517_instance()
    added = [c for c, _ in bounded_closure(s517.premises.values(), 3).derived()]
    elapsed = time.perf_counter() - t0
    ok = all(r.confirmed for r in reports) and added == [(2, 5, 6)] and elapsed < 1.0
    failed = [r.scenario for r in reports if not r.confirmed]
    assert verdict(3, "L511 k=4..10, L517 and L518 confirmed", ok,
                   f"unconfirmed={failed}, L517 cap-3 additions={added}, {elapsed:.3f}s")


def test_soundness_suite(verdict, solved_corpus):
    rows, solve_time = solved_corpus
    t0 = time.perf_counter()
    bad_clauses = bad_unsat = 0
    for f, report, table in rows:
        bad_clauses += sum(not table.entails(c) for c in report.db)
        if report.verdict == UNSAT and table.first_model() is not None:
            bad_unsat += 1
    elapsed = solve_time + time.perf_counter() - t0
    ok = bad_clauses == 0 and bad_unsat == 0 and elapsed < 60.0
    assert verdict(4, "every stored clause entailed, unsat implies oracle unsat", ok,
                   f"{len(rows)} instances, {bad_clauses} unentailed clauses, "
                   f"{bad_unsat} false unsat, {elapsed:.1f}s")


def test_one_sided_error(verdict, solved_corpus):
    rows, _ = solved_corpus
    wrong_unsat = missed = unsat = 0
    for f, report, table in rows:
        oracle_sat = table.first_model() is not None
        unsat += not oracle_sat
        wrong_unsat += report.verdict == UNSAT and oracle_sat
        missed += report.verdict == CLAIMED_SAT and not oracle_sat
    assert verdict(5, "no engine unsat on a satisfiable instance", wrong_unsat == 0,
                   f"engine unsat/oracle sat={wrong_unsat}, claimed_sat/oracle unsat={missed} "
                   f"of {unsat} unsat instances")


def test_termination_bounds(verdict, solved_corpus, phi_prime, phi_zero):
    rows, _ = solved_corpus
    pairs = [(f, r) for f, r, _ in rows]
    pairs += [(phi_prime, quigley_solve(phi_prime)), (phi_zero, quigley_solve(phi_zero))]
    violations = 0
    for f, r in pairs:
        bound = count_bound(f.num_variables, 3)
        violations += r.final_db_size > bound or r.iterations > bound + 1
    assert verdict(6, "database size and iteration count within count bound", violations == 0,
                   f"{len(pairs)} instances, {violations} violations")


def test_blowup(verdict):
    got = {n: blowup_demo(n).full_length for n in range(1, 17)}
    bad = {n: v for n, v in got.items() if v != 2 ** (n - 1)}
    assert verdict(7, "full-length expansions of a unit clause equal 2^(n-1) for n=1..16", not bad,
                   f"n=16 gives {got[16]}" + (f", mismatches {bad}" if bad else ""))


def test_sequence_and_width(verdict):
    seq_bad = [n for n in range(31) if not (b_sequence(n) == 2**n + 2 == b_recurrence(n))]
    rng = random.Random(88)
    width_bad = checked = 0
    for w in (4, 6, 8, 10, 18):
        for _ in range(5):
            f = random_kcnf(w, w + 2, 12, rng)
            phi, meta = split_once(f)
            checked += 1
            width_bad += phi.widths() != {w // 2 + 1} or meta.output_width != w // 2 + 1
    for k in range(1, 4):
        _, metas = split_to_3cnf(random_kcnf(b_sequence(k), b_sequence(k) + 1, 6, rng), k)
        for m in metas:
            checked += 1
            width_bad += m.output_width != m.input_width // 2 + 1
    ok = not seq_bad and width_bad == 0
    assert verdict(8, "closed form matches recurrence for n<=30 and split gives width w/2+1", ok,
                   f"sequence mismatches={seq_bad}, {checked} splits, {width_bad} width errors")


def test_split_preservation(verdict):
    t0 = time.perf_counter()
    rng = random.Random(4040)
    violations = sat = unsat = 0
    for _ in range(100):
        n = rng.randint(4, 8)
        available = 16 * comb(n, 4)
        f = random_kcnf(4, n, rng.randint(min(5 * n, available), min(16 * n, available)), rng)
        phi, _ = split_once(f)
        before = brute_force_sat(f).status
        after = dpll_sat(phi).status
        violations += before != after
        sat += before == "sat"
        unsat += before == "unsat"
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60.0
    assert verdict(9, "splitting preserves satisfiability on 100 width-4 formulas", ok,
                   f"{sat} sat, {unsat} unsat, {violations} violations, {elapsed:.1f}s")


def test_derived_clause_shape(verdict):
    violations = derived = 0
    for seed in range(20):
        base = random_unsat_kcnf(4, 6, 40, seed)
        phi, meta = split_once(base)
        db = ClauseDb.from_formula(phi)
        run_iteration(db)
        fresh = set(meta.fresh_variables)
        for c, _ in db.derived():
            derived += 1
            n_fresh = sum(abs(l) in fresh for l in c)
            n_orig = sum(abs(l) in meta.original_variables for l in c)
            violations += (n_orig, n_fresh) != (1, 2)
    ok = violations == 0 and derived > 0
    assert verdict(10, "first-iteration clauses on split instances have 1 original and 2 fresh literals", ok,
                   f"{derived} derived clauses over 20 instances, {violations} violations")


def test_dimacs_round_trip(verdict, tmp_path):
    rng = random.Random(515)
    formulas = []
    for i in range(100):
        kind = i % 4
        if kind == 0:
            formulas.append(random_3cnf(rng.randint(1, 12), rng.randint(0, 30), rng))
        elif kind == 1:
            formulas.append(random_kcnf(4, 8, rng.randint(1, 30), rng))
        elif kind == 2:
            formulas.append(split_once(random_kcnf(6, 9, rng.randint(1, 20), rng))[0])
        else:
            formulas.append(complete_unsat_cnf(rng.randint(1, 6), first_var=rng.randint(1, 5)))
    identity_bad = byte_bad = 0
    for i, f in enumerate(formulas):
        path = tmp_path / f"g{i}.cnf"
        write_dimacs(path, f)
        text = path.read_text()
        parsed = parse_dimacs(text)
        identity_bad += parsed != f
        byte_bad += emit_dimacs(parse_dimacs(emit_dimacs(parsed))) != text
    ok = identity_bad == 0 and byte_bad == 0
    assert verdict(11, "DIMACS parse/emit round trip on 100 generated files", ok,
                   f"{identity_bad} identity failures, {byte_bad} byte mismatches")
