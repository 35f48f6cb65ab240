"""Independent oracles and strategies shared by the test modules.

Nothing in here calls the code under test; expected values in the tests
are computed from these enumerations.
"""

from itertools import product

from hypothesis import strategies as st


def all_canonical_clauses(variables, max_len=None):
    """Every non-empty, non-tautological clause over ``variables``.

    Each variable is independently absent, positive or negative.
    """
    vs = sorted(variables)
    out = set()
    for choice in product((0, 1, -1), repeat=len(vs)):
        lits = tuple(s * v for s, v in zip(choice, vs) if s)
        if lits and (max_len is None or len(lits) <= max_len):
            out.add(lits)
    return out


def assignments(variables):
    vs = sorted(variables)
    for values in product((False, True), repeat=len(vs)):
        yield dict(zip(vs, values))


def clause_true(clause, a):
    return any(a[abs(l)] == (l > 0) for l in clause)


def formula_true(clauses, a):
    return all(clause_true(c, a) for c in clauses)


def naive_sat(clauses):
    vs = {abs(l) for c in clauses for l in c}
    return any(formula_true(clauses, a) for a in assignments(vs))


def naive_entails(clauses, target):
    vs = {abs(l) for c in list(clauses) + [target] for l in c}
    return all(clause_true(target, a) for a in assignments(vs) if formula_true(clauses, a))


@st.composite
def raw_clauses(draw, max_var=6, max_len=4, allow_taut=True):
    n = draw(st.integers(1, max_len))
    vs = draw(st.lists(st.integers(1, max_var), min_size=n, max_size=n))
    lits = [v if draw(st.booleans()) else -v for v in vs]
    if not allow_taut:
        seen = {}
        lits = [seen.setdefault(abs(l), l) for l in lits]
    return lits


@st.composite
def canonical_clause(draw, max_var=6, max_len=4, min_len=1):
    vs = draw(st.lists(st.integers(1, max_var), min_size=min_len, max_size=max_len, unique=True))
    return tuple(sorted((v if draw(st.booleans()) else -v for v in vs), key=abs))


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
