"""Command line front end.

Exit codes: 10 satisfiable (claimed), 20 unsatisfiable, 0 success for
non-solving commands, 1 usage/input/config error, 3 a check failed
(unconfirmed scenario or an engine-UNSAT/oracle-SAT soundness failure).
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from .dimacs import DimacsError, read_dimacs
from .engine import (
    CLAIMED_SAT,
    BudgetExceeded,
    EngineConfig,
    EngineError,
    blowup_demo,
    quigley_solve,
)
from .forge import (
    ForgeError,
    all_scenarios,
    check_scenario,
    complete_unsat_cnf,
    lemma511_instance,
    lemma517_instance,
    lemma518_instance,
    random_unsat_kcnf,
    split_to_3cnf,
)
from .harness import (
    GeneratorSpec,
    RunManifest,
    digest_file,
    file_instances,
    generate,
    run_diff,
    write_generated,
    write_jsonl,
)
from .oracle import OracleError
from .oracle import solve as oracle_solve

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="base RNG seed")
    p.add_argument("--bound", type=int, default=d(3), help="clause length bound (default 3)")
    p.add_argument("--unbounded", action="store_true", default=d(False), help="disable the length bound")
    p.add_argument("--max-iterations", type=int, default=d(None))
    p.add_argument("--max-clauses", type=int, default=d(2_000_000), help="clause budget for the engine")
    p.add_argument("--oracle", choices=["brute", "dpll"], default=d("dpll"))
    p.add_argument("--report", type=Path, default=d(None), help="write JSON-lines records here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quigsat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        _add_globals(p, suppress=True)
        return p

    p = add("solve", help="run the bounded engine on a DIMACS file")
    p.add_argument("input", type=Path)

    p = add("oracle", help="decide a DIMACS file with the reference oracle")
    p.add_argument("input", type=Path)

    p = add("diff", help="compare engine and oracle verdicts")
    p.add_argument("inputs", type=Path, nargs="*")
    p.add_argument("--kind", choices=["complete-chain", "random-unsat-chain", "random-3cnf"])
    p.add_argument("--k", type=int, default=1, help="chain index (width b_k)")
    p.add_argument("--vars", type=int, default=8)
    p.add_argument("--clauses", type=int, default=20)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--oracle-budget", type=int, default=None,
                   help="DPLL decision budget or truth-table variable cap")

    p = add("gen", help="generate benchmark formulas")
    p.add_argument("kind", choices=["complete", "random-unsat", "split-chain"])
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--width", type=int, default=4)
    p.add_argument("--first-var", type=int, default=1)
    p.add_argument("--vars", type=int, default=6)
    p.add_argument("--clauses", type=int, default=40)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--base", default=None, help="completeW or a DIMACS path (split-chain)")

    p = add("lemma-check", help="confirm the derivation counterexamples")
    p.add_argument("--lemma", choices=["511", "517", "518", "all"], default="all")
    p.add_argument("--k", type=int, default=4, help="width parameter for 511")

    p = add("blowup", help="count unbounded expansions of (x1) in x1 & ... & xn")
    p.add_argument("n", type=int)
    p.add_argument("--budget", type=int, default=1 << 20, help="max clauses to materialize")
    return parser


def engine_config(args) -> EngineConfig:
    if not args.unbounded and args.bound < 1:
        raise UsageError("--bound must be >= 1")
    return EngineConfig(
        length_bound=args.bound,
        unbounded=args.unbounded,
        max_iterations=args.max_iterations,
        max_clauses=args.max_clauses,
    )


def _read(path: Path):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        formula = read_dimacs(path)
    for w in caught:
        print(f"warning: {path}: {w.message}", file=sys.stderr)
    return formula


def cmd_solve(args) -> int:
    formula = _read(args.input)
    config = engine_config(args)
    rep = quigley_solve(formula, config)
    print(f"s {'SATISFIABLE' if rep.verdict == CLAIMED_SAT else 'UNSATISFIABLE'}")
    print(f"c verdict {rep.verdict}")
    print(f"c iterations {rep.iterations} added {rep.added_per_iteration}")
    print(f"c final clauses {rep.final_db_size}; discarded long {rep.discarded_long}, "
          f"tautologies {rep.discarded_tautologies}")
    if rep.contradiction_variable is not None:
        print(f"c contradiction on x{rep.contradiction_variable}")
    print(f"c elapsed {rep.elapsed:.3f}s")
    if args.report:
        write_jsonl(args.report, [{"input": str(args.input), "sha256": digest_file(args.input),
                                   "config": vars_config(config), **rep.to_dict()}])
    return EXIT_SAT if rep.verdict == CLAIMED_SAT else EXIT_UNSAT


def vars_config(config: EngineConfig) -> dict:
    return {
        "length_bound": config.length_bound,
        "unbounded": config.unbounded,
        "max_iterations": config.max_iterations,
        "max_clauses": config.max_clauses,
    }


def cmd_oracle(args) -> int:
    formula = _read(args.input)
    v = oracle_solve(formula, args.oracle)
    print(f"s {'SATISFIABLE' if v.sat else 'UNSATISFIABLE'}")
    if v.model is not None:
        print("v " + " ".join(str(k if b else -k) for k, b in sorted(v.model.items())) + " 0")
    print(f"c method {v.method} decisions {v.decisions} propagations {v.propagations}")
    if args.report:
        write_jsonl(args.report, [{"input": str(args.input), "status": v.status, **v.stats()}])
    return EXIT_SAT if v.sat else EXIT_UNSAT


def cmd_diff(args) -> int:
    config = engine_config(args)
    if args.inputs and args.kind:
        raise UsageError("give input files or --kind, not both")
    if args.inputs:
        instances = list(file_instances(args.inputs))
    elif args.kind:
        spec = GeneratorSpec(args.kind, k=args.k, vars=args.vars, clauses=args.clauses,
                             count=args.count, seed=args.seed)
        instances = list(generate(spec))
    else:
        raise UsageError("diff needs input files or --kind")

    reports = run_diff(instances, config, args.oracle, args.oracle_budget, args.jobs)
    print(f"{'instance':<32} {'engine':<12} {'oracle':<13} result")
    for r in reports:
        result = "FATAL" if r.fatal else "MISMATCH" if r.mismatch else "error" if r.error else "agree"
        if r.oracle_verdict == "inconclusive":
            result = "inconclusive"
        print(f"{r.instance_id:<32} {str(r.engine_verdict):<12} {r.oracle_verdict:<13} {result}")
    n_mis = sum(r.mismatch for r in reports)
    n_fatal = sum(r.fatal for r in reports)
    print(f"{len(reports)} instances, {n_mis} mismatches (claimed_sat on UNSAT), {n_fatal} soundness failures")
    if args.report:
        write_jsonl(args.report, [r.to_dict() for r in reports])
    return EXIT_CHECK_FAILED if n_fatal else 0


def _base_formula(base: str):
    if base.startswith("complete") and base[len("complete"):].isdigit():
        return complete_unsat_cnf(int(base[len("complete"):])), {"base": base}
    path = Path(base)
    if not path.exists():
        raise UsageError(f"--base must be completeW or an existing file, got {base!r}")
    return _read(path), {"base": str(path), "base_sha256": digest_file(path)}


def cmd_gen(args) -> int:
    metadata: dict = {}
    if args.kind == "complete":
        formula = complete_unsat_cnf(args.width, args.first_var)
        config = {"kind": "complete", "width": args.width, "first_var": args.first_var}
    elif args.kind == "random-unsat":
        formula = random_unsat_kcnf(args.width, args.vars, args.clauses, args.seed)
        config = {"kind": "random-unsat", "width": args.width, "vars": args.vars,
                  "clauses": args.clauses, "seed": args.seed}
    else:
        if args.base is None:
            raise UsageError("split-chain needs --base")
        base, info = _base_formula(args.base)
        formula, metas = split_to_3cnf(base, args.k)
        config = {"kind": "split-chain", "k": args.k, **info}
        metadata["splits"] = [m.to_dict() for m in metas]
    manifest = RunManifest(command=f"gen {args.kind}", config=config)
    if "base_sha256" in config:
        manifest.inputs["base"] = config["base_sha256"]
    sidecar = write_generated(args.output, formula, manifest, metadata)
    print(f"wrote {args.output} ({len(formula)} clauses, {formula.num_variables} variables, "
          f"widths {sorted(formula.widths())}); metadata in {sidecar}")
    return 0


def cmd_lemma_check(args) -> int:
    if args.lemma == "511":
        if args.k < 4:
            raise UsageError("--k must be >= 4 for lemma 511")
        scenarios = [lemma511_instance(args.k)]
    elif args.lemma == "517":
        scenarios = [lemma517_instance()]
    elif args.lemma == "518":
        scenarios = [lemma518_instance()]
    else:
        scenarios = all_scenarios()
    reports = [check_scenario(s) for s in scenarios]
    print(f"{'scenario':<8} {'k':>3} {'hyp':>5} {'cap k-1':>8} {'cap k':>6}  verdict")
    for r in reports:
        print(f"{r.scenario:<8} {r.k:>3} {str(r.hypotheses_ok):>5} "
              f"{str(r.target_in_bounded_closure):>8} {str(r.target_in_relaxed_closure):>6}  "
              f"{'confirmed' if r.confirmed else 'NOT CONFIRMED'}")
        for f in r.failures:
            print(f"    {f}")
    if args.report:
        write_jsonl(args.report, [r.to_dict() for r in reports])
    return 0 if all(r.confirmed for r in reports) else EXIT_CHECK_FAILED


def cmd_blowup(args) -> int:
    if args.n < 1:
        raise UsageError("n must be >= 1")
    rows = []
    print(f"{'n':>4} {'full-length':>12} {'total':>12}")
    try:
        for n in range(1, args.n + 1):
            r = blowup_demo(n, max_clauses=args.budget)
            rows.append({"n": n, "full_length": r.full_length, "total": r.total,
                         "by_length": r.by_length, "enumerated": r.enumerated})
            print(f"{n:>4} {r.full_length:>12} {r.total:>12}")
    except BudgetExceeded as exc:
        print(f"budget exceeded at n={n}: {exc} (table is partial)", file=sys.stderr)
        return EXIT_ERROR
    finally:
        if args.report:
            write_jsonl(args.report, rows)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "diff": cmd_diff,
    "gen": cmd_gen,
    "lemma-check": cmd_lemma_check,
    "blowup": cmd_blowup,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DimacsError, EngineError, ForgeError, OracleError, OSError, ValueError) as exc:
        print(f"quigsat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
