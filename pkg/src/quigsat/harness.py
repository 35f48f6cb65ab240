"""Experiment orchestration behind the command line: differential runs,
instance generators, run manifests and report records."""

from __future__ import annotations

import hashlib
import json
import platform
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional

from . import __version__
from .cnf import Formula, normalize
from .dimacs import emit_dimacs, read_dimacs
from .engine import CLAIMED_SAT, UNSAT as ENGINE_UNSAT, EngineConfig, EngineError, quigley_solve
from .forge import (
    b_sequence,
    complete_unsat_cnf,
    random_unsat_kcnf,
    split_to_3cnf,
)
from .oracle import SAT, UNSAT, OracleError, solve as oracle_solve

INCONCLUSIVE = "inconclusive"


@dataclass
class GeneratorSpec:
    """What to generate for ``diff``.

    kind is one of ``complete-chain`` (complete CNF of width b_k split k
    times), ``random-unsat-chain`` (random UNSAT width-b_k CNF split k times)
    or ``random-3cnf`` (clauses of width 1..3, SAT or UNSAT).
    """

    kind: str
    k: int = 1
    vars: int = 8
    clauses: int = 20
    count: int = 1
    seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def random_3cnf(n_vars: int, n_clauses: int, rng: random.Random, widths=(1, 2, 3, 3, 3)) -> Formula:
    """Random clauses of at most 3 literals; widths drawn from ``widths``."""
    clauses = []
    for _ in range(n_clauses):
        w = min(rng.choice(widths), n_vars)
        vs = rng.sample(range(1, n_vars + 1), w)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return normalize(clauses)


def generate(spec: GeneratorSpec) -> Iterator[tuple[str, Formula, dict]]:
    """Yield ``(instance_id, formula, generator_params)`` deterministically."""
    for i in range(spec.count):
        seed = spec.seed + i
        params = {**spec.to_dict(), "index": i, "instance_seed": seed}
        if spec.kind == "complete-chain":
            width = b_sequence(spec.k)
            phi, _ = split_to_3cnf(complete_unsat_cnf(width), spec.k)
            yield f"complete{width}-k{spec.k}-{i}", phi, params
        elif spec.kind == "random-unsat-chain":
            width = b_sequence(spec.k)
            base = random_unsat_kcnf(width, spec.vars, spec.clauses, seed)
            phi, _ = split_to_3cnf(base, spec.k)
            yield f"runsat{width}-k{spec.k}-s{seed}", phi, params
        elif spec.kind == "random-3cnf":
            phi = random_3cnf(spec.vars, spec.clauses, random.Random(seed))
            yield f"r3cnf-v{spec.vars}-c{spec.clauses}-s{seed}", phi, params
        else:
            raise ValueError(f"unknown generator kind {spec.kind!r}")


@dataclass
class DiscrepancyReport:
    instance_id: str
    generator: dict
    engine_verdict: Optional[str]
    oracle_verdict: str
    mismatch: bool
    fatal: bool
    engine_report: Optional[dict]
    oracle_stats: dict
    error: Optional[str] = None

    def to_dict(self, timings: bool = True) -> dict:
        d = asdict(self)
        if not timings and d["engine_report"]:
            d["engine_report"].pop("elapsed", None)
        return d


def diff_instance(
    instance_id: str,
    formula: Formula,
    generator: dict,
    config: EngineConfig,
    oracle: str = "dpll",
    oracle_budget: Optional[int] = None,
) -> DiscrepancyReport:
    """Run engine and oracle on one formula and compare."""
    kw = {}
    if oracle_budget is not None:
        kw = {"max_steps": oracle_budget} if oracle == "dpll" else {"max_vars": oracle_budget}
    try:
        ov = oracle_solve(formula, oracle, **kw)
        oracle_verdict, ostats = ov.status, ov.stats()
    except OracleError as exc:
        oracle_verdict, ostats = INCONCLUSIVE, {"method": oracle, "error": str(exc)}

    error = None
    try:
        rep = quigley_solve(formula, config)
        engine_verdict, engine_report = rep.verdict, rep.to_dict()
    except EngineError as exc:
        engine_verdict, engine_report, error = None, None, str(exc)

    mismatch = engine_verdict == CLAIMED_SAT and oracle_verdict == UNSAT
    fatal = engine_verdict == ENGINE_UNSAT and oracle_verdict == SAT
    return DiscrepancyReport(
        instance_id=instance_id,
        generator=generator,
        engine_verdict=engine_verdict,
        oracle_verdict=oracle_verdict,
        mismatch=mismatch,
        fatal=fatal,
        engine_report=engine_report,
        oracle_stats=ostats,
        error=error,
    )


def _diff_job(args):
    return diff_instance(*args)


def run_diff(
    instances,
    config: EngineConfig,
    oracle: str = "dpll",
    oracle_budget: Optional[int] = None,
    jobs: int = 1,
) -> list[DiscrepancyReport]:
    """Diff every ``(id, formula, params)``; results keep instance order."""
    work = [(iid, f, g, config, oracle, oracle_budget) for iid, f, g in instances]
    if jobs <= 1:
        return [_diff_job(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_diff_job, work))


def file_instances(paths) -> Iterator[tuple[str, Formula, dict]]:
    for p in paths:
        yield str(p), read_dimacs(p), {"kind": "file", "path": str(p), "sha256": digest_file(p)}


# ---------------------------------------------------------------------------
# manifests


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def digest_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: str
    config: dict
    inputs: dict = field(default_factory=dict)  # name -> sha256
    tool_version: str = __version__
    python: str = field(default_factory=platform.python_version)
    started: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    finished: Optional[str] = None

    def finish(self) -> "RunManifest":
        self.finished = datetime.now(timezone.utc).isoformat()
        return self

    def to_dict(self) -> dict:
        return asdict(self)


def write_jsonl(path, records) -> None:
    with open(path, "w") as f:
        for r in records:
            f.write(json.dumps(r, sort_keys=True) + "\n")


def write_generated(path, formula: Formula, manifest: RunManifest, metadata: dict) -> Path:
    """Write a DIMACS file plus ``<path>.meta.json`` holding manifest and metadata."""
    path = Path(path)
    comments = [f"generated by quigsat {__version__}: {manifest.command}"]
    comments += [f"{k} = {v}" for k, v in sorted(manifest.config.items())]
    text = emit_dimacs(formula, tuple(comments))
    path.write_text(text)
    manifest.inputs.setdefault("output", digest_text(text))
    sidecar = path.with_name(path.name + ".meta.json")
    sidecar.write_text(
        json.dumps({"manifest": manifest.finish().to_dict(), "metadata": metadata}, indent=2, sort_keys=True)
        + "\n"
    )
    return sidecar
