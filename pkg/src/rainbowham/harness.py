"""Experiment harness: config parsing, seed management, Monte-Carlo runners,
Wilson aggregation, and CSV/JSON persistence.

Config is a JSON object with these keys (unknown keys are rejected):

  kind         "threshold" or "coupling"
  n, delta, C, q, seed_kind
               grid axes; scalars are promoted to one-element lists and the
               grid is their Cartesian product in the listed nesting order
               (n outermost, seed_kind innermost)
  solver       "brute", "exact", or "pipeline" ("coupling" allows brute/exact)
  trials       per-cell trial count, >= 1
  master_seed  64-bit integer
  budget       optional node budget for the exact solver
  indices      coupling only: list of chain indices
  pipeline     pipeline solver only: {"mu", "d", "k", "triangle_target"}
  clock        "none" (default) or "wall"; "none" reports mean_ms as 0.000
               so reruns are byte-identical, "wall" records real times
  output       optional default output path for the CLI

Per-trial randomness is RngStream(master_seed) descended through a label
containing the experiment kind, every cell coordinate (floats via repr), the
chain index when present, and the trial index; distinct trials therefore get
pairwise distinct, statistically independent streams.

CSV schema (fixed order, one row per cell):
  kind,n,delta,C,q,solver,trials,successes,proportion,wilson_lo,wilson_hi,
  mean_ms,seed_kind,i
with proportion and the interval printed to six decimals, mean_ms to three,
and i empty for threshold rows.  Row order equals grid order.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import time
from dataclasses import asdict, dataclass
from typing import Iterable

from .graph import verify_rainbow_hamilton_cycle
from .models import (
    ModelParams,
    SEED_KINDS,
    chain_length,
    make_seed_digraph,
    round_half_up,
    sample_gamma,
    sample_perturbed_coloured,
)
from .pipeline import PipelineFailure, PipelineParams, assemble_hamilton_cycle
from .rng import RngStream
from .search import BRUTE_FORCE_MAX_N, brute_force_rainbow_hc, exact_rainbow_hc

SOLVERS = ("brute", "exact", "pipeline")
_CONFIG_KEYS = {
    "kind", "n", "delta", "C", "q", "seed_kind", "solver", "trials",
    "master_seed", "budget", "indices", "pipeline", "clock", "output",
}
_PIPELINE_KEYS = {"mu", "d", "k", "triangle_target"}

CSV_COLUMNS = (
    "kind", "n", "delta", "C", "q", "solver", "trials", "successes",
    "proportion", "wilson_lo", "wilson_hi", "mean_ms", "seed_kind", "i",
)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """95% Wilson score interval (clamped to [0, 1])."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not (0 <= successes <= trials):
        raise ValueError("successes must lie in 0..trials")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    return (max(0.0, centre - half), min(1.0, centre + half))


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: tuple[int, ...]
    delta: tuple[float, ...]
    C: tuple[float, ...]
    q: tuple[float, ...]
    seed_kind: tuple[str, ...]
    solver: str
    trials: int
    master_seed: int
    budget: int | None = None
    indices: tuple[int, ...] | None = None
    pipeline: PipelineParams | None = None
    clock: str = "none"
    output: str | None = None

    def __post_init__(self):
        if self.kind not in ("threshold", "coupling"):
            raise ValueError(f"unknown kind: {self.kind!r}")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver: {self.solver!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.clock not in ("none", "wall"):
            raise ValueError(f"unknown clock: {self.clock!r}")
        for axis in ("n", "delta", "C", "q", "seed_kind"):
            if not getattr(self, axis):
                raise ValueError(f"grid axis {axis} is empty")
        for sk in self.seed_kind:
            if sk not in SEED_KINDS:
                raise ValueError(f"unknown seed_kind: {sk!r}")
            if sk == "from-file":
                raise ValueError("from-file seeds are not runnable from a grid")
        if self.kind == "coupling":
            if self.solver == "pipeline":
                raise ValueError("coupling experiments support brute/exact only")
            if not self.indices:
                raise ValueError("coupling experiments need chain indices")
            for sk in self.seed_kind:
                if sk not in ("complete-bidirected", "complete-bipartite-bidirected"):
                    raise ValueError("coupling needs a bidirected seed kind")
            for n in self.n:
                for i in self.indices:
                    if not (0 <= i <= chain_length(n)):
                        raise ValueError(f"chain index {i} out of range for n={n}")
        elif self.indices is not None:
            raise ValueError("indices are only valid for coupling experiments")
        if self.solver == "brute":
            for n in self.n:
                if n > BRUTE_FORCE_MAX_N:
                    raise ValueError(f"brute solver needs n <= {BRUTE_FORCE_MAX_N}")
        if self.solver == "pipeline":
            for n, q in itertools.product(self.n, self.q):
                if round_half_up(q * n) != n:
                    raise ValueError(
                        f"pipeline solver needs round(q*n) = n, got n={n}, q={q}"
                    )
        elif self.pipeline is not None:
            raise ValueError("pipeline params are only valid for the pipeline solver")

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        unknown = set(obj) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key in ("kind", "solver", "trials", "master_seed"):
            if key not in obj:
                raise ValueError(f"missing config key: {key}")
        pipe = None
        if obj.get("pipeline") is not None:
            pd = dict(obj["pipeline"])
            bad = set(pd) - _PIPELINE_KEYS
            if bad:
                raise ValueError(f"unknown pipeline keys: {sorted(bad)}")
            pipe = PipelineParams(**pd)
        return cls(
            kind=obj["kind"],
            n=tuple(int(v) for v in _as_list(obj.get("n", []))),
            delta=tuple(float(v) for v in _as_list(obj.get("delta", []))),
            C=tuple(float(v) for v in _as_list(obj.get("C", []))),
            q=tuple(float(v) for v in _as_list(obj.get("q", []))),
            seed_kind=tuple(str(v) for v in _as_list(obj.get("seed_kind", []))),
            solver=obj["solver"],
            trials=int(obj["trials"]),
            master_seed=int(obj["master_seed"]),
            budget=None if obj.get("budget") is None else int(obj["budget"]),
            indices=None if obj.get("indices") is None
            else tuple(int(i) for i in obj["indices"]),
            pipeline=pipe,
            clock=obj.get("clock", "none"),
            output=obj.get("output"),
        )

    def cells(self) -> list[tuple[int, float, float, float, str]]:
        return list(
            itertools.product(self.n, self.delta, self.C, self.q, self.seed_kind)
        )


@dataclass(frozen=True)
class TrialResult:
    """One trial: its cell, index, outcome, and wall time.

    outcome is 'found', 'not-found', 'budget-exhausted', or
    'pipeline-failure(<stage>)'.
    """

    cell: tuple
    index: int
    outcome: str
    wall_ms: float

    @property
    def success(self) -> bool:
        return self.outcome == "found"


@dataclass(frozen=True)
class CellRow:
    kind: str
    n: int
    delta: float
    C: float
    q: float
    seed_kind: str
    solver: str
    trials: int
    successes: int
    proportion: float
    wilson_lo: float
    wilson_hi: float
    mean_ms: float
    i: int | None = None


@dataclass(frozen=True)
class ExperimentTable:
    rows: tuple[CellRow, ...]

    def __post_init__(self):
        for r in self.rows:
            if not (0 <= r.successes <= r.trials):
                raise ValueError("successes must lie in 0..trials")


def _cell_stream(config: ExperimentConfig, cell: tuple, extra: tuple = ()) -> RngStream:
    n, delta, c_val, q, seed_kind = cell
    return RngStream(config.master_seed).child(
        config.kind, n, repr(delta), repr(c_val), repr(q), seed_kind, *extra
    )


def _solve_outcome(config: ExperimentConfig, d, stream: RngStream) -> str:
    if config.solver == "brute":
        out = brute_force_rainbow_hc(d)
    elif config.solver == "exact":
        out = exact_rainbow_hc(d, config.budget)
    else:
        try:
            cycle = assemble_hamilton_cycle(
                d, config.pipeline or PipelineParams(), stream.child("pipeline")
            )
        except PipelineFailure as exc:
            return f"pipeline-failure({exc.stage})"
        if not verify_rainbow_hamilton_cycle(d, cycle):
            raise AssertionError("pipeline returned an unverified cycle")
        return "found"
    if out.status == "found" and not verify_rainbow_hamilton_cycle(d, out.cycle):
        raise AssertionError("solver returned an unverified cycle")
    return out.status


def run_threshold_trials(config: ExperimentConfig) -> list[TrialResult]:
    if config.kind != "threshold":
        raise ValueError("config kind must be threshold")
    results: list[TrialResult] = []
    for cell in config.cells():
        n, delta, c_val, q, seed_kind = cell
        params = ModelParams(n=n, delta=delta, C=c_val, q=q, seed_kind=seed_kind)
        for t in range(config.trials):
            stream = _cell_stream(config, cell, ("trial", t))
            t0 = time.perf_counter() if config.clock == "wall" else 0.0
            dig = sample_perturbed_coloured(params, stream.child("model"))
            outcome = _solve_outcome(config, dig, stream)
            ms = (time.perf_counter() - t0) * 1000.0 if config.clock == "wall" else 0.0
            results.append(TrialResult(cell, t, outcome, ms))
    return results


def run_coupling_trials(config: ExperimentConfig) -> list[TrialResult]:
    if config.kind != "coupling":
        raise ValueError("config kind must be coupling")
    results: list[TrialResult] = []
    for cell in config.cells():
        n, delta, c_val, q, seed_kind = cell
        kappa = round_half_up(q * n)
        g0 = make_seed_digraph(seed_kind, n, delta)
        for i in config.indices:
            for t in range(config.trials):
                stream = _cell_stream(config, cell, ("chain", i, "trial", t))
                t0 = time.perf_counter() if config.clock == "wall" else 0.0
                dig = sample_gamma(g0, i, c_val, kappa, stream.child("gamma"))
                outcome = _solve_outcome(config, dig, stream)
                ms = (time.perf_counter() - t0) * 1000.0 if config.clock == "wall" else 0.0
                results.append(TrialResult((*cell, i), t, outcome, ms))
    return results


def _aggregate(
    config: ExperimentConfig, trials: Iterable[TrialResult], cell: tuple, i: int | None
) -> CellRow:
    group = [tr for tr in trials]
    succ = sum(1 for tr in group if tr.success)
    count = len(group)
    lo, hi = wilson_interval(succ, count)
    mean_ms = sum(tr.wall_ms for tr in group) / count
    n, delta, c_val, q, seed_kind = cell
    return CellRow(
        kind=config.kind, n=n, delta=delta, C=c_val, q=q, seed_kind=seed_kind,
        solver=config.solver, trials=count, successes=succ,
        proportion=succ / count, wilson_lo=lo, wilson_hi=hi, mean_ms=mean_ms, i=i,
    )


def run_threshold_experiment(config: ExperimentConfig) -> ExperimentTable:
    """One aggregate row per grid cell, in grid order."""
    trials = run_threshold_trials(config)
    rows = []
    for cell in config.cells():
        rows.append(
            _aggregate(config, [t for t in trials if t.cell == cell], cell, None)
        )
    return ExperimentTable(tuple(rows))


def run_coupling_experiment(config: ExperimentConfig) -> ExperimentTable:
    """One aggregate row per (grid cell, chain index), indices inner."""
    trials = run_coupling_trials(config)
    rows = []
    for cell in config.cells():
        for i in config.indices:
            key = (*cell, i)
            rows.append(
                _aggregate(config, [t for t in trials if t.cell == key], cell, i)
            )
    return ExperimentTable(tuple(rows))


def run_experiment(config: ExperimentConfig) -> ExperimentTable:
    if config.kind == "threshold":
        return run_threshold_experiment(config)
    return run_coupling_experiment(config)


def emit_results(table: ExperimentTable, fmt: str, path) -> None:
    """CSV (documented schema, six/three decimal formatting) or JSON (exact
    floats; round-trips through load_table)."""
    if fmt == "csv":
        with open(path, "w", encoding="ascii", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for r in table.rows:
                writer.writerow([
                    r.kind, r.n, repr(r.delta), repr(r.C), repr(r.q), r.solver,
                    r.trials, r.successes, f"{r.proportion:.6f}",
                    f"{r.wilson_lo:.6f}", f"{r.wilson_hi:.6f}", f"{r.mean_ms:.3f}",
                    r.seed_kind, "" if r.i is None else r.i,
                ])
        return
    if fmt == "json":
        payload = {"schema": "results/v1", "rows": [asdict(r) for r in table.rows]}
        with open(path, "w", encoding="ascii") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    raise ValueError(f"unknown format: {fmt!r}")


def load_table(path) -> ExperimentTable:
    """Inverse of emit_results for the JSON format."""
    with open(path, "r", encoding="ascii") as fh:
        payload = json.load(fh)
    if payload.get("schema") != "results/v1":
        raise ValueError("not a results/v1 document")
    return ExperimentTable(tuple(CellRow(**row) for row in payload["rows"]))
