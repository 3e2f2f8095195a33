"""Experiment orchestration: run baselines, log runs, bootstrap refsets.

Every problem gets a fresh archive and an independent random stream
derived from the master seed and the problem key, so per-problem results
do not depend on which other problems run or in what order, and a
repeated run with the same configuration is byte-identical on disk.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from bibench import baselines, datalog, refset, suite
from bibench.archive import Archive
from bibench.core import ObjectiveVector, ProblemSpec, normalize
from bibench.indicator import EMPTY_ARCHIVE_VALUE, evaluate_incremental
from bibench.targets import RuntimeRecord, absolute_targets

__all__ = [
    "ALGORITHMS",
    "DEFAULT_BOOTSTRAP_BUDGET",
    "BOOTSTRAP_WEIGHTS",
    "ExperimentConfig",
    "RunResult",
    "bootstrap_refsets",
    "default_budget",
    "run_experiment",
]

# Bootstrapping sweeps a much denser weight grid than the registered
# baseline: the scalarized optima alone must trace the front closely
# enough that the reference hypervolume approaches the true front's.
BOOTSTRAP_WEIGHTS = tuple(k / 100.0 for k in range(101))
DEFAULT_BOOTSTRAP_BUDGET = 100_000

ALGORITHMS: dict[str, Callable] = {
    "random": baselines.random_search,
    "hillclimber": baselines.scalarized_hill_climber,
}

# Stream labels mixed into per-problem seeds.
_PURPOSE_RUN = 1
_PURPOSE_BOOTSTRAP = 2


def default_budget(dimension: int) -> int:
    """Default per-problem evaluation budget: 10^4 * dimension."""
    return 10_000 * dimension


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment needs; immutable and reusable."""

    algorithm: str
    output_dir: Path
    seed: int
    functions: tuple[str, ...] = suite.FUNCTION_IDS
    dimensions: tuple[int, ...] = suite.DIMENSIONS
    instances: tuple[int, ...] = suite.INSTANCE_IDS
    budget: int | None = None  # None: 10^4 * dimension per problem
    refset_dir: Path | None = None  # None: bootstrap mode
    bootstrap_budget: int = DEFAULT_BOOTSTRAP_BUDGET

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}, expected one of "
                f"{sorted(ALGORITHMS)}"
            )
        if self.budget is not None and self.budget < 1:
            raise ValueError(f"budget must be positive, got {self.budget}")

    def budget_for(self, dimension: int) -> int:
        return self.budget if self.budget is not None else default_budget(dimension)


@dataclass
class RunResult:
    """Live outcome of one problem's run."""

    function_id: str
    instance_id: int
    dimension: int
    algorithm: str
    spec: ProblemSpec
    runtimes: RuntimeRecord
    log_path: Path
    archive_size: int


class _RunContext:
    """Owns the evaluation counter and all per-evaluation bookkeeping.

    Baselines only ever see the bound ``evaluate`` method, which keeps
    them black-box by construction.
    """

    def __init__(self, fn: suite.SuiteFunction, spec: ProblemSpec, budget: int) -> None:
        self._fn = fn
        self._spec = spec
        self._budget = budget
        self._count = 0
        self.archive = Archive()
        self.value = EMPTY_ARCHIVE_VALUE
        self.runtimes = RuntimeRecord(absolute_targets(spec))
        self.records: list[datalog.LogRecord] = []

    def evaluate(self, x: np.ndarray) -> tuple[float, float]:
        if self._count >= self._budget:
            raise RuntimeError(f"evaluation budget {self._budget} exhausted")
        self._count += 1
        y = self._fn.evaluate(x)
        outcome = self.archive.insert(normalize(y, self._spec), self._count, x)
        self.value = evaluate_incremental(self.value, outcome, self.archive)
        self.runtimes.record(self._count, self.value)
        if outcome.accepted:
            self.records.append(
                datalog.LogRecord(self._count, y, tuple(float(c) for c in x))
            )
        return y.f_alpha, y.f_beta


class _CollectContext:
    """Bootstrap-mode context: only counts evaluations and keeps raw pairs."""

    def __init__(self, fn: suite.SuiteFunction, budget: int) -> None:
        self._fn = fn
        self._budget = budget
        self._count = 0
        self.points: list[ObjectiveVector] = []

    def evaluate(self, x: np.ndarray) -> tuple[float, float]:
        if self._count >= self._budget:
            raise RuntimeError(f"evaluation budget {self._budget} exhausted")
        self._count += 1
        y = self._fn.evaluate(x)
        self.points.append(y)
        return y.f_alpha, y.f_beta


def _problem_rng(master_seed: int, purpose: int, algo_index: int,
                 function_id: str, dimension: int, instance_id: int) -> np.random.Generator:
    fid_index = suite.FUNCTION_IDS.index(function_id) + 1
    seed = suite.mix_seed(master_seed, purpose, algo_index, fid_index, dimension, instance_id)
    return np.random.default_rng(seed)


def _load_refset(refset_dir: Path, fid: str, dim: int, inst: int) -> refset.ReferenceSet:
    path = refset.refset_path(refset_dir, fid, dim, inst)
    if not path.is_file():
        raise FileNotFoundError(
            f"no reference set for problem {suite.problem_id(fid, dim, inst)} "
            f"(expected {path})"
        )
    rs = refset.read_reference_set(path)
    if (rs.function_id, rs.dimension, rs.instance_id) != (fid, dim, inst):
        raise ValueError(
            f"{path}: file is for {rs.function_id}:{rs.dimension}:{rs.instance_id}, "
            f"not {suite.problem_id(fid, dim, inst)}"
        )
    return rs


def bootstrap_refsets(
    output_dir: Path | str,
    seed: int,
    budget: int = DEFAULT_BOOTSTRAP_BUDGET,
    functions: Sequence[str] | None = None,
    dimensions: Sequence[int] | None = None,
    instances: Sequence[int] | None = None,
    progress: Callable[[str], None] | None = None,
) -> list[Path]:
    """Build one reference set per problem from all built-in baselines.

    Each baseline runs with the full ``budget`` on every problem; the
    union of everything either evaluated is filtered to its non-dominated
    subset.  Bounds are analytic where the suite knows them (always the
    ideal; the nadir only for ``f1``), otherwise estimated from the merged
    front's extremes.  Bootstrapping twice with the same seed yields
    identical files, hence identical versions.
    """
    output_dir = Path(output_dir)
    hill_climber = functools.partial(
        baselines.scalarized_hill_climber, weights=BOOTSTRAP_WEIGHTS
    )
    bootstrap_algos = ((1, baselines.random_search), (2, hill_climber))
    written: list[Path] = []
    for fid, dim, inst in suite.enumerate_problems(functions, dimensions, instances):
        fn = suite.get_function(fid, inst, dim)
        collected: list[list[ObjectiveVector]] = []
        for algo_index, algo in bootstrap_algos:
            ctx = _CollectContext(fn, budget)
            rng = _problem_rng(seed, _PURPOSE_BOOTSTRAP, algo_index, fid, dim, inst)
            algo(ctx.evaluate, dim, budget, rng)
            collected.append(ctx.points)
        rs = refset.merge(
            collected,
            function_id=fid,
            instance_id=inst,
            dimension=dim,
            ideal=fn.analytic_ideal,
            nadir=fn.analytic_nadir,
        )
        path = refset.write_reference_set(rs, refset.refset_path(output_dir, fid, dim, inst))
        written.append(path)
        if progress is not None:
            progress(f"{fn.key}: {len(rs.points)} reference points, i_ref={rs.i_ref:.6f}")
    return written


def run_experiment(
    cfg: ExperimentConfig, progress: Callable[[str], None] | None = None
) -> list[RunResult]:
    """Run the configured baseline over the problem grid and write logs.

    Without a ``refset_dir`` the experiment first bootstraps reference
    sets into ``<output_dir>/refsets``.  Returns live per-problem results;
    the experiment index is written last.
    """
    problems = suite.enumerate_problems(cfg.functions, cfg.dimensions, cfg.instances)
    refset_dir = cfg.refset_dir
    if refset_dir is None:
        refset_dir = Path(cfg.output_dir) / "refsets"
        bootstrap_refsets(
            refset_dir,
            cfg.seed,
            cfg.bootstrap_budget,
            cfg.functions,
            cfg.dimensions,
            cfg.instances,
            progress=progress,
        )

    algo = ALGORITHMS[cfg.algorithm]
    results: list[RunResult] = []
    index_entries: list[datalog.IndexEntry] = []
    for fid, dim, inst in problems:
        fn = suite.get_function(fid, inst, dim)
        spec = _load_refset(Path(refset_dir), fid, dim, inst).problem_spec()
        budget = cfg.budget_for(dim)
        ctx = _RunContext(fn, spec, budget)
        rng = _problem_rng(cfg.seed, _PURPOSE_RUN, 0, fid, dim, inst)
        algo(ctx.evaluate, dim, budget, rng)

        header = datalog.RunHeader(
            function_id=fid,
            instance_id=inst,
            dimension=dim,
            algorithm=cfg.algorithm,
            refset_version=spec.refset_version,
            i_ref=spec.i_ref,
            ideal=spec.ideal,
            nadir=spec.nadir,
            budget=budget,
        )
        path = datalog.log_path(cfg.output_dir, cfg.algorithm, fid, dim, inst)
        datalog.write_log(datalog.RunLog(header, tuple(ctx.records)), path)
        index_entries.append(
            datalog.IndexEntry(path.name, fid, inst, dim, spec.refset_version)
        )
        results.append(
            RunResult(
                function_id=fid,
                instance_id=inst,
                dimension=dim,
                algorithm=cfg.algorithm,
                spec=spec,
                runtimes=ctx.runtimes,
                log_path=path,
                archive_size=len(ctx.archive),
            )
        )
        if progress is not None:
            progress(
                f"{fn.key} {cfg.algorithm}: {ctx.runtimes.hit_count}/"
                f"{len(ctx.runtimes.targets)} targets hit in {budget} evaluations"
            )
    write_dir = Path(cfg.output_dir) / cfg.algorithm
    datalog.write_experiment_index(write_dir, index_entries)
    return results
