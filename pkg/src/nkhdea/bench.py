"""Experiment sweeps over (N, K, P) cells with shared landscapes and start points.

For every cell ``landscapes_per_cell`` landscapes are generated (or loaded
from disk), and each algorithm is run ``runs_per_landscape`` times on each of
them. Runs with the same ``(landscape_idx, run_idx)`` share the initial
population across algorithms. Rows are sorted canonically before any
aggregation so the outputs do not depend on scheduling.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from . import __version__
from .engines import Algorithm, RunConfig, run
from .errors import ConfigurationError, ParseError
from .nk_model import generate, load, save
from .stats import paired_t_test, summarize, welch_t_test

_MASK64 = (1 << 64) - 1
_NO_RUN = _MASK64
_ALGORITHM_IDS = {None: 0, Algorithm.EA: 1, Algorithm.HDEA: 2, Algorithm.H2P: 3}

CSV_COLUMNS = (
    "n", "k", "p", "algorithm", "landscape_idx", "run_idx",
    "landscape_seed", "run_seed", "final_best", "final_mean", "evaluations",
)

# (challenger, baseline) pairs tested in every cell where both were run.
COMPARISONS = ((Algorithm.HDEA, Algorithm.EA), (Algorithm.H2P, Algorithm.EA))

TEST_METHOD = "welch unpaired two-tailed, alpha=0.05 (paired view reported, not used)"


def _mix64(z):
    # splitmix64 finalizer: a bijection on 64-bit integers with full avalanche.
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed, n, k, landscape_idx, run_idx=None, algorithm=None) -> int:
    """Stable 64-bit seed for one landscape (``run_idx=None``) or one run.

    Fields are absorbed one at a time with ``h = mix(h ^ field)``. Every
    absorption is a bijection of ``h``, so two inputs differing in exactly
    one field can never collide.
    """
    algo_id = _ALGORITHM_IDS[None if algorithm is None else Algorithm(algorithm)]
    run_id = _NO_RUN if run_idx is None else run_idx
    h = _mix64(master_seed & _MASK64)
    for value in (n, k, landscape_idx, run_id, algo_id):
        h = _mix64(h ^ (value & _MASK64))
    return h


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple = (50, 100)
    k_values: tuple = (0, 2, 4, 6, 8, 10, 15)
    p_values: tuple = (30,)
    landscapes_per_cell: int = 10
    runs_per_landscape: int = 10
    generations: int = 20_000
    algorithms: tuple = (Algorithm.EA, Algorithm.HDEA)
    master_seed: int = 0

    def __post_init__(self):
        for name in ("n_values", "k_values", "p_values"):
            values = getattr(self, name)
            if isinstance(values, (int, str)):
                values = (values,)
            values = tuple(int(v) for v in values)
            if not values:
                raise ConfigurationError(f"{name} must not be empty")
            object.__setattr__(self, name, values)
        try:
            algorithms = tuple(Algorithm(a) for a in self.algorithms)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        if not algorithms or len(set(algorithms)) != len(algorithms):
            raise ConfigurationError("algorithms must be a non-empty list without repeats")
        object.__setattr__(self, "algorithms", algorithms)

        problems = []
        if any(n < 2 for n in self.n_values):
            problems.append("every n must be >= 2")
        if any(k < 0 for k in self.k_values):
            problems.append("every k must be >= 0")
        bad = [(n, k) for n in self.n_values for k in self.k_values if k >= n]
        if bad:
            problems.append(f"k must be < n, violated by (n, k) in {bad}")
        if any(p < 2 for p in self.p_values):
            problems.append("every p must be >= 2")
        for name in ("landscapes_per_cell", "runs_per_landscape"):
            if getattr(self, name) < 1:
                problems.append(f"{name} must be positive")
        if self.generations < 0:
            problems.append("generations must be >= 0")
        if not 0 <= self.master_seed <= _MASK64:
            problems.append("master_seed must be an unsigned 64-bit integer")
        if problems:
            raise ConfigurationError("invalid sweep config: " + "; ".join(problems))

    def to_dict(self):
        d = asdict(self)
        for name in ("n_values", "k_values", "p_values"):
            d[name] = list(d[name])
        d["algorithms"] = [a.value for a in self.algorithms]
        return d

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"config is not valid JSON: {exc.msg}", exc.lineno) from None
        if not isinstance(data, dict):
            raise ParseError("config must be a flat JSON object", 1)
        return cls.from_dict(data)

    def cells(self):
        return [(n, k, p) for n in self.n_values for k in self.k_values for p in self.p_values]


@dataclass(frozen=True)
class RunRow:
    n: int
    k: int
    p: int
    algorithm: str
    landscape_idx: int
    run_idx: int
    landscape_seed: int
    run_seed: int
    final_best: float
    final_mean: float
    evaluations: int

    def sort_key(self):
        return (self.n, self.k, self.p, self.landscape_idx, self.run_idx,
                Algorithm(self.algorithm).code)


@dataclass
class CellResult:
    n: int
    k: int
    p: int
    samples: dict = field(default_factory=dict)
    summaries: dict = field(default_factory=dict)
    welch: dict = field(default_factory=dict)
    paired: dict = field(default_factory=dict)

    def verdict(self, challenger, baseline) -> str:
        res = self.welch[(Algorithm(challenger), Algorithm(baseline))]
        if not res.significant_at_05:
            return "n.s."
        winner, loser = (challenger, baseline) if res.t_statistic > 0 else (baseline, challenger)
        return f"{Algorithm(winner).value}>{Algorithm(loser).value}"


@dataclass
class SweepResult:
    rows: list
    cells: dict
    provenance: dict = field(default_factory=dict)

    def cell(self, n, k, p) -> CellResult:
        return self.cells[(n, k, p)]


def aggregate(rows) -> dict:
    """Group rows by cell and compute summaries and significance tests.

    Both the sweep and the CSV reload path go through here, so summaries
    written from either are identical.
    """
    rows = sorted(rows, key=RunRow.sort_key)
    cells = {}
    for row in rows:
        key = (row.n, row.k, row.p)
        cell = cells.get(key)
        if cell is None:
            cell = cells[key] = CellResult(*key)
        cell.samples.setdefault(Algorithm(row.algorithm), []).append(row.final_best)
    for cell in cells.values():
        for algo, xs in cell.samples.items():
            cell.summaries[algo] = summarize(xs)
        for challenger, baseline in COMPARISONS:
            a, b = cell.samples.get(challenger), cell.samples.get(baseline)
            if a is None or b is None or len(a) < 2 or len(b) < 2:
                continue
            cell.welch[(challenger, baseline)] = welch_t_test(a, b)
            if len(a) == len(b):
                cell.paired[(challenger, baseline)] = paired_t_test(a, b)
    return cells


def _landscape_path(directory, n, k, idx):
    return os.path.join(directory, f"n{n}_k{k}_l{idx}.nk")


def landscape_seeds(cfg: SweepConfig) -> dict:
    return {
        (n, k, idx): derive_seed(cfg.master_seed, n, k, idx)
        for n in cfg.n_values for k in cfg.k_values for idx in range(cfg.landscapes_per_cell)
    }


def write_landscapes(cfg: SweepConfig, directory) -> list:
    """Generate every landscape of the sweep and save it under ``directory``."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for (n, k, idx), seed in landscape_seeds(cfg).items():
        path = _landscape_path(directory, n, k, idx)
        save(generate(n, k, seed), path)
        paths.append(path)
    return paths


def _obtain_landscape(n, k, idx, seed, directory):
    if directory is None:
        return generate(n, k, seed)
    path = _landscape_path(directory, n, k, idx)
    if os.path.exists(path):
        ls = load(path)
        if (ls.n, ls.k, ls.seed) != (n, k, seed):
            raise ConfigurationError(
                f"{path} holds (n={ls.n}, k={ls.k}, seed={ls.seed}); "
                f"the sweep expects (n={n}, k={k}, seed={seed})"
            )
        return ls
    os.makedirs(directory, exist_ok=True)
    ls = generate(n, k, seed)
    save(ls, path)
    return ls


def _one_run(task):
    n, k, p, algo, l_idx, r_idx, l_seed, r_seed, ls, generations = task
    rec = run(RunConfig(n, k, p, generations, algo, r_seed, ls))
    return RunRow(n, k, p, algo.value, l_idx, r_idx, l_seed, r_seed,
                  rec.final_best, rec.final_mean, rec.evaluations)


def run_sweep(cfg: SweepConfig, threads: int = 1, landscape_dir=None, progress=None) -> SweepResult:
    """Execute every run of ``cfg``.

    ``landscape_dir`` persists landscapes: existing files are loaded (and
    checked against their expected seed), missing ones are generated and
    written. ``progress`` is called with ``(done, total)`` after each run.
    """
    if threads < 1:
        raise ConfigurationError("threads must be >= 1")
    started = time.perf_counter()
    seeds = landscape_seeds(cfg)
    tasks = []
    for n in cfg.n_values:
        for k in cfg.k_values:
            for l_idx in range(cfg.landscapes_per_cell):
                l_seed = seeds[(n, k, l_idx)]
                ls = _obtain_landscape(n, k, l_idx, l_seed, landscape_dir)
                for p in cfg.p_values:
                    for r_idx in range(cfg.runs_per_landscape):
                        r_seed = derive_seed(cfg.master_seed, n, k, l_idx, r_idx)
                        for algo in cfg.algorithms:
                            tasks.append((n, k, p, algo, l_idx, r_idx, l_seed, r_seed, ls,
                                          cfg.generations))

    rows = []
    if threads == 1:
        for task in tasks:
            rows.append(_one_run(task))
            if progress:
                progress(len(rows), len(tasks))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for row in pool.map(_one_run, tasks):
                rows.append(row)
                if progress:
                    progress(len(rows), len(tasks))
    rows.sort(key=RunRow.sort_key)

    provenance = {
        "code_version": __version__,
        "config": cfg.to_dict(),
        "config_sha256": cfg.digest(),
        "landscape_seeds": {f"n{n}_k{k}_l{i}": s for (n, k, i), s in seeds.items()},
        "test_method": TEST_METHOD,
        "threads": threads,
        "wall_clock_seconds": round(time.perf_counter() - started, 3),
    }
    return SweepResult(rows, aggregate(rows), provenance)


# --- CSV -------------------------------------------------------------------


def rows_to_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in sorted(rows, key=RunRow.sort_key):
        writer.writerow([repr(v) if isinstance(v, float) else v for v in
                         (getattr(row, c) for c in CSV_COLUMNS)])
    return out.getvalue()


def rows_from_csv(text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ParseError(f"expected CSV header {','.join(CSV_COLUMNS)}", 1)
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if len(rec) != len(CSV_COLUMNS):
            raise ParseError(f"expected {len(CSV_COLUMNS)} fields, found {len(rec)}", lineno)
        try:
            values = dict(zip(CSV_COLUMNS, rec))
            Algorithm(values["algorithm"])
            rows.append(RunRow(
                n=int(values["n"]), k=int(values["k"]), p=int(values["p"]),
                algorithm=values["algorithm"],
                landscape_idx=int(values["landscape_idx"]), run_idx=int(values["run_idx"]),
                landscape_seed=int(values["landscape_seed"]), run_seed=int(values["run_seed"]),
                final_best=float(values["final_best"]), final_mean=float(values["final_mean"]),
                evaluations=int(values["evaluations"]),
            ))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return rows


def read_csv(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return rows_from_csv(fh.read())


def select(rows, **criteria) -> list:
    """Rows whose fields equal every ``criteria`` value (compared as strings)."""
    unknown = set(criteria) - set(CSV_COLUMNS)
    if unknown:
        raise ConfigurationError(f"unknown selector fields: {', '.join(sorted(unknown))}")
    return [r for r in rows
            if all(str(getattr(r, key)) == str(val) for key, val in criteria.items())]

