"""Benchmark harness: train every learner across dataset sizes and report.

For each (size, repetition) a dataset is generated from a seed derived
from (base seed, size, repetition), each requested learner is trained
and timed, and the records land in `results.csv` plus a per-cell summary
and two SVG charts.  Repetitions may run on worker threads; because all
randomness comes from the derived seeds and records are sorted before
emission, the outputs are identical at any thread count.  Wall-clock
columns are the one exception, which `record_timing=False` zeroes out
for byte-stable output.
"""

from __future__ import annotations

import csv
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .core import ExampleSet, LPList, count_satisfied
from .datagen import STAGE_GA, GenConfig, generate_dataset
from .learn_dp import compute_lpl
from .learn_ga import GaConfig, evolve
from .learn_greedy import greedy_lpl

__all__ = [
    "ALGORITHMS",
    "ExperimentConfig",
    "RunRecord",
    "evaluate",
    "rep_seed",
    "run_experiment",
    "emit_report",
    "read_results",
]

ALGORITHMS = ("dpa", "ga", "greedy")

RESULT_COLUMNS = ("algo", "m", "rep", "train_acc", "test_acc",
                  "train_s", "test_s", "total_s")

_CHART_STYLE = {"dpa": "o-", "ga": "s--", "greedy": "^:"}


@dataclass(frozen=True)
class ExperimentConfig:
    m_values: tuple[int, ...]
    algorithms: tuple[str, ...] = ALGORITHMS
    repetitions: int = 5
    seed: int = 0
    n: int = 10
    x: int = 5
    noise: float = 0.15
    train_fraction: float = 0.8
    ga: GaConfig = field(default_factory=GaConfig)
    threads: int = 1
    record_timing: bool = True

    def __post_init__(self):
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.m_values:
            raise ValueError("m_values must be nonempty")
        if any(m < 1 for m in self.m_values):
            raise ValueError("every m must be positive")
        if list(self.m_values) != sorted(set(self.m_values)):
            raise ValueError("m_values must be strictly ascending")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if not self.algorithms or unknown:
            raise ValueError(
                f"algorithms must be a nonempty subset of {ALGORITHMS}, "
                f"got {self.algorithms}"
            )
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass(frozen=True)
class RunRecord:
    algo: str
    m: int
    rep: int
    train_acc: float
    test_acc: float
    train_s: float
    test_s: float

    def __post_init__(self):
        if not 0.0 <= self.train_acc <= 1.0 or not 0.0 <= self.test_acc <= 1.0:
            raise ValueError(f"accuracy out of [0, 1] in {self!r}")
        if self.train_s < 0.0 or self.test_s < 0.0:
            raise ValueError(f"negative time in {self!r}")

    @property
    def total_s(self) -> float:
        return self.train_s + self.test_s


def evaluate(model: LPList, test: ExampleSet) -> float:
    """Fraction of test examples satisfied; ties count against the model."""
    if len(test) == 0:
        raise ValueError("cannot evaluate on an empty example set")
    return count_satisfied(model, test) / len(test)


def rep_seed(base_seed: int, m: int, rep: int) -> int:
    """Derived dataset seed for one repetition; stable across thread counts."""
    seq = np.random.SeedSequence([base_seed, m, rep])
    return int(seq.generate_state(1, np.uint64)[0])


def _train_one(algo: str, train: ExampleSet, ga: GaConfig,
               seed: int) -> LPList:
    if algo == "dpa":
        return compute_lpl(train).model
    if algo == "ga":
        rng = np.random.default_rng(np.random.SeedSequence([seed, STAGE_GA]))
        return evolve(train, ga, rng).model
    if algo == "greedy":
        return greedy_lpl(train)
    raise ValueError(f"unknown algorithm {algo!r}")


def _run_cell(config: ExperimentConfig, m: int, rep: int) -> list[RunRecord]:
    seed = rep_seed(config.seed, m, rep)
    data = generate_dataset(GenConfig(
        m=m, n=config.n, x=config.x, noise=config.noise,
        train_fraction=config.train_fraction, seed=seed,
    ))
    records = []
    for algo in config.algorithms:
        t0 = time.perf_counter()
        model = _train_one(algo, data.train, config.ga, seed)
        t1 = time.perf_counter()
        test_acc = evaluate(model, data.test)
        t2 = time.perf_counter()
        train_acc = count_satisfied(model, data.train) / len(data.train)
        records.append(RunRecord(
            algo=algo, m=m, rep=rep,
            train_acc=train_acc, test_acc=test_acc,
            train_s=(t1 - t0) if config.record_timing else 0.0,
            test_s=(t2 - t1) if config.record_timing else 0.0,
        ))
    return records


def run_experiment(config: ExperimentConfig) -> list[RunRecord]:
    """All (algorithm, m, repetition) records, sorted for stable output."""
    cells = [(m, rep) for m in config.m_values for rep in range(config.repetitions)]
    if config.threads == 1:
        batches = [_run_cell(config, m, rep) for m, rep in cells]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            batches = list(pool.map(
                lambda cell: _run_cell(config, *cell), cells
            ))
    records = [record for batch in batches for record in batch]
    records.sort(key=lambda r: (r.algo, r.m, r.rep))
    return records


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def emit_report(records: list[RunRecord], outdir) -> dict[str, Path]:
    """Write results.csv, summary.csv, and the two charts.

    Floats are written in shortest round-trip form so parsing the CSV
    back recovers the records exactly; an empty record list produces
    header-only CSVs and no charts.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {"results": outdir / "results.csv", "summary": outdir / "summary.csv"}

    with open(paths["results"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for r in records:
            writer.writerow([r.algo, r.m, r.rep, _fmt(r.train_acc),
                             _fmt(r.test_acc), _fmt(r.train_s), _fmt(r.test_s),
                             _fmt(r.total_s)])

    cells: dict[tuple[str, int], list[RunRecord]] = {}
    for r in records:
        cells.setdefault((r.algo, r.m), []).append(r)

    def _mean_sd(values: list[float]) -> tuple[float, float]:
        mean = statistics.fmean(values)
        sd = statistics.stdev(values) if len(values) > 1 else 0.0
        return mean, sd

    with open(paths["summary"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algo", "m", "reps",
                         "mean_train_acc", "sd_train_acc",
                         "mean_test_acc", "sd_test_acc",
                         "mean_total_s", "sd_total_s"])
        for (algo, m), group in sorted(cells.items()):
            out = [algo, m, len(group)]
            for pick in (lambda r: r.train_acc, lambda r: r.test_acc,
                         lambda r: r.total_s):
                mean, sd = _mean_sd([pick(r) for r in group])
                out += [_fmt(mean), _fmt(sd)]
            writer.writerow(out)

    if records:
        paths["accuracy_chart"] = _chart(
            cells, outdir / "accuracy.svg", lambda r: r.test_acc,
            "Test accuracy", logy=False,
        )
        paths["time_chart"] = _chart(
            cells, outdir / "time.svg", lambda r: r.total_s,
            "Train + test time (s)", logy=True,
        )
    return paths


def _chart(cells, path: Path, pick, ylabel: str, *, logy: bool) -> Path:
    plt.rcParams["svg.hashsalt"] = "lplearn"  # stable ids across runs
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    algos = sorted({algo for algo, _ in cells})
    positive = False
    for algo in algos:
        ms = sorted(m for a, m in cells if a == algo)
        means = []
        sds = []
        for m in ms:
            values = [pick(r) for r in cells[(algo, m)]]
            means.append(statistics.fmean(values))
            sds.append(statistics.stdev(values) if len(values) > 1 else 0.0)
        positive = positive or any(v > 0.0 for v in means)
        ax.errorbar(ms, means, yerr=sds, fmt=_CHART_STYLE.get(algo, "o-"),
                    capsize=3, label=algo)
    ax.set_xscale("log")
    if logy and positive:  # timings may be suppressed to all-zero
        ax.set_yscale("log")
    ax.set_xlabel("examples (m)")
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})  # no timestamp, stable bytes
    plt.close(fig)
    return path


def read_results(path) -> list[RunRecord]:
    """Parse a results.csv back into records (the round-trip counterpart)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != RESULT_COLUMNS:
            raise ValueError(f"{path}: unexpected header {header}")
        records = []
        for row in reader:
            algo, m, rep, train_acc, test_acc, train_s, test_s, total_s = row
            record = RunRecord(
                algo=algo, m=int(m), rep=int(rep),
                train_acc=float(train_acc), test_acc=float(test_acc),
                train_s=float(train_s), test_s=float(test_s),
            )
            if abs(record.total_s - float(total_s)) > 1e-12:
                raise ValueError(f"{path}: total_s column disagrees in {row}")
            records.append(record)
    return records
