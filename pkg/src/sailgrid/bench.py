"""Cross-algorithm benchmark driver.

Evaluates named algorithms over dataset test splits at a fixed evaluation
horizon, normalizes episode cost to [0, 1] (expansions / horizon, failures
pinned at 1.0), and emits machine-readable tables plus a human summary.
The canonical ``report.csv`` and ``episodes.csv`` contain only
deterministic fields, so identical configs and seeds reproduce them byte
for byte; wall-clock timings go to the summary only.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import MlpParams, load_params
from .oracle import OraclePolicy
from .policies import (
    AStarPolicy,
    GreedyPolicy,
    LearnedPolicy,
    RandomPolicy,
    euclidean,
    make_mha_policy,
    manhattan,
)
from .search import run_search

__all__ = [
    "ALGORITHMS",
    "BASELINE_ALGORITHMS",
    "LEARNED_ALGORITHMS",
    "ConfigError",
    "BenchRow",
    "BenchReport",
    "normalized_cost",
    "make_policy",
    "run_benchmark",
    "write_report",
    "full_scale_defaults",
]


class ConfigError(ValueError):
    """Invalid or incomplete benchmark configuration."""


BASELINE_ALGORITHMS = ("heuc-greedy", "hman-greedy", "astar-heuc", "mha-rr", "oracle", "random")
LEARNED_ALGORITHMS = ("sail", "sl", "ql", "cem")
ALGORITHMS = BASELINE_ALGORITHMS + LEARNED_ALGORITHMS


def normalized_cost(expansions: int, solved: bool, horizon: int) -> float:
    """Episode cost scaled to [0, 1] by the evaluation horizon; any failure
    (horizon or frontier exhausted) costs the full 1.0."""
    return expansions / horizon if solved else 1.0


def make_policy(name: str, models: dict | None = None, seed: int = 0):
    """Policy instance for an algorithm name.

    Learned algorithms need ``models[name]``: either loaded MlpParams or a
    parameter file path; a missing model is a configuration error.
    """
    if name == "heuc-greedy":
        return GreedyPolicy(euclidean)
    if name == "hman-greedy":
        return GreedyPolicy(manhattan)
    if name == "astar-heuc":
        return AStarPolicy(euclidean)
    if name == "mha-rr":
        return make_mha_policy()
    if name == "oracle":
        return OraclePolicy()
    if name == "random":
        return RandomPolicy(seed)
    if name in LEARNED_ALGORITHMS:
        if not models or name not in models or models[name] is None:
            raise ConfigError(f"algorithm {name!r} needs a trained model")
        params = models[name]
        if not isinstance(params, MlpParams):
            params = load_params(params)
        return LearnedPolicy(params)
    raise ConfigError(f"unknown algorithm {name!r}; known: {ALGORITHMS}")


@dataclass
class BenchRow:
    """Aggregate metrics for one (algorithm, dataset) pair."""

    algorithm: str
    dataset: str
    episodes: int
    mean_norm_cost: float
    median_norm_cost: float
    success_rate: float
    mean_expansions: float
    wall_clock_s: float


@dataclass
class BenchReport:
    """Benchmark results plus the configuration that produced them."""

    rows: list[BenchRow]
    per_episode: list[dict]
    config: dict
    horizon: int
    seed: int


def run_benchmark(algorithms, datasets: dict, horizon: int, models: dict | None = None, seed: int = 0) -> BenchReport:
    """Evaluate each algorithm on each dataset's episodes.

    ``datasets`` maps a display name to a WorldDataset (normally a test
    split). Policies are constructed up front so configuration errors
    surface before any work runs.
    """
    if horizon < 1:
        raise ConfigError("horizon must be >= 1")
    policies = {name: make_policy(name, models, seed) for name in algorithms}
    rows: list[BenchRow] = []
    per_episode: list[dict] = []
    for ds_name, dataset in datasets.items():
        for alg in algorithms:
            policy = policies[alg]
            norm = []
            exp = []
            solved_n = 0
            t0 = time.perf_counter()
            for idx, (_world, spec) in enumerate(dataset.episodes()):
                res = run_search(spec, policy, horizon)
                nc = normalized_cost(res.expansions, res.solved, horizon)
                norm.append(nc)
                exp.append(res.expansions)
                solved_n += res.solved
                per_episode.append(
                    {
                        "algorithm": alg,
                        "dataset": ds_name,
                        "episode": idx,
                        "world_seed": spec.world.seed,
                        "outcome": res.outcome,
                        "expansions": res.expansions,
                        "normalized_cost": nc,
                    }
                )
            elapsed = time.perf_counter() - t0
            rows.append(
                BenchRow(
                    algorithm=alg,
                    dataset=ds_name,
                    episodes=len(norm),
                    mean_norm_cost=float(np.mean(norm)),
                    median_norm_cost=float(np.median(norm)),
                    success_rate=solved_n / len(norm),
                    mean_expansions=float(np.mean(exp)),
                    wall_clock_s=elapsed,
                )
            )
    config = {
        "algorithms": list(algorithms),
        "datasets": list(datasets),
        "horizon": int(horizon),
        "seed": int(seed),
    }
    return BenchReport(rows=rows, per_episode=per_episode, config=config, horizon=horizon, seed=seed)


_REPORT_COLUMNS = (
    "algorithm",
    "dataset",
    "episodes",
    "mean_norm_cost",
    "median_norm_cost",
    "success_rate",
    "mean_expansions",
)

_EPISODE_COLUMNS = (
    "algorithm",
    "dataset",
    "episode",
    "world_seed",
    "outcome",
    "expansions",
    "normalized_cost",
)


def _fmt(value) -> str:
    return f"{value:.6f}" if isinstance(value, float) else str(value)


def write_report(report: BenchReport, out_dir) -> None:
    """report.csv and episodes.csv (deterministic) plus summary.txt (with
    wall-clock timings)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [",".join(_REPORT_COLUMNS)]
    for row in report.rows:
        lines.append(",".join(_fmt(getattr(row, c)) for c in _REPORT_COLUMNS))
    (out / "report.csv").write_text("\n".join(lines) + "\n")
    lines = [",".join(_EPISODE_COLUMNS)]
    for rec in report.per_episode:
        lines.append(",".join(_fmt(rec[c]) for c in _EPISODE_COLUMNS))
    (out / "episodes.csv").write_text("\n".join(lines) + "\n")
    summary = [
        f"benchmark horizon={report.horizon} seed={report.seed}",
        f"{'algorithm':<14}{'dataset':<20}{'mean':>10}{'median':>10}"
        f"{'success':>10}{'mean_exp':>12}{'wall_s':>10}",
    ]
    for r in report.rows:
        summary.append(
            f"{r.algorithm:<14}{r.dataset:<20}{r.mean_norm_cost:>10.4f}"
            f"{r.median_norm_cost:>10.4f}{r.success_rate:>10.2f}"
            f"{r.mean_expansions:>12.1f}{r.wall_clock_s:>10.2f}"
        )
    (out / "summary.txt").write_text("\n".join(summary) + "\n")


def full_scale_defaults() -> dict:
    """Reference full-scale experiment settings: 200x200 maps, train/test/
    validation splits of 200/100/70 worlds, training horizon 1100 and
    evaluation horizon 20000, 15 iterations with 50 probes per episode and
    an initial mixing probability of 0.7; the behavior-cloning baseline
    collects 600 episodes."""
    return {
        "width": 200,
        "height": 200,
        "counts": (200, 100, 70),
        "horizon_train": 1100,
        "horizon_test": 20000,
        "n_iterations": 15,
        "samples_per_episode": 50,
        "beta0": 0.7,
        "sl_episodes": 600,
    }
