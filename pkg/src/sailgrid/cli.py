"""Command-line driver.

Verbs: ``gen-data`` (generate and persist a world dataset), ``train`` (fit
one of the learners on a dataset), ``evaluate`` (score one algorithm on a
split), ``bench`` (the cross-algorithm benchmark table), and ``render``
(wavefront snapshots of one episode). Every verb reads one JSON config file
plus optional ``--set key=value`` overrides and writes the resolved config
next to its outputs.

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import ConfigError as BenchConfigError
from .bench import make_policy, run_benchmark, write_report
from .config import ConfigError, apply_overrides, load_config, write_resolved
from .datasets import WorldDataset, make_dataset
from .generators import UnknownDistributionError
from .model import save_params
from .search import run_search
from .render import render_snapshot
from .trainers import (
    CemTrainer,
    QTrainer,
    SailTrainer,
    SupervisedTrainer,
    TrainConfig,
    evaluate_policy,
)

_CONFIG_ERRORS = (
    ConfigError,
    BenchConfigError,
    UnknownDistributionError,
    ValueError,
    KeyError,
    FileNotFoundError,
)


def _require(cfg: dict, *keys):
    missing = [k for k in keys if k not in cfg]
    if missing:
        raise ConfigError(f"config is missing required keys: {missing}")


def _out_dir(cfg: dict) -> Path:
    _require(cfg, "out_dir")
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gen_data(cfg: dict) -> int:
    _require(cfg, "distribution", "width", "height", "counts", "seed")
    out = _out_dir(cfg)
    make_dataset(
        out,
        distribution=cfg["distribution"],
        counts=cfg["counts"],
        width=cfg["width"],
        height=cfg["height"],
        base_seed=cfg["seed"],
        generator_params=cfg.get("generator_params"),
        random_endpoints=cfg.get("random_endpoints", False),
    )
    write_resolved(cfg, out)
    return 0


_TRAINERS = {
    "sail": (SailTrainer, "sail_kwargs"),
    "sl": (SupervisedTrainer, "sl_kwargs"),
    "ql": (QTrainer, "ql_kwargs"),
    "cem": (CemTrainer, "cem_kwargs"),
}


def _history_csv(history: list[dict]) -> str:
    columns: list[str] = []
    for row in history:
        for key in row:
            if key not in columns:
                columns.append(key)
    lines = [",".join(columns)]
    for row in history:
        lines.append(",".join(str(row.get(c, "")) for c in columns))
    return "\n".join(lines) + "\n"


def cmd_train(cfg: dict) -> int:
    _require(cfg, "dataset_dir", "algorithm")
    out = _out_dir(cfg)
    algorithm = cfg["algorithm"]
    if algorithm not in _TRAINERS:
        raise ConfigError(f"unknown algorithm {algorithm!r}; known: {sorted(_TRAINERS)}")
    reserved = {"out_dir", "dataset_dir", "save_dataset"}
    tc = TrainConfig.from_mapping(
        {k: v for k, v in cfg.items() if k not in reserved}
    )
    train_set = WorldDataset.from_manifest(cfg["dataset_dir"], "train")
    val_set = WorldDataset.from_manifest(cfg["dataset_dir"], "validation")
    cls, kwargs_fn = _TRAINERS[algorithm]
    trainer = cls(**getattr(tc, kwargs_fn)())
    trainer.fit(train_set, val_set)
    save_params(trainer.best_params_, out / "model.bin")
    (out / "history.csv").write_text(_history_csv(trainer.history_))
    if cfg.get("save_dataset") and hasattr(trainer, "dataset_") and hasattr(trainer.dataset_, "save"):
        trainer.dataset_.save(out / "dataset.bin")
    write_resolved(cfg, out)
    return 0


def cmd_evaluate(cfg: dict) -> int:
    _require(cfg, "dataset_dir", "algorithm", "horizon")
    out = _out_dir(cfg)
    split = cfg.get("split", "test")
    dataset = WorldDataset.from_manifest(cfg["dataset_dir"], split)
    models = {cfg["algorithm"]: cfg.get("model_file")}
    policy = make_policy(cfg["algorithm"], models=models, seed=cfg.get("seed", 0))
    report = evaluate_policy(policy, dataset, int(cfg["horizon"]))
    lines = ["episode,outcome,cost"]
    for i, (outcome, cost) in enumerate(zip(report.outcomes, report.costs)):
        lines.append(f"{i},{outcome},{int(cost)}")
    (out / "episodes.csv").write_text("\n".join(lines) + "\n")
    (out / "summary.txt").write_text(
        f"algorithm={cfg['algorithm']} split={split} horizon={cfg['horizon']}\n"
        f"episodes={report.n_episodes} mean_cost={report.mean_cost:.3f} "
        f"median_cost={report.median_cost:.3f} success_rate={report.success_rate:.3f}\n"
    )
    write_resolved(cfg, out)
    return 0


def cmd_bench(cfg: dict) -> int:
    _require(cfg, "datasets", "algorithms", "horizon")
    out = _out_dir(cfg)
    datasets = {}
    for entry in cfg["datasets"]:
        name = entry.get("name") or Path(entry["dir"]).name
        datasets[name] = WorldDataset.from_manifest(entry["dir"], entry.get("split", "test"))
    report = run_benchmark(
        cfg["algorithms"],
        datasets,
        int(cfg["horizon"]),
        models=cfg.get("models"),
        seed=cfg.get("seed", 0),
    )
    write_report(report, out)
    write_resolved(cfg, out)
    return 0


def cmd_render(cfg: dict) -> int:
    _require(cfg, "dataset_dir", "algorithm", "horizon")
    out = _out_dir(cfg)
    split = cfg.get("split", "test")
    dataset = WorldDataset.from_manifest(cfg["dataset_dir"], split)
    episode = int(cfg.get("episode", 0))
    _world, spec = dataset.episode(episode)
    models = {cfg["algorithm"]: cfg.get("model_file")}
    policy = make_policy(cfg["algorithm"], models=models, seed=cfg.get("seed", 0))
    result = run_search(spec, policy, int(cfg["horizon"]), trace=True)
    n = len(result.trace)
    frames = cfg.get("frames")
    if frames is None:
        stride = int(cfg.get("frame_stride", max(1, n // 8)))
        frames = list(range(0, n + 1, stride))
        if frames[-1] != n:
            frames.append(n)
    overlay = result.path if cfg.get("path_overlay") else None
    for frame in frames:
        render_snapshot(
            result.trace,
            int(frame),
            spec,
            out / f"frame_{int(frame):05d}.ppm",
            path=overlay,
        )
    (out / "summary.txt").write_text(
        f"algorithm={cfg['algorithm']} episode={episode} outcome={result.outcome} "
        f"expansions={result.expansions}\n"
    )
    write_resolved(cfg, out)
    return 0


_COMMANDS = {
    "gen-data": (cmd_gen_data, "generate and persist a world dataset"),
    "train": (cmd_train, "fit one of the learners on a dataset"),
    "evaluate": (cmd_evaluate, "score one algorithm on a dataset split"),
    "bench": (cmd_bench, "run the cross-algorithm benchmark table"),
    "render": (cmd_render, "render wavefront snapshots of one episode"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sailgrid",
        description="Train and benchmark learned vertex-selection heuristics "
        "on procedural occupancy grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_fn, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config entry (dotted keys reach nested objects)",
        )
        p.add_argument("--out", help="override the configured out_dir")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = apply_overrides(cfg, args.overrides)
        if args.out:
            cfg["out_dir"] = args.out
        handler, _ = _COMMANDS[args.command]
        return handler(cfg)
    except _CONFIG_ERRORS as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - runtime failures map to exit 2
        print(f"runtime failure: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
