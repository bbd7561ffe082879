"""World datasets: generation, on-disk layout, and episode iteration.

A dataset directory holds one PGM file per world plus ``manifest.json``
describing the three splits. Manifest entries carry everything needed to
regenerate or reload each world::

    {"distribution": ..., "width": ..., "height": ..., "base_seed": ...,
     "generator_params": {...},
     "splits": {"train":     [{"file", "seed", "distribution", "start", "goal"}, ...],
                "test":       [...],
                "validation": [...]}}

World seeds are assigned sequentially from the base seed across the splits
(train, then test, then validation), so no two worlds in a dataset share a
seed, by construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .generators import generate_world
from .validation import as_generator
from .worlds import EpisodeSpec, Vertex, World, read_pgm, write_pgm

__all__ = ["SPLITS", "WorldDataset", "make_dataset", "load_manifest"]

SPLITS = ("train", "test", "validation")


@dataclass(frozen=True)
class _Entry:
    file: str | None
    seed: int
    distribution: str
    start: Vertex
    goal: Vertex
    width: int
    height: int


class WorldDataset:
    """An ordered collection of (world, episode) pairs.

    Episodes iterate in manifest order; ``sample`` draws uniformly with
    replacement. Worlds load lazily and are cached, so one dataset can be
    shared by trainers and evaluators.
    """

    def __init__(self, entries, root=None, worlds=None):
        self._entries = list(entries)
        self._root = Path(root) if root is not None else None
        self._worlds: dict[int, World] = dict(worlds or {})

    def __len__(self) -> int:
        return len(self._entries)

    def world(self, i: int) -> World:
        if i not in self._worlds:
            e = self._entries[i]
            if e.file is None:
                raise ValueError("in-memory dataset entry lost its world")
            self._worlds[i] = read_pgm(
                self._root / e.file if self._root else e.file,
                seed=e.seed,
                distribution_name=e.distribution,
            )
        return self._worlds[i]

    def episode(self, i: int) -> tuple[World, EpisodeSpec]:
        e = self._entries[i]
        world = self.world(i)
        return world, EpisodeSpec(world, e.start, e.goal)

    def episodes(self):
        for i in range(len(self._entries)):
            yield self.episode(i)

    def sample(self, rng) -> tuple[World, EpisodeSpec]:
        rng = as_generator(rng)
        return self.episode(int(rng.integers(len(self._entries))))

    def seeds(self) -> list[int]:
        return [e.seed for e in self._entries]

    @classmethod
    def generated(
        cls,
        distribution: str,
        count: int,
        width: int,
        height: int,
        base_seed: int,
        generator_params: dict | None = None,
    ) -> "WorldDataset":
        """Generate an in-memory dataset with sequential seeds; start and
        goal are the bottom-left and top-right corners."""
        entries = []
        worlds = {}
        for i in range(count):
            seed = base_seed + i
            world = generate_world(distribution, seed, width, height, generator_params)
            entries.append(
                _Entry(
                    file=None,
                    seed=seed,
                    distribution=distribution,
                    start=Vertex(0, 0),
                    goal=Vertex(width - 1, height - 1),
                    width=width,
                    height=height,
                )
            )
            worlds[i] = world
        return cls(entries, worlds=worlds)

    @classmethod
    def from_manifest(cls, path, split: str) -> "WorldDataset":
        """Load one split of a dataset directory (or manifest file path)."""
        path = Path(path)
        manifest_path = path / "manifest.json" if path.is_dir() else path
        manifest = json.loads(manifest_path.read_text())
        if split not in manifest["splits"]:
            raise ValueError(f"manifest has no split {split!r}")
        root = manifest_path.parent
        entries = [
            _Entry(
                file=rec["file"],
                seed=int(rec["seed"]),
                distribution=rec["distribution"],
                start=Vertex(*rec["start"]),
                goal=Vertex(*rec["goal"]),
                width=int(manifest["width"]),
                height=int(manifest["height"]),
            )
            for rec in manifest["splits"][split]
        ]
        return cls(entries, root=root)


def load_manifest(path) -> dict:
    path = Path(path)
    manifest_path = path / "manifest.json" if path.is_dir() else path
    return json.loads(manifest_path.read_text())


def _random_free_cell(world: World, rng) -> Vertex:
    free_ids = np.flatnonzero(~world.cells.ravel())
    vid = int(free_ids[int(rng.integers(free_ids.size))])
    return world.vertex(vid)


def _random_episode(world: World, rng) -> tuple[Vertex, Vertex]:
    """Random distinct free cells with a valid path between them."""
    from .oracle import backward_dijkstra

    for _ in range(32):
        goal = _random_free_cell(world, rng)
        reachable = np.isfinite(backward_dijkstra(world, goal).cost_to_go.ravel())
        reachable[world.index(goal)] = False
        ids = np.flatnonzero(reachable)
        if ids.size:
            start = world.vertex(int(ids[int(rng.integers(ids.size))]))
            return start, goal
    raise ValueError("could not sample a connected start/goal pair")


def make_dataset(
    out_dir,
    distribution: str,
    counts,
    width: int,
    height: int,
    base_seed: int,
    generator_params: dict | None = None,
    random_endpoints: bool = False,
) -> dict:
    """Generate and persist a dataset; returns the manifest.

    ``counts`` is (train, test, validation). World seeds run sequentially
    from ``base_seed`` across the splits, so the splits are seed-disjoint by
    construction. Episodes default to corner-to-corner; with
    ``random_endpoints`` each world gets seeded random distinct free cells.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    counts = tuple(int(c) for c in counts)
    if len(counts) != 3:
        raise ValueError("counts must be (train, test, validation)")
    manifest = {
        "distribution": distribution,
        "width": int(width),
        "height": int(height),
        "base_seed": int(base_seed),
        "generator_params": dict(generator_params or {}),
        "random_endpoints": bool(random_endpoints),
        "splits": {},
    }
    next_seed = int(base_seed)
    for split, count in zip(SPLITS, counts):
        (out / split).mkdir(exist_ok=True)
        records = []
        for i in range(count):
            seed = next_seed
            next_seed += 1
            world = generate_world(distribution, seed, width, height, generator_params)
            rel = f"{split}/world_{i:04d}.pgm"
            write_pgm(world, out / rel)
            if random_endpoints:
                rng = np.random.default_rng(np.random.SeedSequence([seed, 97]))
                start, goal = _random_episode(world, rng)
            else:
                start = Vertex(0, 0)
                goal = Vertex(width - 1, height - 1)
            records.append(
                {
                    "file": rel,
                    "seed": seed,
                    "distribution": distribution,
                    "start": [start.x, start.y],
                    "goal": [goal.x, goal.y],
                }
            )
        manifest["splits"][split] = records
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return manifest
