"""Procedural world generators.

Every distribution is a small recipe driven by a seeded generator, so an
identical (name, seed, width, height, params) call always yields the
identical grid. After obstacle placement the two corner cells are forced
free and the bottom-left to top-right episode is checked for connectivity;
an unsolvable draw retries with a derived seed, a bounded number of times.

Recipes (all knobs live in DEFAULT_PARAMS and can be reshaped per call):

- ``empty``: no obstacles.
- ``single_gap_wall``: one full-height wall at a random interior column
  with a single gap of ``gap_cells`` rows at a random height.
- ``shifted_gaps``: several roughly evenly spaced full-height walls, each
  with one gap; gap rows are drawn from ``gap_band`` (a fraction band of
  the map height, default the lower-middle band), shifting the crossings
  away from the straight start-goal corridor.
- ``forest``: square blobs dart-thrown with a minimum center separation
  (blue-noise style) until a target obstacle density is reached.
- ``maze``: recursive division into rectilinear hallways; every wall
  carries a door, which keeps the free space connected.
- ``bugtrap``: a square ring of obstacles enclosing a point on the
  start-goal diagonal, with one opening that faces away from the goal.
- ``gaps_and_forest``: shifted_gaps walls plus a sparser forest; gaps are
  re-carved after blob placement so every wall stays passable.
"""
from __future__ import annotations

import numpy as np

from .oracle import backward_dijkstra
from .worlds import Vertex, World

__all__ = [
    "DISTRIBUTIONS",
    "DEFAULT_PARAMS",
    "UnknownDistributionError",
    "WorldGenerationError",
    "default_params",
    "generate_world",
]


class UnknownDistributionError(ValueError):
    """Requested distribution name is not registered."""


class WorldGenerationError(RuntimeError):
    """No solvable world could be drawn within the retry budget."""


DEFAULT_PARAMS: dict[str, dict] = {
    "empty": {},
    "single_gap_wall": {
        "gap_cells": None,          # default max(2, round(0.06 * height))
        "column_band": (0.3, 0.7),  # wall column as a fraction of width
    },
    "shifted_gaps": {
        "n_walls": None,            # default max(2, width // 25)
        "gap_cells": None,          # default max(2, round(0.04 * height))
        "gap_band": (0.15, 0.45),   # gap start row as a fraction of height
    },
    "forest": {
        "density": 0.15,            # target obstacle fraction
        "blob_size": None,          # default max(2, round(0.04 * min(dims)))
        "min_separation_factor": 1.5,
    },
    "maze": {
        "min_chamber": 5,
        "door_cells": 2,
    },
    "bugtrap": {
        "center_band": (0.38, 0.52),
        "half_size_band": (0.13, 0.2),
        "thickness": None,          # default max(2, min(dims) // 40)
        "opening_fraction": 0.9,    # opening width as a fraction of half size
    },
    "gaps_and_forest": {
        "n_walls": None,            # default max(2, width // 33)
        "gap_cells": None,
        "gap_band": (0.15, 0.45),
        "density": 0.08,
        "blob_size": None,
        "min_separation_factor": 1.5,
    },
}

DISTRIBUTIONS = tuple(sorted(DEFAULT_PARAMS))

_MAX_ATTEMPTS = 64


def default_params(distribution_name: str) -> dict:
    if distribution_name not in DEFAULT_PARAMS:
        raise UnknownDistributionError(
            f"unknown distribution {distribution_name!r}; known: {DISTRIBUTIONS}"
        )
    return dict(DEFAULT_PARAMS[distribution_name])


def _empty(rng, w, h, p):
    return np.zeros((h, w), dtype=bool)


def _gap_cells(p, h, key, frac):
    k = p[key]
    return int(k) if k is not None else max(2, round(frac * h))


def _single_gap_wall(rng, w, h, p):
    cells = np.zeros((h, w), dtype=bool)
    k = _gap_cells(p, h, "gap_cells", 0.06)
    lo, hi = p["column_band"]
    c_lo = max(1, round(lo * (w - 1)))
    c_hi = min(w - 2, round(hi * (w - 1)))
    col = int(rng.integers(c_lo, c_hi + 1))
    r0 = int(rng.integers(0, h - k + 1))
    cells[:, col] = True
    cells[r0 : r0 + k, col] = False
    return cells


def _place_walls(rng, cells, w, h, n_walls, k, band):
    """Full-height walls with one gap each; returns the carved gap slices."""
    lo, hi = band
    spacing = (w - 2) / (n_walls + 1)
    gaps = []
    prev = -2
    for i in range(n_walls):
        c = (i + 1) * spacing + rng.uniform(-0.25, 0.25) * spacing
        col = min(max(int(round(c)), 1), w - 2)
        if col <= prev + 1:
            col = prev + 2
        if col > w - 2:
            break
        prev = col
        r_lo = int(lo * (h - k))
        r_hi = max(r_lo, int(hi * (h - k)))
        r0 = int(rng.integers(r_lo, r_hi + 1))
        cells[:, col] = True
        cells[r0 : r0 + k, col] = False
        gaps.append((col, r0, k))
    return gaps


def _shifted_gaps(rng, w, h, p):
    cells = np.zeros((h, w), dtype=bool)
    n = p["n_walls"] if p["n_walls"] is not None else max(2, w // 25)
    k = _gap_cells(p, h, "gap_cells", 0.04)
    _place_walls(rng, cells, w, h, int(n), k, p["gap_band"])
    return cells


def _scatter_blobs(rng, cells, w, h, size, density, sep_factor):
    n_blobs = max(1, round(density * w * h / (size * size)))
    min_sep2 = (sep_factor * size) ** 2
    centers: list[tuple[int, int]] = []
    attempts = 0
    while len(centers) < n_blobs and attempts < 60 * n_blobs:
        attempts += 1
        cx = int(rng.integers(0, w))
        cy = int(rng.integers(0, h))
        if any((cx - ax) ** 2 + (cy - ay) ** 2 < min_sep2 for ax, ay in centers):
            continue
        centers.append((cx, cy))
        x0 = max(0, cx - size // 2)
        y0 = max(0, cy - size // 2)
        cells[y0 : min(h, y0 + size), x0 : min(w, x0 + size)] = True


def _forest(rng, w, h, p):
    cells = np.zeros((h, w), dtype=bool)
    size = p["blob_size"] if p["blob_size"] is not None else max(2, round(0.04 * min(w, h)))
    _scatter_blobs(rng, cells, w, h, int(size), p["density"], p["min_separation_factor"])
    return cells


def _maze(rng, w, h, p):
    cells = np.zeros((h, w), dtype=bool)
    door = int(p["door_cells"])
    mc = int(p["min_chamber"])
    stack = [(0, 0, w, h)]
    while stack:
        x0, y0, cw, ch = stack.pop()
        can_v = cw >= 2 * mc + 1
        can_h = ch >= 2 * mc + 1
        if not (can_v or can_h):
            continue
        if can_v and (not can_h or cw >= ch):
            wx = x0 + int(rng.integers(mc, cw - mc))
            cells[y0 : y0 + ch, wx] = True
            dlen = min(door, ch)
            dy = y0 + int(rng.integers(0, ch - dlen + 1))
            cells[dy : dy + dlen, wx] = False
            stack.append((x0, y0, wx - x0, ch))
            stack.append((wx + 1, y0, x0 + cw - wx - 1, ch))
        else:
            wy = y0 + int(rng.integers(mc, ch - mc))
            cells[wy, x0 : x0 + cw] = True
            dlen = min(door, cw)
            dx = x0 + int(rng.integers(0, cw - dlen + 1))
            cells[wy, dx : dx + dlen] = False
            stack.append((x0, y0, cw, wy - y0))
            stack.append((x0, wy + 1, cw, y0 + ch - wy - 1))
    return cells


def _bugtrap(rng, w, h, p):
    cells = np.zeros((h, w), dtype=bool)
    a = rng.uniform(*p["center_band"])
    cx = int(round(a * (w - 1)))
    cy = int(round(a * (h - 1)))
    half = int(round(rng.uniform(*p["half_size_band"]) * min(w, h)))
    half = min(max(2, half), cx - 1, cy - 1, w - 2 - cx, h - 2 - cy)
    t = p["thickness"] if p["thickness"] is not None else max(2, min(w, h) // 40)
    t = max(1, min(int(t), half - 1))
    dx = np.abs(np.arange(w) - cx)
    dy = np.abs(np.arange(h) - cy)
    cheb = np.maximum(dy[:, None], dx[None, :])
    cells |= (cheb >= half - t + 1) & (cheb <= half)
    o = max(2, int(round(p["opening_fraction"] * half)))
    if rng.random() < 0.5:  # opening on the south side, else on the west
        rows = slice(cy - half, cy - half + t)
        cols = slice(max(0, cx - o // 2), min(w, cx - o // 2 + o))
        cells[rows, cols] = False
    else:
        rows = slice(max(0, cy - o // 2), min(h, cy - o // 2 + o))
        cols = slice(cx - half, cx - half + t)
        cells[rows, cols] = False
    return cells


def _gaps_and_forest(rng, w, h, p):
    cells = np.zeros((h, w), dtype=bool)
    n = p["n_walls"] if p["n_walls"] is not None else max(2, w // 33)
    k = _gap_cells(p, h, "gap_cells", 0.04)
    gaps = _place_walls(rng, cells, w, h, int(n), k, p["gap_band"])
    size = p["blob_size"] if p["blob_size"] is not None else max(2, round(0.04 * min(w, h)))
    _scatter_blobs(rng, cells, w, h, int(size), p["density"], p["min_separation_factor"])
    for col, r0, gk in gaps:  # blobs must not seal a wall crossing
        cells[r0 : r0 + gk, col] = False
    return cells


_GENERATORS = {
    "empty": _empty,
    "single_gap_wall": _single_gap_wall,
    "shifted_gaps": _shifted_gaps,
    "forest": _forest,
    "maze": _maze,
    "bugtrap": _bugtrap,
    "gaps_and_forest": _gaps_and_forest,
}

_DIST_TAG = {name: i for i, name in enumerate(DISTRIBUTIONS)}


def _solvable(world: World) -> bool:
    goal = Vertex(world.width - 1, world.height - 1)
    table = backward_dijkstra(world, goal)
    return bool(np.isfinite(table.cost_to_go[0, 0]))


def generate_world(
    distribution_name: str, seed: int, width: int, height: int, params: dict | None = None
) -> World:
    """Draw a world from a named distribution, deterministically in all
    arguments. The corner cells (bottom-left start, top-right goal) are
    always free and connected by at least one valid 8-connected path.
    """
    if distribution_name not in _GENERATORS:
        raise UnknownDistributionError(
            f"unknown distribution {distribution_name!r}; known: {DISTRIBUTIONS}"
        )
    if width < 10 or height < 10:
        raise ValueError("generated worlds must be at least 10x10")
    p = default_params(distribution_name)
    for key in params or {}:
        if key not in p:
            raise ValueError(
                f"unknown parameter {key!r} for distribution {distribution_name!r}"
            )
    p.update(params or {})
    seed_u = int(seed) & 0xFFFFFFFFFFFFFFFF
    for attempt in range(_MAX_ATTEMPTS):
        ss = np.random.SeedSequence([_DIST_TAG[distribution_name], seed_u, attempt])
        rng = np.random.default_rng(ss)
        cells = _GENERATORS[distribution_name](rng, width, height, p)
        cells[0, 0] = False
        cells[height - 1, width - 1] = False
        world = World(
            width, height, cells, seed=int(seed), distribution_name=distribution_name
        )
        if _solvable(world):
            return world
    raise WorldGenerationError(
        f"{distribution_name}: no solvable draw in {_MAX_ATTEMPTS} attempts "
        f"(seed {seed}, dims {width}x{height})"
    )
