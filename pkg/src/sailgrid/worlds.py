"""Occupancy worlds on 8-connected grids.

Coordinates are Cartesian: x is the column index, y the row index, the
origin is the bottom-left cell and y grows upward ("north"). Grids persist
as binary PGM (P5) images with 0 = obstacle and 255 = free; the top image
row holds y = height - 1 so files look the way the world is oriented.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

__all__ = [
    "Vertex",
    "Edge",
    "World",
    "EpisodeSpec",
    "NEIGHBOR_OFFSETS",
    "successors",
    "evaluate_edge",
    "write_pgm",
    "read_pgm",
]


class Vertex(NamedTuple):
    """Grid cell identified by column x and row y."""

    x: int
    y: int


class Edge(NamedTuple):
    """Directed move between two 8-connected neighbor cells."""

    src: Vertex
    dst: Vertex


# 8-connected neighborhood, clockwise from north: N, NE, E, SE, S, SW, W, NW.
NEIGHBOR_OFFSETS: tuple[tuple[int, int], ...] = (
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
)


@dataclass(frozen=True, eq=False)
class World:
    """Immutable binary occupancy grid.

    ``cells[y, x]`` is True where the cell is blocked. ``seed`` and
    ``distribution_name`` record how the grid was produced.
    """

    width: int
    height: int
    cells: np.ndarray
    seed: int = 0
    distribution_name: str = "custom"

    def __post_init__(self):
        if self.width < 2 or self.height < 2:
            raise ValueError("world must be at least 2x2")
        cells = np.array(self.cells, dtype=bool, order="C")  # own private copy
        if cells.shape != (self.height, self.width):
            raise ValueError(
                f"cells shape {cells.shape} does not match "
                f"(height, width) = {(self.height, self.width)}"
            )
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)

    def in_bounds(self, v) -> bool:
        x, y = v
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, v) -> bool:
        x, y = v
        return not self.cells[y, x]

    def index(self, v) -> int:
        """Flat cell id (row-major, y * width + x)."""
        x, y = v
        return y * self.width + x

    def vertex(self, vid: int) -> Vertex:
        return Vertex(vid % self.width, vid // self.width)

    @property
    def n_cells(self) -> int:
        return self.width * self.height

    @property
    def diagonal(self) -> float:
        """Length of the map diagonal, used as the normalization scale."""
        return float(np.hypot(self.width, self.height))


@dataclass(frozen=True, eq=False)
class EpisodeSpec:
    """One planning episode: a world plus free, distinct start and goal cells."""

    world: World
    start: Vertex
    goal: Vertex

    def __post_init__(self):
        start = Vertex(int(self.start[0]), int(self.start[1]))
        goal = Vertex(int(self.goal[0]), int(self.goal[1]))
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "goal", goal)
        for name, v in (("start", start), ("goal", goal)):
            if not self.world.in_bounds(v):
                raise ValueError(f"{name} {v} out of bounds")
            if not self.world.is_free(v):
                raise ValueError(f"{name} {v} is inside an obstacle")
        if start == goal:
            raise ValueError("start and goal must differ")


def successors(v, world_dims) -> list[tuple[Edge, Vertex]]:
    """In-bounds 8-connected neighbors of v, clockwise from north.

    Obstacles are not consulted here; pair each returned edge with
    ``evaluate_edge`` to test validity. ``world_dims`` is (width, height).
    """
    w, h = world_dims
    x, y = v
    if not (0 <= x < w and 0 <= y < h):
        raise ValueError(f"vertex {v!r} out of bounds for dims {(w, h)}")
    src = Vertex(int(x), int(y))
    out = []
    for dx, dy in NEIGHBOR_OFFSETS:
        nx, ny = x + dx, y + dy
        if 0 <= nx < w and 0 <= ny < h:
            dst = Vertex(nx, ny)
            out.append((Edge(src, dst), dst))
    return out


def _move_valid(cells: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> bool:
    # Destination must be free; a diagonal step is additionally blocked when
    # both shared orthogonal cells are obstacles (no corner cutting).
    if cells[y1, x1]:
        return False
    if x1 != x0 and y1 != y0 and cells[y0, x1] and cells[y1, x0]:
        return False
    return True


def evaluate_edge(edge: Edge, world: World) -> bool:
    """True iff the move is collision free.

    The destination cell must be free and, for diagonal moves, the two
    orthogonal cells the move squeezes between must not both be obstacles.
    Pure function of (edge, world).
    """
    (x0, y0), (x1, y1) = edge
    if not (world.in_bounds((x0, y0)) and world.in_bounds((x1, y1))):
        raise ValueError(f"edge {edge!r} has an endpoint out of bounds")
    if max(abs(x1 - x0), abs(y1 - y0)) != 1:
        raise ValueError(f"edge {edge!r} is not an 8-neighbor move")
    return _move_valid(world.cells, x0, y0, x1, y1)


def write_pgm(world: World, path) -> None:
    """Persist as binary PGM: 0 = obstacle, 255 = free, top row is max y."""
    img = np.where(world.cells[::-1], 0, 255).astype(np.uint8)
    header = f"P5\n{world.width} {world.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.tobytes())


def read_pgm(path, seed: int = 0, distribution_name: str = "custom") -> World:
    """Load a world written by :func:`write_pgm` (strict P5, maxval 255)."""
    data = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4 and pos < len(data):
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        end = pos
        while end < len(data) and not data[end : end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    if len(fields) < 4 or fields[0] != b"P5" or fields[3] != b"255":
        raise ValueError(f"{path}: not a P5/255 graymap")
    width, height = int(fields[1]), int(fields[2])
    raster = data[pos + 1 : pos + 1 + width * height]
    if len(raster) != width * height:
        raise ValueError(f"{path}: truncated raster")
    img = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    cells = (img == 0)[::-1]
    return World(width, height, cells, seed=seed, distribution_name=distribution_name)
