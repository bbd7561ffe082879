import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sailgrid import DISTRIBUTIONS, EpisodeSpec, SearchState, Vertex, World, generate_world


def world_from_rows(rows, **kw):
    """Build a World from text rows, top row = highest y. '#' is an obstacle."""
    height = len(rows)
    width = len(rows[0])
    cells = np.zeros((height, width), dtype=bool)
    for i, row in enumerate(rows):
        y = height - 1 - i
        for x, ch in enumerate(row):
            cells[y, x] = ch == "#"
    return World(width, height, cells, **kw)


def mixed_world(index, width=20, height=20, seed_base=0):
    """Deterministic world cycling through every distribution."""
    name = DISTRIBUTIONS[index % len(DISTRIBUTIONS)]
    return generate_world(name, seed_base + index, width, height)


def corner_spec(world):
    return EpisodeSpec(world, Vertex(0, 0), Vertex(world.width - 1, world.height - 1))


def fresh_state(world, start=(0, 0), goal=None):
    goal = goal if goal is not None else (world.width - 1, world.height - 1)
    return SearchState(EpisodeSpec(world, Vertex(*start), Vertex(*goal)))


@pytest.fixture
def empty12():
    return world_from_rows(["." * 12] * 12)
