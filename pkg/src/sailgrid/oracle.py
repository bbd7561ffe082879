"""Full-knowledge cost-to-go tables and the oracle selection policy.

With unit edge costs the optimal cost-to-go from every cell to the goal is
a reverse breadth-first distance over the known grid, computed once per
(world, goal) and then looked up in constant time.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .policies import SelectPolicy, _HeapQueue
from .worlds import Vertex, World

__all__ = ["OracleTable", "backward_dijkstra", "lookup_label", "OraclePolicy", "make_oracle_policy"]


@dataclass(frozen=True, eq=False)
class OracleTable:
    """Per-cell optimal cost-to-go in edge counts; +inf where unreachable or
    blocked. Immutable and shareable once built."""

    cost_to_go: np.ndarray
    goal: Vertex
    world: World

    @property
    def flat(self) -> np.ndarray:
        return self.cost_to_go.ravel()


def _shift(a: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """out[y, x] = a[y - dy, x - dx], zero padded."""
    h, w = a.shape
    out = np.zeros_like(a)
    ys_dst = slice(max(0, dy), h + min(0, dy))
    xs_dst = slice(max(0, dx), w + min(0, dx))
    ys_src = slice(max(0, -dy), h + min(0, -dy))
    xs_src = slice(max(0, -dx), w + min(0, -dx))
    out[ys_dst, xs_dst] = a[ys_src, xs_src]
    return out


def backward_dijkstra(world: World, goal) -> OracleTable:
    """Distance-to-goal for every free cell, by layered reverse sweeps.

    Unit edge costs reduce the computation to breadth-first wavefronts;
    diagonal steps honor the corner-cutting rule, so the table matches the
    forward edge semantics exactly.
    """
    goal = Vertex(int(goal[0]), int(goal[1]))
    if not world.in_bounds(goal):
        raise ValueError(f"goal {goal} out of bounds")
    if not world.is_free(goal):
        raise ValueError(f"goal {goal} is inside an obstacle")
    obst = world.cells
    free = ~obst
    # Per-direction masks of moves blocked by the corner rule, at the
    # destination cell of the move (u -> v, offsets in v - u form).
    diag_block = {}
    for dx, dy in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        diag_block[(dx, dy)] = _shift(obst, 0, dy) & _shift(obst, dx, 0)
    dist = np.full(obst.shape, np.inf)
    frontier = np.zeros_like(free)
    frontier[goal.y, goal.x] = True
    visited = frontier.copy()
    dist[goal.y, goal.x] = 0.0
    d = 0
    offsets = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
    while True:
        nxt = np.zeros_like(free)
        for dx, dy in offsets:
            cand = _shift(frontier, dx, dy)
            cand &= free
            cand &= ~visited
            if dx != 0 and dy != 0:
                cand &= ~diag_block[(dx, dy)]
            nxt |= cand
        if not nxt.any():
            break
        d += 1
        dist[nxt] = d
        visited |= nxt
        frontier = nxt
    dist.flags.writeable = False
    return OracleTable(cost_to_go=dist, goal=goal, world=world)


def lookup_label(table: OracleTable, v) -> float:
    """Constant-time cost-to-go lookup for an in-bounds vertex."""
    x, y = v
    if not table.world.in_bounds((x, y)):
        raise ValueError(f"vertex {v!r} out of bounds")
    return float(table.cost_to_go[y, x])


class OraclePolicy(SelectPolicy):
    """Selects the open vertex with the smallest true cost-to-go.

    If constructed without a table (or when reused on a new episode), the
    table is computed once at episode start. Unreachable vertices score
    +inf: eligible, but behind every finite score, ties in insertion order.
    """

    def __init__(self, table: OracleTable | None = None):
        self.table = table
        self._q = _HeapQueue()

    def begin_episode(self, spec, state):
        t = self.table
        if t is None or t.world is not spec.world or t.goal != spec.goal:
            self.table = backward_dijkstra(spec.world, spec.goal)
        self._scores = self.table.flat
        self._q.clear()

    def on_insert(self, vid, state):
        self._q.push(float(self._scores[vid]), int(state.seq[vid]), vid)

    def select(self, state):
        return self._q.pop_open(state.status)


def make_oracle_policy(table: OracleTable) -> OraclePolicy:
    return OraclePolicy(table)
