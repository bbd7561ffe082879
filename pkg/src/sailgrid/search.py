"""Best-first search over the implicit grid graph with pluggable selection.

The loop is: a policy picks an open vertex, the vertex is expanded (its
outgoing edges evaluated), the open/closed/invalid lists are updated, and
the episode ends as soon as the goal enters the open list, the expansion
horizon is hit, or the frontier empties.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .worlds import NEIGHBOR_OFFSETS, Edge, EpisodeSpec, Vertex, World

__all__ = [
    "UNSEEN",
    "OPEN",
    "CLOSED",
    "SOLVED",
    "HORIZON_EXHAUSTED",
    "FRONTIER_EXHAUSTED",
    "PolicyContractError",
    "SearchState",
    "SearchResult",
    "Trace",
    "Observer",
    "expand",
    "run_search",
]

UNSEEN, OPEN, CLOSED = 0, 1, 2

SOLVED = "solved"
HORIZON_EXHAUSTED = "horizon_exhausted"
FRONTIER_EXHAUSTED = "frontier_exhausted"


class PolicyContractError(RuntimeError):
    """A policy selected a vertex that is not in the open list."""


class SearchState:
    """Mutable per-episode bookkeeping.

    Tracks the open/closed sets (``status``), the invalid-edge list, and the
    per-vertex search-tree records (parent, depth, insertion order). Vertices
    are handled as flat cell ids (``y * width + x``). Frozen score caches for
    the open set live inside the selection policies, so several orderings can
    share this one open set.
    """

    __slots__ = (
        "spec",
        "world",
        "width",
        "height",
        "n_cells",
        "status",
        "parent",
        "depth",
        "seq",
        "open_ids",
        "_open_pos",
        "invalid_edges",
        "_inv_x",
        "_inv_y",
        "n_invalid",
        "expansions",
        "flags",
        "closed_order",
        "_next_seq",
        "_goal_id",
        "_cells",
        "rekey_open",
    )

    def __init__(self, spec: EpisodeSpec):
        world = spec.world
        n = world.n_cells
        self.spec = spec
        self.world = world
        self.width = world.width
        self.height = world.height
        self.n_cells = n
        self._cells = world.cells
        self.status = np.zeros(n, dtype=np.uint8)
        self.parent = np.full(n, -1, dtype=np.int64)
        self.depth = np.full(n, -1, dtype=np.int64)
        self.seq = np.full(n, -1, dtype=np.int64)
        self.open_ids: list[int] = []
        self._open_pos: dict[int, int] = {}
        self.invalid_edges: list[Edge] = []
        self._inv_x = np.empty(256, dtype=np.float64)
        self._inv_y = np.empty(256, dtype=np.float64)
        self.n_invalid = 0
        self.expansions = 0
        self.flags: set[str] = set()
        self.closed_order: list[int] = []
        self._next_seq = 0
        self._goal_id = world.index(spec.goal)
        # Off by default: frozen-score policies never re-key. The exact-g
        # search baseline switches this on in begin_episode.
        self.rekey_open = False
        self._insert_open(world.index(spec.start), -1, 0)

    # -- timestep: number of completed expansions -------------------------
    @property
    def t(self) -> int:
        return self.expansions

    @property
    def goal_in_open(self) -> bool:
        return self.status[self._goal_id] == OPEN

    def vertex(self, vid: int) -> Vertex:
        return Vertex(vid % self.width, vid // self.width)

    def open_array(self) -> np.ndarray:
        return np.fromiter(self.open_ids, dtype=np.int64, count=len(self.open_ids))

    def open_vertices(self) -> list[Vertex]:
        return [self.vertex(i) for i in self.open_ids]

    def closed_vertices(self) -> list[Vertex]:
        return [self.vertex(i) for i in self.closed_order]

    def invalid_endpoint_coords(self) -> tuple[np.ndarray, np.ndarray]:
        """x and y coordinates of invalid-edge destinations, in record order."""
        m = self.n_invalid
        return self._inv_x[:m], self._inv_y[:m]

    # -- mutation helpers (driven by expand) -------------------------------
    def _insert_open(self, vid: int, parent: int, depth: int) -> None:
        self.status[vid] = OPEN
        self.parent[vid] = parent
        self.depth[vid] = depth
        self.seq[vid] = self._next_seq
        self._next_seq += 1
        self._open_pos[vid] = len(self.open_ids)
        self.open_ids.append(vid)

    def _remove_open(self, vid: int) -> None:
        pos = self._open_pos.pop(vid)
        last = self.open_ids.pop()
        if last != vid:
            self.open_ids[pos] = last
            self._open_pos[last] = pos

    def _add_invalid(self, src_id: int, dst_id: int) -> Edge:
        e = Edge(self.vertex(src_id), self.vertex(dst_id))
        self.invalid_edges.append(e)
        n = self.n_invalid
        if n == self._inv_x.shape[0]:
            self._inv_x = np.concatenate([self._inv_x, np.empty_like(self._inv_x)])
            self._inv_y = np.concatenate([self._inv_y, np.empty_like(self._inv_y)])
        self._inv_x[n] = dst_id % self.width
        self._inv_y[n] = dst_id // self.width
        self.n_invalid = n + 1
        return e

    def expand_id(self, vid: int) -> tuple[list[int], list[Edge]]:
        """Expand one open vertex; returns (newly opened ids, invalid edges).

        Every in-bounds outgoing edge is evaluated exactly once; valid edges
        to unseen cells open them with this vertex as parent, invalid edges
        are appended to the invalid list. Cells already open or closed are
        never re-inserted or re-keyed, except that with ``rekey_open`` set an
        open cell reached by a strictly shorter path is re-parented and
        re-announced (so an exact-g policy can push its improved key).
        """
        if self.status[vid] != OPEN:
            raise ValueError(f"expand: vertex id {vid} is not in the open list")
        w = self.width
        h = self.height
        cells = self._cells
        x = vid % w
        y = vid // w
        self.status[vid] = CLOSED
        self._remove_open(vid)
        self.closed_order.append(vid)
        self.expansions += 1
        children: list[int] = []
        invalid: list[Edge] = []
        child_depth = int(self.depth[vid]) + 1
        for dx, dy in NEIGHBOR_OFFSETS:
            nx = x + dx
            ny = y + dy
            if nx < 0 or nx >= w or ny < 0 or ny >= h:
                continue
            nid = ny * w + nx
            ok = not cells[ny, nx]
            if ok and dx != 0 and dy != 0 and cells[y, nx] and cells[ny, x]:
                ok = False
            if not ok:
                invalid.append(self._add_invalid(vid, nid))
            elif self.status[nid] == UNSEEN:
                self._insert_open(nid, vid, child_depth)
                children.append(nid)
            elif (
                self.rekey_open
                and self.status[nid] == OPEN
                and child_depth < self.depth[nid]
            ):
                self.parent[nid] = vid
                self.depth[nid] = child_depth
                children.append(nid)
        return children, invalid


def expand(v: Vertex, world: World, state: SearchState) -> tuple[list[Vertex], list[Edge]]:
    """Vertex-level wrapper around :meth:`SearchState.expand_id`."""
    if world is not state.world:
        raise ValueError("expand: world does not belong to this search state")
    children, invalid = state.expand_id(world.index(v))
    return [state.vertex(i) for i in children], invalid


class Trace:
    """Per-step expansion record, enough to reconstruct cell statuses."""

    def __init__(self, spec: EpisodeSpec):
        self.width = spec.world.width
        self.height = spec.world.height
        self.start_id = spec.world.index(spec.start)
        # (expanded id, newly opened ids, newly recorded invalid endpoint ids)
        self.steps: list[tuple[int, tuple[int, ...], tuple[int, ...]]] = []

    def record(self, vid: int, children, invalid_edges) -> None:
        w = self.width
        inv = tuple(e.dst.y * w + e.dst.x for e in invalid_edges)
        self.steps.append((vid, tuple(children), inv))

    def __len__(self) -> int:
        return len(self.steps)

    def status_at(self, frame: int) -> np.ndarray:
        """Cell statuses after ``frame`` expansions.

        Codes: 0 unexpanded, 1 open, 2 closed, 3 invalid. Every cell gets
        exactly one code; a closed cell stays closed, and a cell both opened
        and listed as an invalid endpoint counts as open.
        """
        if not 0 <= frame <= len(self.steps):
            raise IndexError(f"frame {frame} out of range 0..{len(self.steps)}")
        g = np.zeros(self.width * self.height, dtype=np.uint8)
        g[self.start_id] = 1
        for vid, children, inv in self.steps[:frame]:
            g[vid] = 2
            for i in inv:
                if g[i] == 0:
                    g[i] = 3
            for c in children:
                if g[c] in (0, 3):
                    g[c] = 1
        return g.reshape(self.height, self.width)


class Observer:
    """Optional per-step hooks for :func:`run_search` (no-ops by default)."""

    def select_override(self, state: SearchState):
        """Return a vertex id to expand instead of the policy's pick, or None."""
        return None

    def on_selected(self, state: SearchState, vid: int) -> None:
        """Called after selection, before the expansion mutates the state."""

    def after_expand(self, state: SearchState, vid: int) -> None:
        """Called after the expansion of ``vid`` has updated the lists."""


@dataclass
class SearchResult:
    """Outcome of one episode.

    ``path`` is present iff solved: the start-to-goal vertex sequence
    reconstructed through parent links.
    """

    outcome: str
    expansions: int
    path: list[Vertex] | None
    final_state: SearchState
    trace: Trace | None = None
    flags: frozenset = frozenset()

    @property
    def solved(self) -> bool:
        return self.outcome == SOLVED


def _reconstruct(state: SearchState, goal_id: int) -> list[Vertex]:
    ids = [goal_id]
    cur = goal_id
    while True:
        cur = int(state.parent[cur])
        if cur < 0:
            break
        ids.append(cur)
    ids.reverse()
    return [state.vertex(i) for i in ids]


def run_search(
    spec: EpisodeSpec,
    policy,
    horizon: int,
    trace: bool = False,
    observer: Observer | None = None,
) -> SearchResult:
    """Run one best-first episode under ``policy``.

    The episode is solved the moment the goal is added to the open list (the
    goal itself is never expanded). Exactly ``horizon`` expansions are made
    before giving up; an empty frontier ends the episode early. With
    ``trace`` set, per-step list membership is recorded for rendering.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    state = SearchState(spec)
    policy.begin_episode(spec, state)
    policy.on_insert_many([spec.world.index(spec.start)], state)
    tr = Trace(spec) if trace else None
    goal_id = state._goal_id
    while True:
        if state.status[goal_id] == OPEN:
            outcome = SOLVED
            break
        if state.expansions >= horizon:
            outcome = HORIZON_EXHAUSTED
            break
        if not state.open_ids:
            outcome = FRONTIER_EXHAUSTED
            break
        vid = observer.select_override(state) if observer is not None else None
        if vid is None:
            vid = policy.select(state)
        vid = int(vid)
        if state.status[vid] != OPEN:
            raise PolicyContractError(
                f"policy selected vertex id {vid} which is not open"
            )
        if observer is not None:
            observer.on_selected(state, vid)
        children, _invalid = state.expand_id(vid)
        policy.on_insert_many(children, state)
        if observer is not None:
            observer.after_expand(state, vid)
        if tr is not None:
            tr.record(vid, children, _invalid)
    path = _reconstruct(state, goal_id) if outcome == SOLVED else None
    return SearchResult(
        outcome=outcome,
        expansions=state.expansions,
        path=path,
        final_state=state,
        trace=tr,
        flags=frozenset(state.flags),
    )
