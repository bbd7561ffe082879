"""Vertex-selection policies.

Each policy keeps its own ordering(s) over the shared open set; scores are
computed when a vertex is inserted and frozen from then on. Ties break by
insertion order everywhere. Popped entries that have since left the open
set are skipped lazily, so one expansion removes a vertex from every
ordering at once.
"""
from __future__ import annotations

import heapq
import math

import numpy as np

from .features import featurize_batch, nearest_invalid_distance
from .model import forward
from .search import OPEN
from .validation import as_generator

__all__ = [
    "euclidean",
    "manhattan",
    "chebyshev",
    "SelectPolicy",
    "GreedyPolicy",
    "AStarPolicy",
    "RoundRobinPolicy",
    "NearestInvalidDistance",
    "LearnedPolicy",
    "RandomPolicy",
    "EpsilonGreedyPolicy",
    "make_greedy_policy",
    "make_astar_policy",
    "make_round_robin_policy",
    "make_learned_policy",
    "make_mha_policy",
]


def euclidean(v, goal) -> float:
    return math.hypot(goal[0] - v[0], goal[1] - v[1])


def manhattan(v, goal) -> float:
    return float(abs(goal[0] - v[0]) + abs(goal[1] - v[1]))


def chebyshev(v, goal) -> float:
    return float(max(abs(goal[0] - v[0]), abs(goal[1] - v[1])))


class _HeapQueue:
    """Min-heap of (score, insertion seq, vertex id) with lazy deletion."""

    __slots__ = ("_h",)

    def __init__(self):
        self._h: list[tuple[float, int, int]] = []

    def clear(self):
        self._h.clear()

    def push(self, score: float, seq: int, vid: int):
        heapq.heappush(self._h, (score, seq, vid))

    def pop_open(self, status) -> int:
        h = self._h
        while h:
            _, _, vid = heapq.heappop(h)
            if status[vid] == OPEN:
                return vid
        raise LookupError("no open vertex left in this ordering")


class SelectPolicy:
    """Per-episode selection strategy driven by :func:`run_search`.

    ``begin_episode`` resets internal state, ``on_insert_many`` is called
    with every batch of newly opened vertex ids, and ``select`` returns the
    id of the open vertex to expand next.
    """

    def begin_episode(self, spec, state):
        pass

    def on_insert(self, vid, state):
        pass

    def on_insert_many(self, vids, state):
        for vid in vids:
            self.on_insert(vid, state)

    def select(self, state) -> int:
        raise NotImplementedError


class GreedyPolicy(SelectPolicy):
    """Best-first on h(v, goal) alone."""

    def __init__(self, heuristic):
        self.heuristic = heuristic
        self._q = _HeapQueue()

    def begin_episode(self, spec, state):
        self._goal = spec.goal
        self._q.clear()

    def on_insert(self, vid, state):
        v = state.vertex(vid)
        self._q.push(float(self.heuristic(v, self._goal)), int(state.seq[vid]), vid)

    def select(self, state):
        return self._q.pop_open(state.status)


class AStarPolicy(SelectPolicy):
    """Best-first on g(v) + h(v, goal), g in unit edge counts.

    Unlike the frozen-score policies, this baseline keeps g exact: it
    enables open-list re-keying, so a strictly shorter path to an open
    vertex re-parents it and pushes the improved key (the stale heap entry
    dies lazily). With a consistent heuristic the solution path is minimal
    in edge count even though the episode ends the moment the goal enters
    the open list.
    """

    def __init__(self, heuristic):
        self.heuristic = heuristic
        self._q = _HeapQueue()

    def begin_episode(self, spec, state):
        self._goal = spec.goal
        self._q.clear()
        state.rekey_open = True

    def on_insert(self, vid, state):
        v = state.vertex(vid)
        f = float(state.depth[vid]) + float(self.heuristic(v, self._goal))
        self._q.push(f, int(state.seq[vid]), vid)

    def select(self, state):
        return self._q.pop_open(state.status)


class NearestInvalidDistance:
    """State-aware scorer: euclidean distance to the closest known invalid
    endpoint, recomputed at insertion; the map diagonal while none is known."""

    def begin_episode(self, spec, state):
        pass

    def score(self, vid, state) -> float:
        return nearest_invalid_distance(state, vid % state.width, vid // state.width)


class _HeuristicScorer:
    def __init__(self, heuristic):
        self.heuristic = heuristic

    def begin_episode(self, spec, state):
        self._goal = spec.goal

    def score(self, vid, state) -> float:
        return float(self.heuristic(state.vertex(vid), self._goal))


class RoundRobinPolicy(SelectPolicy):
    """Cycles through one frozen-score ordering per scorer.

    Selection at timestep t uses ordering ``t mod len(scorers)``; all
    orderings range over the same open set. Entries may be plain
    ``h(v, goal)`` callables or state-aware scorer objects with a
    ``score(vid, state)`` method (see :class:`NearestInvalidDistance`).
    """

    def __init__(self, scorers):
        if not scorers:
            raise ValueError("round robin needs at least one scorer")
        self.scorers = [
            s if hasattr(s, "score") else _HeuristicScorer(s) for s in scorers
        ]
        self._qs = [_HeapQueue() for _ in self.scorers]

    def begin_episode(self, spec, state):
        for s, q in zip(self.scorers, self._qs):
            s.begin_episode(spec, state)
            q.clear()

    def on_insert(self, vid, state):
        seq = int(state.seq[vid])
        for s, q in zip(self.scorers, self._qs):
            q.push(float(s.score(vid, state)), seq, vid)

    def select(self, state):
        q = self._qs[state.t % len(self._qs)]
        return q.pop_open(state.status)


class LearnedPolicy(SelectPolicy):
    """Greedy on a trained cost-to-go model with frozen scores.

    A vertex is featurized from the state at its insertion and its model
    score fixed as its priority for the rest of the episode. A non-finite
    model output scores as +inf and flags the episode.
    """

    def __init__(self, params, featurizer=None):
        self.params = params
        self.featurizer = featurizer if featurizer is not None else featurize_batch
        self._q = _HeapQueue()

    def begin_episode(self, spec, state):
        self._q.clear()
        self._scores = np.full(state.n_cells, np.inf)

    def on_insert_many(self, vids, state):
        if not len(vids):
            return
        F = self.featurizer(vids, state)
        out = np.atleast_1d(np.asarray(forward(self.params, F), dtype=np.float64))
        bad = ~np.isfinite(out)
        if bad.any():
            out = np.where(bad, np.inf, out)
            state.flags.add("nonfinite_score")
        seq = state.seq
        scores = self._scores
        for vid, s in zip(vids, out):
            scores[vid] = s
            self._q.push(float(s), int(seq[vid]), vid)

    def on_insert(self, vid, state):
        self.on_insert_many([vid], state)

    def select(self, state):
        return self._q.pop_open(state.status)

    def frozen_score(self, vid) -> float:
        return float(self._scores[vid])

    def min_open_score(self, state) -> float:
        ids = state.open_array()
        if ids.size == 0:
            return 0.0
        return float(self._scores[ids].min())


class RandomPolicy(SelectPolicy):
    """Uniform selection over the current open set (seeded)."""

    def __init__(self, rng=0):
        self.rng = as_generator(rng)

    def select(self, state):
        ids = state.open_ids
        return ids[int(self.rng.integers(len(ids)))]


class EpsilonGreedyPolicy(SelectPolicy):
    """With probability epsilon a uniformly random open vertex, otherwise the
    learned policy's pick. Insertions feed the learned ordering."""

    def __init__(self, learner: LearnedPolicy, epsilon: float, rng=0):
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        self.learner = learner
        self.epsilon = epsilon
        self.rng = as_generator(rng)

    def begin_episode(self, spec, state):
        self.learner.begin_episode(spec, state)

    def on_insert_many(self, vids, state):
        self.learner.on_insert_many(vids, state)

    def on_insert(self, vid, state):
        self.learner.on_insert_many([vid], state)

    def select(self, state):
        if self.rng.random() < self.epsilon:
            ids = state.open_ids
            return ids[int(self.rng.integers(len(ids)))]
        return self.learner.select(state)


def make_greedy_policy(heuristic) -> GreedyPolicy:
    return GreedyPolicy(heuristic)


def make_astar_policy(heuristic) -> AStarPolicy:
    return AStarPolicy(heuristic)


def make_round_robin_policy(heuristics) -> RoundRobinPolicy:
    return RoundRobinPolicy(heuristics)


def make_learned_policy(params, featurizer=None) -> LearnedPolicy:
    return LearnedPolicy(params, featurizer)


def make_mha_policy() -> RoundRobinPolicy:
    """Round robin over euclidean, manhattan and nearest-invalid distance."""
    return RoundRobinPolicy([euclidean, manhattan, NearestInvalidDistance()])
