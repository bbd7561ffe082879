"""Feature vector for an open-list vertex: 17 values from the search tree
and the environment uncovered so far.

Layout (every entry is divided by the map diagonal ``hypot(width, height)``):

====  =========================================================
 0    vertex x
 1    vertex y
 2    path cost from start, in edges (equals tree depth)
 3    euclidean distance to goal
 4    manhattan distance to goal
 5    tree depth (duplicate of 2 under unit edge costs)
 6    goal x
 7    goal y
 8-10 nearest invalid-edge endpoint: x, y, euclidean distance
11-13 invalid endpoint closest in x: x, y, |dx|
14-16 invalid endpoint closest in y: x, y, |dy|
====  =========================================================

The candidate set for the last three triples is the destination vertices of
the invalid-edge list, in discovery order; ties pick the earliest recorded.
While the invalid list is empty each triple falls back to the vertex's own
coordinates with the map diagonal as the distance.
"""
from __future__ import annotations

import numpy as np

from .worlds import Vertex

__all__ = [
    "FEATURE_DIM",
    "FEATURE_NAMES",
    "featurize",
    "featurize_batch",
    "nearest_invalid_distance",
]

FEATURE_DIM = 17

FEATURE_NAMES = (
    "x",
    "y",
    "path_cost",
    "euclidean_to_goal",
    "manhattan_to_goal",
    "tree_depth",
    "goal_x",
    "goal_y",
    "nearest_invalid_x",
    "nearest_invalid_y",
    "nearest_invalid_dist",
    "nearest_invalid_by_dx_x",
    "nearest_invalid_by_dx_y",
    "nearest_invalid_dx",
    "nearest_invalid_by_dy_x",
    "nearest_invalid_by_dy_y",
    "nearest_invalid_dy",
)


def featurize_batch(vids, state, spec=None) -> np.ndarray:
    """Feature matrix (n, 17) for vertex ids that hold a search-tree record.

    Pure function of (vids, state, spec); the state is read, never mutated.
    """
    spec = spec if spec is not None else state.spec
    world = spec.world
    w = world.width
    ids = np.asarray(vids, dtype=np.int64)
    if ids.ndim != 1:
        raise ValueError("featurize_batch expects a 1-d sequence of vertex ids")
    x = (ids % w).astype(np.float64)
    y = (ids // w).astype(np.float64)
    depth = state.depth[ids].astype(np.float64)
    if (depth < 0).any():
        raise ValueError("featurize: vertex has no search-tree record yet")
    gx = float(spec.goal.x)
    gy = float(spec.goal.y)
    dxg = gx - x
    dyg = gy - y
    n = ids.size
    F = np.empty((n, FEATURE_DIM), dtype=np.float64)
    F[:, 0] = x
    F[:, 1] = y
    F[:, 2] = depth
    F[:, 3] = np.hypot(dxg, dyg)
    F[:, 4] = np.abs(dxg) + np.abs(dyg)
    F[:, 5] = depth
    F[:, 6] = gx
    F[:, 7] = gy
    diag = world.diagonal
    ex, ey = state.invalid_endpoint_coords()
    if ex.size == 0:
        for base in (8, 11, 14):
            F[:, base] = x
            F[:, base + 1] = y
            F[:, base + 2] = diag
    else:
        ddx = np.abs(ex[None, :] - x[:, None])
        ddy = np.abs(ey[None, :] - y[:, None])
        d2 = ddx * ddx + ddy * ddy
        rows = np.arange(n)
        j = np.argmin(d2, axis=1)
        F[:, 8] = ex[j]
        F[:, 9] = ey[j]
        F[:, 10] = np.sqrt(d2[rows, j])
        jx = np.argmin(ddx, axis=1)
        F[:, 11] = ex[jx]
        F[:, 12] = ey[jx]
        F[:, 13] = ddx[rows, jx]
        jy = np.argmin(ddy, axis=1)
        F[:, 14] = ex[jy]
        F[:, 15] = ey[jy]
        F[:, 16] = ddy[rows, jy]
    F /= diag
    return F


def featurize(v, state, spec=None) -> np.ndarray:
    """Feature vector (17,) for a single vertex."""
    spec = spec if spec is not None else state.spec
    vid = spec.world.index(Vertex(int(v[0]), int(v[1])))
    return featurize_batch([vid], state, spec)[0]


def nearest_invalid_distance(state, x, y) -> float:
    """Euclidean distance from (x, y) to the closest recorded invalid
    endpoint; the map diagonal while the invalid list is empty."""
    ex, ey = state.invalid_endpoint_coords()
    if ex.size == 0:
        return state.world.diagonal
    dx = ex - x
    dy = ey - y
    return float(np.sqrt(np.min(dx * dx + dy * dy)))
