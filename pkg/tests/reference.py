"""Independent brute-force references used as test oracles.

Everything here is written against raw grids with explicit loops and no
imports from the package, so the package's own search, distance and model
code can be checked against a second route.
"""
from collections import deque

OFFSETS = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))

INF = float("inf")


def move_allowed(cells, x0, y0, x1, y1):
    """Destination free; diagonal moves must not squeeze between two
    obstacles (re-derived from the corner rule statement)."""
    h = len(cells)
    w = len(cells[0])
    if not (0 <= x1 < w and 0 <= y1 < h):
        return False
    if cells[y1][x1]:
        return False
    if x1 != x0 and y1 != y0 and cells[y0][x1] and cells[y1][x0]:
        return False
    return True


def bfs_cost_to_go(cells, goal):
    """Distance (edge count) from every cell to the goal; INF when blocked
    or unreachable. cells is a nested sequence, cells[y][x] truthy = blocked."""
    h = len(cells)
    w = len(cells[0])
    gx, gy = goal
    if cells[gy][gx]:
        raise ValueError("goal is blocked")
    dist = [[INF] * w for _ in range(h)]
    dist[gy][gx] = 0.0
    q = deque([(gx, gy)])
    while q:
        x, y = q.popleft()
        for dx, dy in OFFSETS:
            nx, ny = x + dx, y + dy
            if not (0 <= nx < w and 0 <= ny < h):
                continue
            if dist[ny][nx] != INF:
                continue
            if not move_allowed(cells, x, y, nx, ny):
                continue
            dist[ny][nx] = dist[y][x] + 1.0
            q.append((nx, ny))
    return dist


def bfs_shortest_len(cells, start, goal):
    """Minimal edge count start -> goal, or INF."""
    dist = bfs_cost_to_go(cells, goal)
    return dist[start[1]][start[0]]


def nearest_point(points, x, y, key):
    """Earliest point minimizing key(px - x, py - y); None when empty.

    key gets signed deltas; use a euclidean or per-axis metric.
    """
    best = None
    best_val = None
    for px, py in points:
        val = key(px - x, py - y)
        if best_val is None or val < best_val:
            best = (px, py)
            best_val = val
    return best, best_val


def mlp_forward_scalar(weights, biases, x):
    """Plain-python forward pass: ReLU hidden layers, linear scalar output.

    weights are nested lists shaped (fan_in, fan_out), biases flat lists.
    """
    act = list(x)
    n_layers = len(weights)
    for li in range(n_layers):
        W = weights[li]
        b = biases[li]
        fan_in = len(W)
        fan_out = len(W[0])
        nxt = []
        for j in range(fan_out):
            s = b[j]
            for i in range(fan_in):
                s += act[i] * W[i][j]
            if li < n_layers - 1 and s < 0.0:
                s = 0.0
            nxt.append(s)
        act = nxt
    return act[0]
