import numpy as np
import pytest

import reference
from sailgrid import (
    DISTRIBUTIONS,
    UnknownDistributionError,
    default_params,
    generate_world,
)


def test_distribution_list():
    assert set(DISTRIBUTIONS) == {
        "empty",
        "bugtrap",
        "forest",
        "single_gap_wall",
        "shifted_gaps",
        "maze",
        "gaps_and_forest",
    }


def test_unknown_distribution_raises():
    with pytest.raises(UnknownDistributionError):
        generate_world("swamp", 0, 20, 20)
    with pytest.raises(UnknownDistributionError):
        default_params("swamp")


def test_small_dims_rejected():
    with pytest.raises(ValueError):
        generate_world("empty", 0, 9, 20)


def test_unknown_param_rejected():
    with pytest.raises(ValueError):
        generate_world("forest", 0, 20, 20, {"densty": 0.2})


def test_empty_world_all_free():
    world = generate_world("empty", 123, 10, 10)
    assert not world.cells.any()


def test_determinism_bit_identical():
    for name in DISTRIBUTIONS:
        a = generate_world(name, 77, 24, 18)
        b = generate_world(name, 77, 24, 18)
        assert np.array_equal(a.cells, b.cells), name
        assert a.seed == 77 and a.distribution_name == name


def test_different_seeds_differ():
    grids = [generate_world("forest", s, 20, 20).cells for s in range(4)]
    assert any(not np.array_equal(grids[0], g) for g in grids[1:])


@pytest.mark.parametrize("name", DISTRIBUTIONS)
@pytest.mark.parametrize("dims", [(10, 10), (21, 33), (40, 40)])
def test_generated_worlds_solvable_by_reference_flood_fill(name, dims):
    w, h = dims
    for seed in range(3):
        world = generate_world(name, seed, w, h)
        assert not world.cells[0, 0]
        assert not world.cells[h - 1, w - 1]
        dist = reference.bfs_cost_to_go(world.cells.tolist(), (w - 1, h - 1))
        assert dist[0][0] != reference.INF, f"{name} seed {seed} unsolvable"


def test_single_gap_wall_structure():
    # Scan the emitted grid: exactly one column carries obstacles, its free
    # run is one contiguous gap of the configured size, everything else free.
    world = generate_world("single_gap_wall", 11, 50, 50)
    k = max(2, round(0.06 * 50))
    cols = np.flatnonzero(world.cells.any(axis=0))
    assert cols.size == 1
    col = int(cols[0])
    column = world.cells[:, col]
    assert int((~column).sum()) == k
    free_rows = np.flatnonzero(~column)
    assert free_rows[-1] - free_rows[0] == k - 1  # contiguous
    others = np.delete(world.cells, col, axis=1)
    assert not others.any()


def test_shifted_gaps_structure_and_band():
    params = default_params("shifted_gaps")
    lo, hi = params["gap_band"]
    world = generate_world("shifted_gaps", 3, 100, 100)
    k = max(2, round(0.04 * 100))
    wall_cols = np.flatnonzero(world.cells.sum(axis=0) == 100 - k)
    assert wall_cols.size >= 2
    for col in wall_cols:
        free_rows = np.flatnonzero(~world.cells[:, col])
        assert free_rows.size == k
        assert free_rows[-1] - free_rows[0] == k - 1
        assert int(lo * (100 - k)) <= free_rows[0] <= int(hi * (100 - k))


def _ring_scan(cells):
    """Recover the obstacle ring's bbox and thickness by scanning the grid."""
    ys, xs = np.nonzero(cells)
    x0, x1 = xs.min(), xs.max()
    y0, y1 = ys.min(), ys.max()
    cx, cy = (x0 + x1) // 2, (y0 + y1) // 2
    # thickness along the east (goal-facing, fully closed) side
    t = 0
    x = x1
    while x >= x0 and cells[cy, x]:
        t += 1
        x -= 1
    return (x0, y0, x1, y1), (cx, cy), t


def test_bugtrap_structure():
    world = generate_world("bugtrap", 2, 200, 200)
    cells = world.cells
    (x0, y0, x1, y1), (cx, cy), t = _ring_scan(cells)
    half_x = (x1 - x0) // 2
    half_y = (y1 - y0) // 2
    assert half_x == half_y and t >= 2
    half = half_x
    # ring center sits on the start-goal diagonal (within a small fraction)
    assert abs(cx / 199 - cy / 199) < 0.05
    # obstacles form a subset of the expected square annulus
    dx = np.abs(np.arange(200) - cx)
    dy = np.abs(np.arange(200) - cy)
    cheb = np.maximum(dy[:, None], dx[None, :])
    expected = (cheb >= half - t + 1) & (cheb <= half)
    assert not (cells & ~expected).any()
    # the cavity interior is free and on the corridor
    assert not cells[cy, cx]
    # the opening (missing ring cells) is nonempty and faces away from goal
    opening = expected & ~cells
    oy, ox = np.nonzero(opening)
    assert ox.size > 0
    goal = np.array([199.0, 199.0])
    centroid = np.array([ox.mean(), oy.mean()])
    center = np.array([float(cx), float(cy)])
    assert np.linalg.norm(centroid - goal) > np.linalg.norm(center - goal)


def test_params_override_reshapes_distribution():
    dense = generate_world("forest", 4, 30, 30, {"density": 0.3})
    sparse = generate_world("forest", 4, 30, 30, {"density": 0.05})
    assert dense.cells.sum() > sparse.cells.sum()
