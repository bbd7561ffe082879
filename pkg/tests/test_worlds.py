import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import world_from_rows
from sailgrid import (
    Edge,
    EpisodeSpec,
    Vertex,
    World,
    evaluate_edge,
    read_pgm,
    successors,
    write_pgm,
)


def test_vertex_edge_are_tuples():
    v = Vertex(3, 4)
    assert v.x == 3 and v.y == 4 and tuple(v) == (3, 4)
    e = Edge(Vertex(0, 0), Vertex(1, 1))
    assert e.src == (0, 0) and e.dst == (1, 1)


def test_world_validation():
    with pytest.raises(ValueError):
        World(1, 5, np.zeros((5, 1), dtype=bool))
    with pytest.raises(ValueError):
        World(4, 4, np.zeros((3, 4), dtype=bool))


def test_world_cells_immutable(empty12):
    with pytest.raises(ValueError):
        empty12.cells[0, 0] = True


def test_world_index_roundtrip(empty12):
    for v in [(0, 0), (11, 11), (3, 7)]:
        assert empty12.vertex(empty12.index(v)) == v


def test_episode_spec_validation(empty12):
    EpisodeSpec(empty12, Vertex(0, 0), Vertex(11, 11))
    with pytest.raises(ValueError):
        EpisodeSpec(empty12, Vertex(0, 0), Vertex(0, 0))
    with pytest.raises(ValueError):
        EpisodeSpec(empty12, Vertex(-1, 0), Vertex(11, 11))
    blocked = world_from_rows(["..", ".#"])  # bottom-right blocked
    with pytest.raises(ValueError):
        EpisodeSpec(blocked, Vertex(0, 0), Vertex(1, 0))


def test_successors_center_clockwise_from_north():
    out = successors(Vertex(1, 1), (3, 3))
    assert [v for _, v in out] == [
        (1, 2), (2, 2), (2, 1), (2, 0), (1, 0), (0, 0), (0, 1), (0, 2),
    ]
    assert all(e.src == (1, 1) and e.dst == v for e, v in out)


def test_successors_corner_and_edge_degrees():
    assert len(successors(Vertex(0, 0), (3, 3))) == 3
    assert len(successors(Vertex(1, 0), (3, 3))) == 5
    assert len(successors(Vertex(1, 1), (3, 3))) == 8


def test_successors_out_of_bounds_raises():
    with pytest.raises(ValueError):
        successors(Vertex(3, 0), (3, 3))


@settings(max_examples=60, deadline=None)
@given(
    w=st.integers(2, 30),
    h=st.integers(2, 30),
    data=st.data(),
)
def test_successors_degree_and_bounds_property(w, h, data):
    x = data.draw(st.integers(0, w - 1))
    y = data.draw(st.integers(0, h - 1))
    out = successors(Vertex(x, y), (w, h))
    assert len(out) in (3, 5, 8)
    for _, v in out:
        assert 0 <= v.x < w and 0 <= v.y < h
        assert max(abs(v.x - x), abs(v.y - y)) == 1


def test_evaluate_edge_trivial_cases(empty12):
    assert evaluate_edge(Edge(Vertex(0, 0), Vertex(1, 1)), empty12)
    blocked = world_from_rows(["..", "#."])
    assert not evaluate_edge(Edge(Vertex(1, 0), Vertex(0, 0)), blocked)


@pytest.mark.parametrize(
    "corner_a,corner_b,expected",
    [
        (False, False, True),
        (True, False, True),
        (False, True, True),
        (True, True, False),
    ],
)
def test_evaluate_edge_corner_rule_enumeration(corner_a, corner_b, expected):
    # Diagonal (0,0) -> (1,1); corners are (1,0) and (0,1).
    cells = np.zeros((2, 2), dtype=bool)
    cells[0, 1] = corner_a
    cells[1, 0] = corner_b
    world = World(2, 2, cells)
    assert evaluate_edge(Edge(Vertex(0, 0), Vertex(1, 1)), world) is expected


def test_evaluate_edge_rejects_non_neighbor(empty12):
    with pytest.raises(ValueError):
        evaluate_edge(Edge(Vertex(0, 0), Vertex(2, 0)), empty12)
    with pytest.raises(ValueError):
        evaluate_edge(Edge(Vertex(0, 0), Vertex(12, 0)), empty12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_evaluate_edge_is_pure(seed):
    rng = np.random.default_rng(seed)
    cells = rng.random((6, 6)) < 0.4
    cells[0, 0] = False
    world = World(6, 6, cells)
    for e, v in successors(Vertex(2, 2), (6, 6)):
        assert evaluate_edge(e, world) == evaluate_edge(e, world)


def test_pgm_roundtrip_and_determinism(tmp_path):
    rng = np.random.default_rng(5)
    cells = rng.random((9, 14)) < 0.3
    world = World(14, 9, cells, seed=42, distribution_name="forest")
    p1 = tmp_path / "a.pgm"
    p2 = tmp_path / "b.pgm"
    write_pgm(world, p1)
    write_pgm(world, p2)
    assert p1.read_bytes() == p2.read_bytes()
    back = read_pgm(p1, seed=42, distribution_name="forest")
    assert back.width == 14 and back.height == 9
    assert np.array_equal(back.cells, world.cells)
    assert p1.read_bytes().startswith(b"P5\n14 9\n255\n")


def test_read_pgm_rejects_garbage(tmp_path):
    p = tmp_path / "bad.pgm"
    p.write_bytes(b"P3\n2 2\n255\n")
    with pytest.raises(ValueError):
        read_pgm(p)
