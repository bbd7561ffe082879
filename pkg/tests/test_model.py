import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import reference
from sailgrid import (
    CostToGoRegressor,
    MlpParams,
    RmsPropState,
    backward,
    flatten,
    forward,
    init_params,
    load_params,
    num_params,
    rmsprop_step,
    save_params,
    train_regressor,
    unflatten,
)


def rel_err(a, b, floor=1e-3):
    return abs(a - b) / max(abs(a), abs(b), floor)


def test_init_deterministic_and_bounded():
    a = init_params((17, 100, 50, 1), seed=3)
    b = init_params((17, 100, 50, 1), seed=3)
    assert all(np.array_equal(x, y) for x, y in zip(a.weights, b.weights))
    for W, (fi, fo) in zip(a.weights, [(17, 100), (100, 50), (50, 1)]):
        bound = np.sqrt(6.0 / (fi + fo))
        assert np.abs(W).max() <= bound
        assert W.shape == (fi, fo)
    assert all(not b_.any() for b_ in a.biases)
    c = init_params((17, 100, 50, 1), seed=4)
    assert not np.array_equal(a.weights[0], c.weights[0])


def test_forward_zero_params_is_zero():
    p = MlpParams(
        [np.zeros((17, 100)), np.zeros((100, 50)), np.zeros((50, 1))],
        [np.zeros(100), np.zeros(50), np.zeros(1)],
    )
    assert forward(p, np.random.default_rng(0).random(17)) == 0.0


def test_forward_identity_passthrough():
    p = MlpParams([np.zeros((4, 3)), np.zeros((3, 1))], [np.zeros(3), np.zeros(1)])
    p.weights[0][2, 0] = 1.0
    p.weights[1][0, 0] = 1.0
    x = np.array([0.5, 0.1, 0.73, 0.9])
    assert forward(p, x) == pytest.approx(0.73)


def test_forward_matches_plain_python_reference():
    rng = np.random.default_rng(7)
    p = init_params((9, 12, 5, 1), seed=11)
    for _ in range(10):
        x = rng.uniform(-1, 1, 9)
        ref = reference.mlp_forward_scalar(
            [W.tolist() for W in p.weights], [b.tolist() for b in p.biases], x.tolist()
        )
        assert forward(p, x) == pytest.approx(ref, rel=1e-12)


def test_forward_batch_matches_single():
    p = init_params((6, 8, 1), seed=2)
    X = np.random.default_rng(1).random((5, 6))
    batch = forward(p, X)
    assert batch.shape == (5,)
    for i in range(5):
        assert batch[i] == pytest.approx(forward(p, X[i]))


def test_forward_rejects_bad_input():
    p = init_params((4, 3, 1), seed=0)
    with pytest.raises(ValueError):
        forward(p, np.array([1.0, np.nan, 0.0, 0.0]))
    with pytest.raises(ValueError):
        forward(p, np.zeros(5))


def test_backward_zero_case():
    p = MlpParams([np.zeros((3, 2)), np.zeros((2, 1))], [np.zeros(2), np.zeros(1)])
    loss, g = backward(p, np.ones((4, 3)), np.zeros(4))
    assert loss == 0.0
    assert all(not W.any() for W in g.weights)
    assert all(not b.any() for b in g.biases)


def test_backward_single_linear_layer_closed_form():
    # One linear layer: loss = (w.x + b - y)^2, grads 2r*x and 2r.
    p = MlpParams([np.array([[0.5], [-1.0], [2.0]])], [np.array([0.25])])
    x = np.array([[1.0, 2.0, 3.0]])
    y = np.array([1.5])
    yhat = 0.5 - 2.0 + 6.0 + 0.25
    r = yhat - 1.5
    loss, g = backward(p, x, y)
    assert loss == pytest.approx(r * r)
    assert np.allclose(g.weights[0][:, 0], 2 * r * x[0])
    assert g.biases[0][0] == pytest.approx(2 * r)


def test_backward_rejects_empty_batch():
    p = init_params((3, 2, 1), seed=0)
    with pytest.raises(ValueError):
        backward(p, np.empty((0, 3)), np.empty(0))


def central_diff_grads(params, X, y, step=1e-6):
    dims = params.layer_dims
    vec = flatten(params)
    out = np.empty_like(vec)
    for i in range(vec.size):
        up = vec.copy()
        up[i] += step
        down = vec.copy()
        down[i] -= step
        lu, _ = backward(unflatten(up, dims), X, y)
        ld, _ = backward(unflatten(down, dims), X, y)
        out[i] = (lu - ld) / (2 * step)
    return out


@pytest.mark.parametrize("dims", [(5, 7, 1), (5, 8, 4, 1), (17, 100, 1)])
def test_gradients_match_finite_differences(dims):
    rng = np.random.default_rng(42)
    for draw in range(3):
        p = init_params(dims, seed=100 + draw)
        X = rng.uniform(0, 1, (6, dims[0]))
        y = rng.uniform(0, 4, 6)
        _, g = backward(p, X, y)
        analytic = flatten(g)
        numeric = central_diff_grads(p, X, y)
        worst = max(rel_err(a, n) for a, n in zip(analytic, numeric))
        assert worst < 1e-5, worst


def test_rmsprop_zero_gradient_leaves_params():
    p = init_params((3, 4, 1), seed=0)
    before = flatten(p).copy()
    opt = RmsPropState.for_params(p)
    zeros = MlpParams([np.zeros_like(W) for W in p.weights], [np.zeros_like(b) for b in p.biases])
    rmsprop_step(p, opt, zeros)
    assert np.array_equal(flatten(p), before)


def test_rmsprop_first_step_closed_form():
    p = MlpParams([np.array([[1.0]])], [np.array([0.0])])
    opt = RmsPropState.for_params(p, rho=0.9, eps=1e-8, learning_rate=0.01)
    g = 0.3
    grads = MlpParams([np.array([[g]])], [np.array([0.0])])
    rmsprop_step(p, opt, grads)
    expected = 1.0 - 0.01 * g / (np.sqrt(0.1 * g * g) + 1e-8)
    assert p.weights[0][0, 0] == pytest.approx(expected, rel=1e-12)


def test_rmsprop_constant_gradient_step_approaches_lr():
    p = MlpParams([np.array([[0.0]])], [np.array([0.0])])
    opt = RmsPropState.for_params(p, learning_rate=0.01)
    g = MlpParams([np.array([[2.5]])], [np.array([0.0])])
    prev = 0.0
    for _ in range(400):
        rmsprop_step(p, opt, g)
        step = prev - p.weights[0][0, 0]
        prev = p.weights[0][0, 0]
    assert step == pytest.approx(0.01, rel=1e-3)
    assert opt.mean_sq.weights[0][0, 0] >= 0


def test_flatten_length_formula():
    dims = (17, 100, 50, 1)
    expected = 17 * 100 + 100 + 100 * 50 + 50 + 50 * 1 + 1
    assert num_params(dims) == expected == flatten(init_params(dims, seed=0)).size


@settings(max_examples=25, deadline=None)
@given(
    dims=st.lists(st.integers(1, 9), min_size=2, max_size=4),
    seed=st.integers(0, 1000),
)
def test_flatten_unflatten_roundtrip(dims, seed):
    dims = tuple(dims)
    p = init_params(dims, seed=seed)
    q = unflatten(flatten(p), dims)
    assert all(np.array_equal(a, b) for a, b in zip(p.weights, q.weights))
    assert all(np.array_equal(a, b) for a, b in zip(p.biases, q.biases))
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(num_params(dims))
    assert np.array_equal(flatten(unflatten(vec, dims)), vec)


def test_unflatten_length_mismatch():
    with pytest.raises(ValueError):
        unflatten(np.zeros(10), (3, 2, 1))


def test_save_load_roundtrip(tmp_path):
    p = init_params((7, 5, 1), seed=9)
    path = tmp_path / "m.bin"
    save_params(p, path)
    q = load_params(path)
    assert q.layer_dims == (7, 5, 1)
    assert np.array_equal(flatten(p), flatten(q))
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"NOTMODEL" + b"\x00" * 16)
    with pytest.raises(ValueError):
        load_params(bad)


def _toy_data(n=256, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 1, (n, 6))
    y = 3.0 * X[:, 0] - 2.0 * X[:, 3] + 0.5 + 0.01 * rng.standard_normal(n)
    return X, y


def test_training_halves_loss_within_ten_epochs():
    X, y = _toy_data()
    params = init_params((6, 16, 8, 1), seed=1)
    _, losses = train_regressor(
        params, X, y, epochs=11, batch_size=64, learning_rate=0.01, rng=5
    )
    assert losses[10] < 0.5 * losses[0]


def test_training_bit_identical_under_fixed_seed():
    X, y = _toy_data()
    a = init_params((6, 10, 1), seed=2)
    b = init_params((6, 10, 1), seed=2)
    _, la = train_regressor(a, X, y, epochs=4, rng=7)
    _, lb = train_regressor(b, X, y, epochs=4, rng=7)
    assert la == lb
    assert np.array_equal(flatten(a), flatten(b))


def test_regressor_estimator_interface():
    X, y = _toy_data(400)
    reg = CostToGoRegressor(hidden_layer_sizes=(16, 8), epochs=40, random_state=0)
    assert clone(reg).get_params() == reg.get_params()
    with pytest.raises(NotFittedError):
        reg.predict(X)
    reg.fit(X, y)
    assert reg.n_features_in_ == 6
    pred = reg.predict(X[:10])
    assert pred.shape == (10,)
    assert reg.score(X, y) > 0.8
    two = CostToGoRegressor(hidden_layer_sizes=(16, 8), epochs=40, random_state=0).fit(X, y)
    assert np.array_equal(flatten(reg.params_), flatten(two.params_))
