"""Cost-to-go regressor: a small fully connected network with rectified
linear hidden layers and a scalar linear output, all in 64-bit floats.

Functional core (init/forward/backward/step/flatten) plus a scikit-learn
style estimator wrapper. The flat parameter layout is, layer by layer, the
weight matrix in row-major order followed by the bias vector.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .validation import as_generator

__all__ = [
    "DEFAULT_LAYER_DIMS",
    "MlpParams",
    "RmsPropState",
    "init_params",
    "forward",
    "backward",
    "rmsprop_step",
    "flatten",
    "unflatten",
    "num_params",
    "save_params",
    "load_params",
    "train_regressor",
    "CostToGoRegressor",
]

DEFAULT_LAYER_DIMS = (17, 100, 50, 1)

_MAGIC = b"SGMLP001"


@dataclass
class MlpParams:
    """Weight matrices ((fan_in, fan_out)) and bias vectors, one per layer."""

    weights: list
    biases: list

    @property
    def layer_dims(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0], *(b.size for b in self.biases))

    def copy(self) -> "MlpParams":
        return MlpParams([w.copy() for w in self.weights], [b.copy() for b in self.biases])


def _check_layer_dims(layer_dims):
    dims = tuple(int(d) for d in layer_dims)
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise ValueError(f"bad layer dims {layer_dims!r}")
    return dims


def init_params(layer_dims=DEFAULT_LAYER_DIMS, seed=0) -> MlpParams:
    """Uniform weights with bound sqrt(6 / (fan_in + fan_out)), zero biases."""
    dims = _check_layer_dims(layer_dims)
    rng = as_generator(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases)


def num_params(layer_dims) -> int:
    dims = _check_layer_dims(layer_dims)
    return sum(fi * fo + fo for fi, fo in zip(dims[:-1], dims[1:]))


def forward(params: MlpParams, features):
    """Model output: a float for one feature vector, an (n,) array for a batch.

    Raises on non-finite inputs or a width mismatch.
    """
    X = np.asarray(features, dtype=np.float64)
    single = X.ndim == 1
    A = X[None, :] if single else X
    if A.ndim != 2 or A.shape[1] != params.weights[0].shape[0]:
        raise ValueError(
            f"feature width {A.shape[-1] if A.ndim else '?'} does not match "
            f"model input {params.weights[0].shape[0]}"
        )
    if not np.isfinite(A).all():
        raise ValueError("non-finite feature values")
    for W, b in zip(params.weights[:-1], params.biases[:-1]):
        A = np.maximum(A @ W + b, 0.0)
    out = (A @ params.weights[-1] + params.biases[-1])[:, 0]
    return float(out[0]) if single else out


def backward(params: MlpParams, features, labels) -> tuple[float, MlpParams]:
    """Mean squared error over a batch and its gradient in every parameter."""
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64).ravel()
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("backward expects a non-empty (n, d) batch")
    if y.shape[0] != X.shape[0]:
        raise ValueError("features and labels disagree on batch size")
    n = X.shape[0]
    acts = [X]
    A = X
    for W, b in zip(params.weights[:-1], params.biases[:-1]):
        A = np.maximum(A @ W + b, 0.0)
        acts.append(A)
    yhat = (A @ params.weights[-1] + params.biases[-1])[:, 0]
    r = yhat - y
    loss = float(np.mean(r * r))
    g_out = (2.0 / n) * r
    gW = [np.empty(0)] * len(params.weights)
    gb = [np.empty(0)] * len(params.biases)
    gW[-1] = acts[-1].T @ g_out[:, None]
    gb[-1] = np.array([g_out.sum()])
    dA = g_out[:, None] @ params.weights[-1].T
    for i in range(len(params.weights) - 2, -1, -1):
        dZ = dA * (acts[i + 1] > 0.0)
        gW[i] = acts[i].T @ dZ
        gb[i] = dZ.sum(axis=0)
        dA = dZ @ params.weights[i].T
    return loss, MlpParams(gW, gb)


@dataclass
class RmsPropState:
    """Running mean of squared gradients plus the update hyperparameters."""

    mean_sq: MlpParams
    rho: float = 0.9
    eps: float = 1e-8
    learning_rate: float = 0.01

    @classmethod
    def for_params(cls, params: MlpParams, rho=0.9, eps=1e-8, learning_rate=0.01):
        zeros = MlpParams(
            [np.zeros_like(w) for w in params.weights],
            [np.zeros_like(b) for b in params.biases],
        )
        return cls(zeros, rho=rho, eps=eps, learning_rate=learning_rate)


def rmsprop_step(params: MlpParams, opt: RmsPropState, grads: MlpParams) -> MlpParams:
    """One in-place update: acc <- rho*acc + (1-rho)*g^2,
    p <- p - lr * g / (sqrt(acc) + eps). Returns params."""
    rho, eps, lr = opt.rho, opt.eps, opt.learning_rate
    for p, m, g in zip(
        params.weights + params.biases,
        opt.mean_sq.weights + opt.mean_sq.biases,
        grads.weights + grads.biases,
    ):
        m *= rho
        m += (1.0 - rho) * g * g
        p -= lr * g / (np.sqrt(m) + eps)
    return params


def flatten(params: MlpParams) -> np.ndarray:
    parts = []
    for W, b in zip(params.weights, params.biases):
        parts.append(W.ravel())
        parts.append(b)
    return np.concatenate(parts)


def unflatten(vec, layer_dims) -> MlpParams:
    dims = _check_layer_dims(layer_dims)
    v = np.asarray(vec, dtype=np.float64).ravel()
    if v.size != num_params(dims):
        raise ValueError(
            f"vector length {v.size} does not match layer dims {dims} "
            f"({num_params(dims)} parameters)"
        )
    weights, biases = [], []
    pos = 0
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        weights.append(v[pos : pos + fan_in * fan_out].reshape(fan_in, fan_out).copy())
        pos += fan_in * fan_out
        biases.append(v[pos : pos + fan_out].copy())
        pos += fan_out
    return MlpParams(weights, biases)


def save_params(params: MlpParams, path) -> None:
    """Flat binary file: magic, JSON header (layer dims, byte order), then
    the flattened parameters as little-endian float64."""
    header = json.dumps(
        {"layer_dims": list(params.layer_dims), "dtype": "<f8", "byteorder": "little"}
    ).encode("ascii")
    blob = flatten(params).astype("<f8").tobytes()
    Path(path).write_bytes(
        _MAGIC + len(header).to_bytes(4, "little") + header + blob
    )


def load_params(path) -> MlpParams:
    data = Path(path).read_bytes()
    if data[: len(_MAGIC)] != _MAGIC:
        raise ValueError(f"{path}: not a model parameter file")
    hlen = int.from_bytes(data[len(_MAGIC) : len(_MAGIC) + 4], "little")
    header = json.loads(data[len(_MAGIC) + 4 : len(_MAGIC) + 4 + hlen])
    dims = tuple(header["layer_dims"])
    vec = np.frombuffer(data[len(_MAGIC) + 4 + hlen :], dtype="<f8")
    return unflatten(vec.astype(np.float64), dims)


def train_regressor(
    params: MlpParams,
    X,
    y,
    *,
    epochs: int,
    batch_size: int = 64,
    learning_rate: float = 0.01,
    rho: float = 0.9,
    eps: float = 1e-8,
    rng=0,
) -> tuple[MlpParams, list[float]]:
    """Shuffled minibatch passes over (X, y); in-place on params.

    Returns (params, per-epoch mean loss). Batches are drawn without
    replacement from a fresh seeded permutation each epoch.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    rng = as_generator(rng)
    opt = RmsPropState.for_params(params, rho=rho, eps=eps, learning_rate=learning_rate)
    n = X.shape[0]
    losses = []
    for _ in range(int(epochs)):
        perm = rng.permutation(n)
        total = 0.0
        for s in range(0, n, batch_size):
            idx = perm[s : s + batch_size]
            loss, grads = backward(params, X[idx], y[idx])
            rmsprop_step(params, opt, grads)
            total += loss * idx.size
        losses.append(total / n)
    return params, losses


class CostToGoRegressor(RegressorMixin, BaseEstimator):
    """Scikit-learn style interface to the network.

    fit(X, y) regresses scalar targets with squared error; predict(X)
    evaluates the trained network. Fixed seed plus fixed data order gives
    bit-identical parameters.
    """

    def __init__(
        self,
        hidden_layer_sizes=(100, 50),
        epochs=10,
        batch_size=64,
        learning_rate=0.01,
        rho=0.9,
        epsilon=1e-8,
        random_state=0,
    ):
        self.hidden_layer_sizes = hidden_layer_sizes
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.rho = rho
        self.epsilon = epsilon
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
        rng = np.random.default_rng(self.random_state)
        dims = (X.shape[1], *tuple(self.hidden_layer_sizes), 1)
        params = init_params(dims, seed=rng)
        params, losses = train_regressor(
            params,
            X,
            y,
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            rho=self.rho,
            eps=self.epsilon,
            rng=rng,
        )
        self.params_ = params
        self.layer_dims_ = dims
        self.loss_curve_ = losses
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, dtype=np.float64)
        return np.asarray(forward(self.params_, X))
