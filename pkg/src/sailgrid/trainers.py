"""Training algorithms for the learned selection policy.

Four learners share the same episode machinery:

- :class:`SailTrainer`: iterative imitation with dataset aggregation. Each
  iteration rolls out a per-timestep mixture of the full-knowledge oracle
  policy and the current learned policy, records oracle cost-to-go labels
  at randomly sampled probe expansions, refits the regressor on everything
  collected so far, and keeps the iteration that scores best on held-out
  validation worlds.
- :class:`SupervisedTrainer`: behavior cloning; a single collection pass
  with the mixture pinned to the oracle and a probe executed at every
  timestep, then one regression fit.
- :class:`QTrainer`: episodic temporal-difference learning with an
  epsilon-greedy policy over the network's frozen scores; the aggregated
  transition set acts as a replay buffer.
- :class:`CemTrainer`: derivative-free cross-entropy search over the
  flattened parameters of a smaller network.

All randomness derives from one integer seed through fixed-role streams, so
a full training run reproduces bit-identical datasets and parameters.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator

from .features import FEATURE_DIM, featurize_batch
from .model import (
    CostToGoRegressor,
    MlpParams,
    init_params,
    num_params,
    unflatten,
)
from .oracle import OraclePolicy, backward_dijkstra
from .policies import EpsilonGreedyPolicy, LearnedPolicy, SelectPolicy
from .search import Observer, run_search
from .validation import as_generator, check_positive_int, check_unit_interval

__all__ = [
    "TrainConfig",
    "DatasetBuffer",
    "QBuffer",
    "MixturePolicy",
    "mixture_select",
    "EvalReport",
    "evaluate_policy",
    "SailTrainer",
    "SupervisedTrainer",
    "QTrainer",
    "CemTrainer",
    "cem_optimize",
    "sail_train",
    "sl_train",
    "ql_train",
    "cem_train",
]

_MASK = 0xFFFFFFFFFFFFFFFF
_ROLE_INIT, _ROLE_EPISODE, _ROLE_TRAIN, _ROLE_CEM = 0, 1, 2, 3


def _rng(seed, *key) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _MASK, *key]))


def _train_seed(seed, iteration) -> int:
    ss = np.random.SeedSequence([int(seed) & _MASK, _ROLE_TRAIN, iteration])
    return int(ss.generate_state(1)[0])


# ---------------------------------------------------------------------------
# datapoint buffers


class DatasetBuffer:
    """Aggregated regression datapoints: 17 features, the clamped oracle
    label, and (world seed, episode timestep) provenance."""

    _HEADER_MAGIC = b"SGDATA01"

    def __init__(self, feature_dim: int = FEATURE_DIM):
        self.feature_dim = feature_dim
        self._X = np.empty((256, feature_dim))
        self._y = np.empty(256)
        self._prov = np.empty((256, 2), dtype=np.int64)
        self._n = 0

    def _grow(self):
        self._X = np.vstack([self._X, np.empty_like(self._X)])
        self._y = np.concatenate([self._y, np.empty_like(self._y)])
        self._prov = np.vstack([self._prov, np.empty_like(self._prov)])

    def add(self, features, label, world_seed, timestep):
        if self._n == self._X.shape[0]:
            self._grow()
        i = self._n
        self._X[i] = features
        self._y[i] = label
        self._prov[i, 0] = world_seed
        self._prov[i, 1] = timestep
        self._n = i + 1

    def __len__(self) -> int:
        return self._n

    @property
    def X(self) -> np.ndarray:
        return self._X[: self._n]

    @property
    def y(self) -> np.ndarray:
        return self._y[: self._n]

    @property
    def provenance(self) -> np.ndarray:
        return self._prov[: self._n]

    def save(self, path) -> None:
        """Flat binary records with a JSON header: features block, label
        block, then int64 provenance block, all little endian."""
        header = json.dumps({"count": self._n, "feature_dim": self.feature_dim}).encode()
        blob = (
            self.X.astype("<f8").tobytes()
            + self.y.astype("<f8").tobytes()
            + self.provenance.astype("<i8").tobytes()
        )
        Path(path).write_bytes(
            self._HEADER_MAGIC + len(header).to_bytes(4, "little") + header + blob
        )

    @classmethod
    def load(cls, path) -> "DatasetBuffer":
        data = Path(path).read_bytes()
        if data[:8] != cls._HEADER_MAGIC:
            raise ValueError(f"{path}: not a dataset file")
        hlen = int.from_bytes(data[8:12], "little")
        header = json.loads(data[12 : 12 + hlen])
        n, d = header["count"], header["feature_dim"]
        pos = 12 + hlen
        buf = cls(feature_dim=d)
        X = np.frombuffer(data[pos : pos + 8 * n * d], dtype="<f8").reshape(n, d)
        pos += 8 * n * d
        y = np.frombuffer(data[pos : pos + 8 * n], dtype="<f8")
        pos += 8 * n
        prov = np.frombuffer(data[pos : pos + 16 * n], dtype="<i8").reshape(n, 2)
        for i in range(n):
            buf.add(X[i], y[i], prov[i, 0], prov[i, 1])
        return buf


class QBuffer:
    """Recorded transitions for temporal-difference regression: features of
    the expanded vertex, its one-step cost, and the best frozen score over
    the successor open list (zero for terminal transitions)."""

    def __init__(self, feature_dim: int = FEATURE_DIM):
        self.feature_dim = feature_dim
        self._X = np.empty((256, feature_dim))
        self._c = np.empty(256)
        self._next = np.empty(256)
        self._n = 0

    def add(self, features, cost, next_best):
        if self._n == self._X.shape[0]:
            self._X = np.vstack([self._X, np.empty_like(self._X)])
            self._c = np.concatenate([self._c, np.empty_like(self._c)])
            self._next = np.concatenate([self._next, np.empty_like(self._next)])
        i = self._n
        self._X[i] = features
        self._c[i] = cost
        self._next[i] = next_best
        self._n = i + 1

    def __len__(self) -> int:
        return self._n

    @property
    def X(self) -> np.ndarray:
        return self._X[: self._n]

    @property
    def cost(self) -> np.ndarray:
        return self._c[: self._n]

    @property
    def next_best(self) -> np.ndarray:
        return self._next[: self._n]

    @property
    def targets(self) -> np.ndarray:
        return self.cost + self.next_best


# ---------------------------------------------------------------------------
# mixture policy


def mixture_select(state, oracle_policy, learner_policy, beta, rng):
    """One Bernoulli(beta) coin: heads expands the oracle's argmin, tails
    the learner's frozen-score argmin."""
    if rng.random() < beta:
        return oracle_policy.select(state)
    return learner_policy.select(state)


class MixturePolicy(SelectPolicy):
    """Per-timestep blend of the oracle and the learned policy.

    Both orderings range over the one shared open set; with beta == 1 the
    learner ordering is not maintained at all (it would never be consulted
    and the coin stream is unchanged).
    """

    def __init__(self, oracle_policy, learner_policy, beta, rng):
        self.beta = check_unit_interval(beta, "beta")
        if learner_policy is None and self.beta < 1.0:
            raise ValueError("a learner policy is required when beta < 1")
        self.oracle_policy = oracle_policy
        self.learner_policy = learner_policy if self.beta < 1.0 else None
        self.rng = as_generator(rng)

    def begin_episode(self, spec, state):
        self.oracle_policy.begin_episode(spec, state)
        if self.learner_policy is not None:
            self.learner_policy.begin_episode(spec, state)

    def on_insert_many(self, vids, state):
        self.oracle_policy.on_insert_many(vids, state)
        if self.learner_policy is not None:
            self.learner_policy.on_insert_many(vids, state)

    def on_insert(self, vid, state):
        self.on_insert_many([vid], state)

    def select(self, state):
        if self.learner_policy is None:
            self.rng.random()  # keep the coin stream identical to beta < 1
            return self.oracle_policy.select(state)
        return mixture_select(
            state, self.oracle_policy, self.learner_policy, self.beta, self.rng
        )


# ---------------------------------------------------------------------------
# episode collection


class _ProbeObserver(Observer):
    """Executes a uniformly random probe expansion at each sampled timestep
    and records (features of the probe at selection time, clamped oracle
    label, provenance)."""

    def __init__(self, sampled, table, clamp, buffer, rng, world_seed):
        self.sampled = sampled
        self.flat = table.flat
        self.clamp = clamp
        self.buffer = buffer
        self.rng = rng
        self.world_seed = world_seed

    def select_override(self, state):
        if state.expansions + 1 in self.sampled:
            ids = state.open_ids
            return ids[int(self.rng.integers(len(ids)))]
        return None

    def on_selected(self, state, vid):
        t = state.expansions + 1
        if t in self.sampled:
            f = featurize_batch([vid], state)[0]
            label = min(float(self.flat[vid]), self.clamp)
            self.buffer.add(f, label, self.world_seed, t)


def _collect_episode(spec, table, params, beta, k, horizon, rng, buffer):
    """One data-collection rollout under the oracle/learner mixture.

    Samples k distinct probe timesteps from 1..horizon up front; at each,
    a uniformly random open vertex is recorded with its oracle label
    (clamped to the horizon) and that expansion is executed; the mixture
    resumes in between. An episode may end early and record fewer than k
    datapoints.
    """
    k = min(int(k), int(horizon))
    ts = rng.choice(int(horizon), size=k, replace=False) + 1
    sampled = set(int(t) for t in ts)
    oracle_pol = OraclePolicy(table)
    learner_pol = LearnedPolicy(params) if beta < 1.0 else None
    policy = MixturePolicy(oracle_pol, learner_pol, beta, rng)
    obs = _ProbeObserver(sampled, table, float(horizon), buffer, rng, spec.world.seed)
    return run_search(spec, policy, int(horizon), observer=obs)


class _TdObserver(Observer):
    """Records epsilon-greedy transitions at sampled timesteps: features of
    the executed expansion before it happens, then its one-step cost and the
    successor open list's best frozen score.

    Cost accounting: expansions cost 1 while the goal is undiscovered; the
    expansion that brings the goal into the open list ends the episode and
    is the terminal transition with target 0.
    """

    def __init__(self, sampled, learner, buffer):
        self.sampled = sampled
        self.learner = learner
        self.buffer = buffer
        self._pending = None

    def on_selected(self, state, vid):
        if state.expansions + 1 in self.sampled:
            self._pending = featurize_batch([vid], state)[0]

    def after_expand(self, state, vid):
        if self._pending is None:
            return
        terminal = state.goal_in_open
        cost = 0.0 if terminal else 1.0
        next_best = 0.0 if terminal else self.learner.min_open_score(state)
        self.buffer.add(self._pending, cost, next_best)
        self._pending = None


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class EvalReport:
    """Per-episode costs of one policy over one world set."""

    costs: np.ndarray
    outcomes: list[str]
    horizon: int

    @property
    def n_episodes(self) -> int:
        return int(self.costs.size)

    @property
    def mean_cost(self) -> float:
        return float(self.costs.mean())

    @property
    def median_cost(self) -> float:
        return float(np.median(self.costs))

    @property
    def success_rate(self) -> float:
        solved = sum(1 for o in self.outcomes if o == "solved")
        return solved / len(self.outcomes)


def evaluate_policy(policy_or_params, dataset, horizon: int) -> EvalReport:
    """Run every episode in the dataset; cost is expansions when solved,
    otherwise the horizon."""
    if isinstance(policy_or_params, MlpParams):
        policy = LearnedPolicy(policy_or_params)
    else:
        policy = policy_or_params
    costs = []
    outcomes = []
    for _world, spec in dataset.episodes():
        res = run_search(spec, policy, horizon)
        outcomes.append(res.outcome)
        costs.append(res.expansions if res.solved else horizon)
    return EvalReport(np.asarray(costs, dtype=np.float64), outcomes, horizon)


# ---------------------------------------------------------------------------
# configuration


@dataclass
class TrainConfig:
    """Declarative training settings (the CLI reads these from JSON).

    ``samples_per_episode`` left unset resolves per algorithm: 50 for the
    imitation learner, 100 for the temporal-difference learner.
    """

    algorithm: str = "sail"
    n_iterations: int = 15
    episodes_per_iteration: int = 40
    samples_per_episode: int | None = None
    beta0: float = 0.7
    beta_decay: float | None = None
    horizon_train: int = 1100
    horizon_test: int = 20000
    hidden_layer_sizes: tuple = (100, 50)
    cem_hidden_layer_sizes: tuple = (100,)
    epochs: int = 3
    batch_size: int = 64
    learning_rate: float = 0.01
    epsilon0: float = 0.9
    epsilon_decay: float = 0.7
    population_size: int = 40
    elite_frac: float = 0.2
    rollouts_per_candidate: int = 5
    sl_episodes: int = 600
    seed: int = 0

    _ALGORITHMS = ("sail", "sl", "ql", "cem")

    def resolved_samples(self) -> int:
        if self.samples_per_episode is not None:
            return int(self.samples_per_episode)
        return 100 if self.algorithm == "ql" else 50

    def validate(self) -> "TrainConfig":
        if self.algorithm not in self._ALGORITHMS:
            raise ValueError(f"algorithm must be one of {self._ALGORITHMS}")
        check_unit_interval(self.beta0, "beta0")
        if self.beta_decay is not None:
            check_unit_interval(self.beta_decay, "beta_decay")
        check_unit_interval(self.epsilon0, "epsilon0")
        check_unit_interval(self.elite_frac, "elite_frac")
        for name in (
            "n_iterations",
            "episodes_per_iteration",
            "horizon_train",
            "horizon_test",
            "epochs",
            "batch_size",
            "population_size",
            "rollouts_per_candidate",
            "sl_episodes",
        ):
            check_positive_int(getattr(self, name), name)
        if self.resolved_samples() > self.horizon_train:
            raise ValueError("samples_per_episode cannot exceed horizon_train")
        return self

    @classmethod
    def from_mapping(cls, mapping: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ValueError(f"unknown training config keys: {sorted(unknown)}")
        cfg = cls(**mapping)
        for name in ("hidden_layer_sizes", "cem_hidden_layer_sizes"):
            object.__setattr__(cfg, name, tuple(getattr(cfg, name)))
        return cfg.validate()

    def sail_kwargs(self) -> dict:
        return dict(
            n_iterations=self.n_iterations,
            episodes_per_iteration=self.episodes_per_iteration,
            samples_per_episode=self.resolved_samples(),
            beta0=self.beta0,
            beta_decay=self.beta_decay,
            horizon=self.horizon_train,
            hidden_layer_sizes=self.hidden_layer_sizes,
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            random_state=self.seed,
        )

    def sl_kwargs(self) -> dict:
        return dict(
            episodes=self.sl_episodes,
            horizon=self.horizon_train,
            hidden_layer_sizes=self.hidden_layer_sizes,
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            random_state=self.seed,
        )

    def ql_kwargs(self) -> dict:
        return dict(
            n_iterations=self.n_iterations,
            episodes_per_iteration=self.episodes_per_iteration,
            samples_per_episode=self.resolved_samples(),
            epsilon0=self.epsilon0,
            epsilon_decay=self.epsilon_decay,
            horizon=self.horizon_train,
            hidden_layer_sizes=self.hidden_layer_sizes,
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            random_state=self.seed,
        )

    def cem_kwargs(self) -> dict:
        return dict(
            n_iterations=self.n_iterations,
            population_size=self.population_size,
            elite_frac=self.elite_frac,
            rollouts_per_candidate=self.rollouts_per_candidate,
            horizon=self.horizon_train,
            hidden_layer_sizes=self.cem_hidden_layer_sizes,
            random_state=self.seed,
        )


# ---------------------------------------------------------------------------
# trainers


class SailTrainer(BaseEstimator):
    """Iterative imitation of the full-knowledge oracle with dataset
    aggregation and validation-based model selection.

    Iteration i rolls out ``episodes_per_iteration`` searches under a
    per-timestep mixture that expands the oracle's pick with probability
    ``beta0 * beta_decay**(i-1)`` and the current learned policy's pick
    otherwise. Within each episode, ``samples_per_episode`` probe timesteps
    are pre-sampled; at each, a uniformly random open vertex is expanded and
    recorded with its oracle cost-to-go (clamped to the horizon). The
    regressor refits from scratch on the aggregate after every iteration,
    and fit() keeps the iteration whose policy has the lowest mean episode
    cost on the validation worlds.
    """

    def __init__(
        self,
        n_iterations=15,
        episodes_per_iteration=40,
        samples_per_episode=50,
        beta0=0.7,
        beta_decay=None,
        horizon=1100,
        hidden_layer_sizes=(100, 50),
        epochs=3,
        batch_size=64,
        learning_rate=0.01,
        random_state=0,
    ):
        self.n_iterations = n_iterations
        self.episodes_per_iteration = episodes_per_iteration
        self.samples_per_episode = samples_per_episode
        self.beta0 = beta0
        self.beta_decay = beta_decay
        self.horizon = horizon
        self.hidden_layer_sizes = hidden_layer_sizes
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.random_state = random_state

    def fit(self, train_worlds, validation_worlds):
        check_unit_interval(self.beta0, "beta0")
        if self.samples_per_episode > self.horizon:
            raise ValueError("samples_per_episode cannot exceed horizon")
        decay = self.beta_decay if self.beta_decay is not None else self.beta0
        dims = (FEATURE_DIM, *tuple(self.hidden_layer_sizes), 1)
        params = init_params(dims, seed=_rng(self.random_state, _ROLE_INIT))
        data = DatasetBuffer()
        history = []
        best_cost = np.inf
        best_params = None
        best_iteration = -1
        self.n_oracle_calls_ = 0
        for i in range(1, int(self.n_iterations) + 1):
            beta = self.beta0 * decay ** (i - 1)
            for j in range(1, int(self.episodes_per_iteration) + 1):
                rng = _rng(self.random_state, _ROLE_EPISODE, i, j)
                _world, spec = train_worlds.sample(rng)
                table = backward_dijkstra(spec.world, spec.goal)
                self.n_oracle_calls_ += 1
                _collect_episode(
                    spec,
                    table,
                    params,
                    beta,
                    self.samples_per_episode,
                    self.horizon,
                    rng,
                    data,
                )
            reg = CostToGoRegressor(
                hidden_layer_sizes=tuple(self.hidden_layer_sizes),
                epochs=self.epochs,
                batch_size=self.batch_size,
                learning_rate=self.learning_rate,
                random_state=_train_seed(self.random_state, i),
            )
            reg.fit(data.X, data.y)
            params = reg.params_
            ev = evaluate_policy(LearnedPolicy(params), validation_worlds, self.horizon)
            history.append(
                {
                    "iteration": i,
                    "beta": beta,
                    "n_datapoints": len(data),
                    "train_loss": reg.loss_curve_[-1],
                    "val_mean_cost": ev.mean_cost,
                    "val_success_rate": ev.success_rate,
                }
            )
            if ev.mean_cost < best_cost:
                best_cost = ev.mean_cost
                best_params = params
                best_iteration = i
        self.best_params_ = best_params
        self.best_iteration_ = best_iteration
        self.best_val_cost_ = best_cost
        self.history_ = history
        self.dataset_ = data
        return self

    def make_policy(self) -> LearnedPolicy:
        return LearnedPolicy(self.best_params_)


class SupervisedTrainer(BaseEstimator):
    """Behavior-cloning baseline.

    One collection pass whose rollouts use the pure-oracle mixture (beta
    pinned to 1) with a random probe expansion executed at every timestep,
    then a single regression fit. By construction this collects the exact
    dataset of one SailTrainer iteration with beta0 = 1 and
    samples_per_episode = horizon.
    """

    def __init__(
        self,
        episodes=600,
        horizon=1100,
        hidden_layer_sizes=(100, 50),
        epochs=3,
        batch_size=64,
        learning_rate=0.01,
        random_state=0,
    ):
        self.episodes = episodes
        self.horizon = horizon
        self.hidden_layer_sizes = hidden_layer_sizes
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.random_state = random_state

    def fit(self, train_worlds, validation_worlds=None):
        data = DatasetBuffer()
        self.n_oracle_calls_ = 0
        for j in range(1, int(self.episodes) + 1):
            rng = _rng(self.random_state, _ROLE_EPISODE, 1, j)
            _world, spec = train_worlds.sample(rng)
            table = backward_dijkstra(spec.world, spec.goal)
            self.n_oracle_calls_ += 1
            _collect_episode(
                spec, table, None, 1.0, self.horizon, self.horizon, rng, data
            )
        reg = CostToGoRegressor(
            hidden_layer_sizes=tuple(self.hidden_layer_sizes),
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            random_state=_train_seed(self.random_state, 1),
        )
        reg.fit(data.X, data.y)
        self.best_params_ = reg.params_
        self.dataset_ = data
        row = {
            "iteration": 1,
            "beta": 1.0,
            "n_datapoints": len(data),
            "train_loss": reg.loss_curve_[-1],
        }
        if validation_worlds is not None:
            ev = evaluate_policy(
                LearnedPolicy(self.best_params_), validation_worlds, self.horizon
            )
            row["val_mean_cost"] = ev.mean_cost
            row["val_success_rate"] = ev.success_rate
            self.best_val_cost_ = ev.mean_cost
        self.history_ = [row]
        return self

    def make_policy(self) -> LearnedPolicy:
        return LearnedPolicy(self.best_params_)


class QTrainer(BaseEstimator):
    """Episodic temporal-difference baseline.

    Rollouts are epsilon-greedy over the current network's frozen scores
    (a uniformly random open vertex with probability epsilon_i, decayed
    geometrically per iteration). At the sampled timesteps the executed
    expansion is recorded with its one-step cost and the successor open
    list's best frozen score; the regressor refits on all transitions
    recorded so far (the aggregate acts as a replay buffer), regressing
    toward cost + successor best, with terminal targets equal to the cost.
    """

    def __init__(
        self,
        n_iterations=15,
        episodes_per_iteration=40,
        samples_per_episode=100,
        epsilon0=0.9,
        epsilon_decay=0.7,
        horizon=1100,
        hidden_layer_sizes=(100, 50),
        epochs=3,
        batch_size=64,
        learning_rate=0.01,
        random_state=0,
    ):
        self.n_iterations = n_iterations
        self.episodes_per_iteration = episodes_per_iteration
        self.samples_per_episode = samples_per_episode
        self.epsilon0 = epsilon0
        self.epsilon_decay = epsilon_decay
        self.horizon = horizon
        self.hidden_layer_sizes = hidden_layer_sizes
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.random_state = random_state

    def epsilon_at(self, iteration: int) -> float:
        return self.epsilon0 * self.epsilon_decay ** (iteration - 1)

    def fit(self, train_worlds, validation_worlds):
        if self.samples_per_episode > self.horizon:
            raise ValueError("samples_per_episode cannot exceed horizon")
        dims = (FEATURE_DIM, *tuple(self.hidden_layer_sizes), 1)
        params = init_params(dims, seed=_rng(self.random_state, _ROLE_INIT))
        buf = QBuffer()
        history = []
        best_cost = np.inf
        best_params = None
        best_iteration = -1
        k = min(int(self.samples_per_episode), int(self.horizon))
        for i in range(1, int(self.n_iterations) + 1):
            eps = self.epsilon_at(i)
            for j in range(1, int(self.episodes_per_iteration) + 1):
                rng = _rng(self.random_state, _ROLE_EPISODE, i, j)
                _world, spec = train_worlds.sample(rng)
                ts = rng.choice(int(self.horizon), size=k, replace=False) + 1
                learner = LearnedPolicy(params)
                policy = EpsilonGreedyPolicy(learner, eps, rng)
                obs = _TdObserver(set(int(t) for t in ts), learner, buf)
                run_search(spec, policy, int(self.horizon), observer=obs)
            reg = CostToGoRegressor(
                hidden_layer_sizes=tuple(self.hidden_layer_sizes),
                epochs=self.epochs,
                batch_size=self.batch_size,
                learning_rate=self.learning_rate,
                random_state=_train_seed(self.random_state, i),
            )
            reg.fit(buf.X, buf.targets)
            params = reg.params_
            ev = evaluate_policy(LearnedPolicy(params), validation_worlds, self.horizon)
            history.append(
                {
                    "iteration": i,
                    "epsilon": eps,
                    "n_datapoints": len(buf),
                    "train_loss": reg.loss_curve_[-1],
                    "val_mean_cost": ev.mean_cost,
                    "val_success_rate": ev.success_rate,
                }
            )
            if ev.mean_cost < best_cost:
                best_cost = ev.mean_cost
                best_params = params
                best_iteration = i
        self.best_params_ = best_params
        self.best_iteration_ = best_iteration
        self.best_val_cost_ = best_cost
        self.history_ = history
        self.dataset_ = buf
        return self

    def make_policy(self) -> LearnedPolicy:
        return LearnedPolicy(self.best_params_)


def cem_optimize(
    fitness,
    dim: int,
    *,
    generations: int,
    population_size: int,
    elite_frac: float,
    rng,
    init_mean=None,
    init_std: float = 1.0,
    std_floor: float = 1e-3,
) -> list[dict]:
    """Gaussian cross-entropy iterations over vectors of length ``dim``.

    ``fitness(vec, generation)`` returns a scalar, lower is better. Each
    generation refits the (diagonal) Gaussian on the best ``elite_frac`` of
    the population; degenerate axes are floored at ``std_floor``. Returns
    one record per generation with the refit mean/std and the generation's
    best sample.
    """
    rng = as_generator(rng)
    mean = np.zeros(dim) if init_mean is None else np.asarray(init_mean, dtype=np.float64)
    std = np.full(dim, float(init_std))
    n_elite = max(1, int(round(population_size * elite_frac)))
    records = []
    for g in range(1, int(generations) + 1):
        samples = mean + std * rng.standard_normal((population_size, dim))
        fits = np.array([float(fitness(samples[c], g)) for c in range(population_size)])
        order = np.argsort(fits, kind="stable")
        elite = samples[order[:n_elite]]
        mean = elite.mean(axis=0)
        std = np.maximum(elite.std(axis=0), std_floor)
        records.append(
            {
                "generation": g,
                "mean": mean.copy(),
                "std": std.copy(),
                "best_sample": samples[order[0]].copy(),
                "best_fitness": float(fits[order[0]]),
                "mean_fitness": float(fits.mean()),
                "n_elite": n_elite,
            }
        )
    return records


class CemTrainer(BaseEstimator):
    """Derivative-free baseline: cross-entropy search over the flattened
    parameters of a one-hidden-layer network.

    Every generation draws ``population_size`` candidates, rolls each out on
    the same ``rollouts_per_candidate`` episodes (total expansions is the
    fitness, failures cost the horizon), and refits the Gaussian on the top
    ``elite_frac``. fit() returns the per-generation best candidate that
    scores lowest on the validation worlds.
    """

    def __init__(
        self,
        n_iterations=15,
        population_size=40,
        elite_frac=0.2,
        rollouts_per_candidate=5,
        horizon=1100,
        hidden_layer_sizes=(100,),
        init_std=1.0,
        std_floor=1e-3,
        random_state=0,
    ):
        self.n_iterations = n_iterations
        self.population_size = population_size
        self.elite_frac = elite_frac
        self.rollouts_per_candidate = rollouts_per_candidate
        self.horizon = horizon
        self.hidden_layer_sizes = hidden_layer_sizes
        self.init_std = init_std
        self.std_floor = std_floor
        self.random_state = random_state

    def fit(self, train_worlds, validation_worlds):
        dims = (FEATURE_DIM, *tuple(self.hidden_layer_sizes), 1)
        dim = num_params(dims)
        rng = _rng(self.random_state, _ROLE_CEM)
        episode_cache: dict[int, list] = {}

        def fitness(vec, generation):
            if generation not in episode_cache:
                ep_rng = _rng(self.random_state, _ROLE_EPISODE, generation)
                episode_cache[generation] = [
                    train_worlds.sample(ep_rng)
                    for _ in range(int(self.rollouts_per_candidate))
                ]
            policy = LearnedPolicy(unflatten(vec, dims))
            total = 0
            for _world, spec in episode_cache[generation]:
                res = run_search(spec, policy, int(self.horizon))
                total += res.expansions if res.solved else int(self.horizon)
            return float(total)

        records = cem_optimize(
            fitness,
            dim,
            generations=self.n_iterations,
            population_size=self.population_size,
            elite_frac=self.elite_frac,
            rng=rng,
            init_std=self.init_std,
            std_floor=self.std_floor,
        )
        history = []
        best_cost = np.inf
        best_params = None
        best_iteration = -1
        for rec in records:
            params = unflatten(rec["best_sample"], dims)
            ev = evaluate_policy(LearnedPolicy(params), validation_worlds, self.horizon)
            history.append(
                {
                    "iteration": rec["generation"],
                    "best_fitness": rec["best_fitness"],
                    "mean_fitness": rec["mean_fitness"],
                    "val_mean_cost": ev.mean_cost,
                    "val_success_rate": ev.success_rate,
                }
            )
            if ev.mean_cost < best_cost:
                best_cost = ev.mean_cost
                best_params = params
                best_iteration = rec["generation"]
        self.best_params_ = best_params
        self.best_iteration_ = best_iteration
        self.best_val_cost_ = best_cost
        self.history_ = history
        self.generations_ = records
        return self

    def make_policy(self) -> LearnedPolicy:
        return LearnedPolicy(self.best_params_)


# ---------------------------------------------------------------------------
# functional wrappers over the estimators


def sail_train(config: TrainConfig, train_worlds, validation_worlds):
    """(best params, history) for the imitation learner."""
    tr = SailTrainer(**config.sail_kwargs()).fit(train_worlds, validation_worlds)
    return tr.best_params_, tr.history_


def sl_train(config: TrainConfig, train_worlds, validation_worlds=None):
    """(params, history) for the behavior-cloning baseline."""
    tr = SupervisedTrainer(**config.sl_kwargs()).fit(train_worlds, validation_worlds)
    return tr.best_params_, tr.history_


def ql_train(config: TrainConfig, train_worlds, validation_worlds):
    """(best params, history) for the temporal-difference baseline."""
    tr = QTrainer(**config.ql_kwargs()).fit(train_worlds, validation_worlds)
    return tr.best_params_, tr.history_


def cem_train(config: TrainConfig, train_worlds, validation_worlds):
    """(best params, history) for the cross-entropy baseline."""
    tr = CemTrainer(**config.cem_kwargs()).fit(train_worlds, validation_worlds)
    return tr.best_params_, tr.history_
