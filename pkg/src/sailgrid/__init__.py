"""Learned vertex-selection heuristics for best-first search on 2D
occupancy grids, trained by imitating a full-knowledge shortest-path
oracle, plus classical baselines and a benchmark harness."""

from .worlds import (
    Vertex,
    Edge,
    World,
    EpisodeSpec,
    NEIGHBOR_OFFSETS,
    successors,
    evaluate_edge,
    write_pgm,
    read_pgm,
)
from .generators import (
    DISTRIBUTIONS,
    UnknownDistributionError,
    WorldGenerationError,
    default_params,
    generate_world,
)
from .search import (
    SearchState,
    SearchResult,
    Trace,
    Observer,
    PolicyContractError,
    expand,
    run_search,
    SOLVED,
    HORIZON_EXHAUSTED,
    FRONTIER_EXHAUSTED,
)
from .policies import (
    euclidean,
    manhattan,
    chebyshev,
    SelectPolicy,
    GreedyPolicy,
    AStarPolicy,
    RoundRobinPolicy,
    NearestInvalidDistance,
    LearnedPolicy,
    RandomPolicy,
    EpsilonGreedyPolicy,
    make_greedy_policy,
    make_astar_policy,
    make_round_robin_policy,
    make_learned_policy,
    make_mha_policy,
)
from .oracle import (
    OracleTable,
    OraclePolicy,
    backward_dijkstra,
    lookup_label,
    make_oracle_policy,
)
from .features import FEATURE_DIM, FEATURE_NAMES, featurize, featurize_batch
from .model import (
    MlpParams,
    RmsPropState,
    CostToGoRegressor,
    init_params,
    forward,
    backward,
    rmsprop_step,
    flatten,
    unflatten,
    num_params,
    save_params,
    load_params,
    train_regressor,
)
from .trainers import (
    TrainConfig,
    DatasetBuffer,
    QBuffer,
    MixturePolicy,
    mixture_select,
    EvalReport,
    evaluate_policy,
    SailTrainer,
    SupervisedTrainer,
    QTrainer,
    CemTrainer,
    cem_optimize,
    sail_train,
    sl_train,
    ql_train,
    cem_train,
)
from .datasets import SPLITS, WorldDataset, make_dataset, load_manifest
from .render import COLORS, render_frame, render_snapshot, write_ppm
from .bench import (
    ALGORITHMS,
    BenchReport,
    BenchRow,
    ConfigError,
    full_scale_defaults,
    make_policy,
    normalized_cost,
    run_benchmark,
    write_report,
)

__version__ = "0.1.0"
