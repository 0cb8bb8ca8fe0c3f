"""Training loop, named model variants, ablation and variance drivers."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import data
from .ansatz import AnsatzSpec
from .embedding import EmbeddingScheme, arcsin, hybrid, round_robin, sinusoidal
from .errors import ConfigurationError, DivergenceError, UsageError
from .gradients import loss_and_gradient
from .measurement import MeasurementPlan
from .model import ModelSpec, ParamSet, init_params, predict
from .optimizer import AdamState, adam_step

log = logging.getLogger(__name__)

# name -> (embedding, redundant, poly_degree, data mode)
# degree 1 is a trainable affine readout w0 + w1*z, i.e. no post-measurement function
VARIANTS = {
    "qnn-a": ("sin", True, 2, data.RANDOM),
    "qnn-a2": ("hybrid", True, 2, data.RANDOM),
    "qnn-exc1": ("arcsin", True, 2, data.RANDOM),
    "qnn-exc2": ("sin", False, 2, data.RANDOM),
    "qnn-exc3": ("sin", True, 1, data.RANDOM),
    "qnn-exc4": ("sin", True, 2, data.MESHGRID),
    "qnn-exc5": ("sin", False, 1, data.MESHGRID),
    "qcl": ("arcsin", False, 1, data.MESHGRID),
}
REFERENCE_VARIANT = "qnn-a"

DEFAULT_QUBITS = {"f1v1": 2, "f1v2": 2, "f1v3": 2, "f1v0": 2, "f2": 3, "f3": 4}
# the sinusoidal targets carry pi inside their arguments; f3 does not
DEFAULT_INPUT_SCALE = {"f1v1": np.pi, "f1v2": np.pi, "f1v3": np.pi, "f1v0": np.pi, "f2": np.pi, "f3": 1.0}


def variant_key(name: str) -> str:
    key = name.strip().lower().replace("_", "-")
    if key not in VARIANTS:
        raise UsageError(f"unknown variant {name!r}; choose from {sorted(VARIANTS)}")
    return key


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 2000
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    layers: int = 4
    qubits: int | None = None
    entangler: str = "chain"
    input_scale: float | None = None
    poly_degree: int | None = None
    redundant: bool | None = None
    embedding: tuple[str, ...] | None = None
    variables: tuple[int, ...] | None = None
    data_mode: str | None = None
    n_train: int | None = None
    mesh_points: int | None = None
    batch_size: int = 0
    shots: int = 0
    loss: str = "mse"

    def __post_init__(self):
        if self.epochs < 0:
            raise ConfigurationError("epochs must be >= 0")
        if not self.lr > 0:
            raise ConfigurationError("lr must be positive")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ConfigurationError("beta1 and beta2 must lie in [0, 1)")
        if self.layers < 0:
            raise ConfigurationError("layers must be >= 0")
        if self.batch_size < 0 or self.shots < 0:
            raise ConfigurationError("batch_size and shots must be >= 0")
        if self.data_mode not in (None, data.MESHGRID, data.RANDOM):
            raise ConfigurationError(f"data_mode must be {data.MESHGRID!r} or {data.RANDOM!r}")
        for name in ("embedding", "variables"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(value))
        if self.variables is not None and self.embedding is None:
            raise ConfigurationError("variables needs an explicit embedding list")
        if self.loss != "mse":
            raise ConfigurationError("only loss = 'mse' is supported")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, values: dict) -> "TrainConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys {sorted(unknown)}")
        return cls(**values)


def config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=float)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def make_variant(name: str, function: str | data.TargetFunction, config: TrainConfig | None = None):
    """Model architecture and training-data mode of a named variant."""
    config = config or TrainConfig()
    key = variant_key(name)
    target = data.get_target(function)
    kind, redundant, degree, mode = VARIANTS[key]
    n = len(config.embedding) if config.embedding else config.qubits or DEFAULT_QUBITS[target.name]
    if config.qubits and config.qubits != n:
        raise ConfigurationError(f"qubits={config.qubits} but the embedding lists {n} qubits")
    if n < target.dim:
        raise ConfigurationError(f"{target.name} needs at least {target.dim} qubits")
    scale = config.input_scale if config.input_scale is not None else DEFAULT_INPUT_SCALE[target.name]
    redundant = redundant if config.redundant is None else config.redundant
    if config.embedding:
        variables = config.variables or round_robin(n, target.dim)
        embedding = EmbeddingScheme(config.embedding, variables, scale)
        if embedding.n_variables != target.dim:
            raise ConfigurationError(f"embedding reads {embedding.n_variables} variables, {target.name} has {target.dim}")
    elif kind == "sin":
        embedding = sinusoidal(n, target.dim, scale)
    elif kind == "arcsin":
        embedding = arcsin(n, target.dim)
    else:
        embedding = hybrid(n, target.dim, scale)
    model = ModelSpec(
        embedding=embedding,
        ansatz=AnsatzSpec(n, config.layers, config.entangler),
        plan=MeasurementPlan.all_qubits(n, redundant),
        poly_degree=config.poly_degree or degree,
        variant_name=key,
    )
    return model, config.data_mode or mode


@dataclass
class RunReport:
    variant: str
    function: str
    seed: int
    epochs: int
    lr: float
    loss_curve: list[float]
    initial_train_mae: float
    train_mae: float
    test_mae: float
    train_mse: float
    test_mse: float
    wall_seconds: float
    config_hash: str
    data_mode: str
    diverged: bool = False
    message: str = ""
    prng: str = data.PRNG_NAME
    model: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def to_dict(self, include_timing: bool = True) -> dict:
        out = dataclasses.asdict(self)
        if not include_timing:
            out.pop("wall_seconds")
        return out

    def param_set(self) -> ParamSet:
        return ParamSet(**self.params)


def _errors(model, params, dataset):
    residual = predict(model, params, dataset.inputs) - dataset.targets
    return float(np.mean(np.abs(residual))), float(np.mean(residual**2))


def train(model: ModelSpec, train_set: data.Dataset, test_set: data.Dataset, config: TrainConfig,
          params: ParamSet | None = None, seed: int | None = None, chash: str = "") -> RunReport:
    """Full-batch Adam on the mean squared error (mini-batches if ``batch_size`` is set).

    With ``config.shots`` the optimiser sees finite-shot estimates; the
    reported errors are always computed from exact expectations.
    """
    if train_set.dim != model.n_inputs or test_set.dim != model.n_inputs:
        raise ConfigurationError(f"model takes {model.n_inputs} inputs, data has {train_set.dim}")
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng([seed, 1])
    params = params or init_params(model, rng)
    params.check(model)

    start = time.perf_counter()
    state = AdamState.zeros(model.n_trainable, lr=config.lr, beta1=config.beta1,
                            beta2=config.beta2, eps=config.eps)
    vector = params.trainable_vector(model)
    initial_mae, _ = _errors(model, params, train_set)
    x, y = train_set.inputs, train_set.targets
    curve: list[float] = []
    diverged, message = False, ""
    try:
        for epoch in range(config.epochs):
            if config.batch_size and config.batch_size < len(y):
                order = rng.permutation(len(y))
                batches = [order[i:i + config.batch_size] for i in range(0, len(y), config.batch_size)]
            else:
                batches = [slice(None)]
            losses = []
            for idx in batches:
                loss, grad = loss_and_gradient(model, params, x[idx], y[idx], config.loss,
                                                shots=config.shots, rng=rng)
                if not np.isfinite(loss):
                    raise DivergenceError(f"loss became {loss} at epoch {epoch}")
                state, vector = adam_step(state, vector, grad.trainable_vector(model))
                params = params.with_trainable(model, vector)
                losses.append(loss)
            curve.append(float(np.mean(losses)))
    except DivergenceError as exc:
        diverged, message = True, str(exc)
        log.warning("run %s/%s seed %d diverged: %s", model.variant_name, train_set.function, seed, exc)

    if diverged:
        train_mae = test_mae = train_mse = test_mse = float("nan")
    else:
        train_mae, train_mse = _errors(model, params, train_set)
        test_mae, test_mse = _errors(model, params, test_set)
    return RunReport(
        variant=model.variant_name, function=train_set.function, seed=seed, epochs=config.epochs,
        lr=config.lr, loss_curve=curve, initial_train_mae=initial_mae, train_mae=train_mae,
        test_mae=test_mae, train_mse=train_mse, test_mse=test_mse,
        wall_seconds=time.perf_counter() - start, config_hash=chash, data_mode=train_set.mode,
        diverged=diverged, message=message, model=model.describe(), params=params.to_dict(),
    )


def prepare(variant: str, function: str, config: TrainConfig, seed: int | None = None):
    """Model, training set, test set and config hash for one run."""
    seed = config.seed if seed is None else seed
    model, mode = make_variant(variant, function, config)
    target = data.get_target(function)
    if mode == data.MESHGRID:
        train_set = data.sample_meshgrid(target, config.mesh_points or data.TRAIN_GRID[target.dim])
    else:
        train_set = data.sample_random(target, config.n_train or data.TRAIN_SIZE[target.dim], seed)
    payload = {"variant": model.variant_name, "function": target.name,
               **dataclasses.replace(config, seed=seed).to_dict()}
    return model, train_set, data.evaluation_set(target), config_hash(payload)


def run(variant: str, function: str, config: TrainConfig | None = None, seed: int | None = None) -> RunReport:
    config = config or TrainConfig()
    model, train_set, test_set, chash = prepare(variant, function, config, seed)
    return train(model, train_set, test_set, config, seed=seed, chash=chash)


def worker_count() -> int:
    env = os.environ.get("QNN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(f"QNN_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _run_job(job):
    return run(*job)


def run_many(jobs: list[tuple], workers: int | None = None) -> list[RunReport]:
    """Run ``(variant, function, config, seed)`` jobs, results in job order."""
    workers = min(workers or worker_count(), len(jobs))
    if workers <= 1:
        return [_run_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs))


TABLE_COLUMNS = ("variant", "function", "seed", "train_mae", "test_mae", "ratio_vs_qnn_a")


def ablate(function: str, variants: list[str], seeds: list[int], config: TrainConfig | None = None,
           workers: int | None = None) -> list[RunReport]:
    if not variants or not seeds:
        raise UsageError("ablate needs at least one variant and one seed")
    config = config or TrainConfig()
    keys = [variant_key(v) for v in variants]
    jobs = [(v, function, config, s) for v in keys for s in seeds]
    return run_many(jobs, workers)


def ablation_table(reports: list[RunReport]) -> list[dict]:
    """Rows of the ablation table; the ratio compares against QNN-A at the same seed."""
    reference = {(r.function, r.seed): r.test_mae for r in reports if r.variant == REFERENCE_VARIANT}
    rows = []
    for r in reports:
        ref = reference.get((r.function, r.seed))
        ratio = r.test_mae / ref if ref else float("nan")
        rows.append({"variant": r.variant, "function": r.function, "seed": r.seed,
                     "train_mae": r.train_mae, "test_mae": r.test_mae, "ratio_vs_qnn_a": ratio})
    return rows


def median_by_variant(reports: list[RunReport], attr: str = "test_mae") -> dict[str, float]:
    groups: dict[str, list[float]] = {}
    for r in reports:
        groups.setdefault(r.variant, []).append(getattr(r, attr))
    return {k: float(np.median(v)) for k, v in groups.items()}


@dataclass
class VarianceSummary:
    variant: str
    function: str
    seeds: list[int]
    test_maes: list[float]
    mean: float
    variance: float
    bin_edges: list[float]
    counts: list[int]
    reports: list[RunReport] = field(default_factory=list, repr=False)


def variance_study(variant: str, function: str, n_runs: int, config: TrainConfig | None = None,
                   fixed_seed: bool = False, bins: int = 20, workers: int | None = None) -> VarianceSummary:
    """Repeat a run with seeds ``config.seed + i`` (or the same seed if ``fixed_seed``).

    Each seed draws fresh random training data and a fresh initialisation.
    The variance is the unbiased sample variance of the final test MAE.
    """
    if n_runs < 2:
        raise UsageError("variance study needs n_runs >= 2")
    config = config or TrainConfig()
    key = variant_key(variant)
    seeds = [config.seed if fixed_seed else config.seed + i for i in range(n_runs)]
    reports = run_many([(key, function, config, s) for s in seeds], workers)
    maes = np.array([r.test_mae for r in reports])
    upper = float(maes.max()) if np.isfinite(maes).all() and maes.max() > 0 else 1.0
    counts, edges = np.histogram(maes, bins=bins, range=(0.0, upper))
    return VarianceSummary(key, data.get_target(function).name, seeds, maes.tolist(),
                           float(maes.mean()), float(maes.var(ddof=1)), edges.tolist(),
                           counts.tolist(), reports)
