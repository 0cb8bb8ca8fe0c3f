"""Target functions and training/test set generation.

All inputs live in the box ``[-0.95, 0.95]^d``. Random sets draw from numpy's
PCG64 generator seeded with the dataset seed.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ConfigurationError, UsageError

LOW, HIGH = -0.95, 0.95
PRNG_NAME = "numpy.random.PCG64"
MESHGRID, RANDOM = "meshgrid", "random"

pi = np.pi


def _f1v1(x):
    return np.sin(pi * x[:, 0])


def _f1v2(x):
    return np.sin(2 * pi * x[:, 0])


def _f1v3(x):
    return 0.2 * np.sin(2 * pi * x[:, 0]) + 0.8 * np.cos(2 * pi * x[:, 0]) ** 2


def _f1v0(x):
    x0 = x[:, 0]
    return np.sin(2 * pi * x0) + 0.5 * np.sqrt(1 - x0**2) + x0


def _f2(x):
    x1, x2 = x[:, 0], x[:, 1]
    return 0.5 * np.sin(pi * x1) * np.sin(pi * x2) + 0.8 * np.cos(pi * x1) ** 2 + 0.3 * np.sin(pi * x2)


def _f3(x):
    x1, x2, x3 = x[:, 0], x[:, 1], x[:, 2]
    return 0.5 * np.sin(x1) * np.sin(x2) - 0.6 * np.cos(x2) * np.sin(x3) + np.cos(x3) ** 2


@dataclass(frozen=True)
class TargetFunction:
    name: str
    dim: int
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != self.dim:
            raise UsageError(f"{self.name} takes {self.dim} variables, got {x.shape[1]}")
        return self.fn(x)


TARGETS: dict[str, TargetFunction] = {
    t.name: t for t in (
        TargetFunction("f1v1", 1, _f1v1),
        TargetFunction("f1v2", 1, _f1v2),
        TargetFunction("f1v3", 1, _f1v3),
        TargetFunction("f1v0", 1, _f1v0),
        TargetFunction("f2", 2, _f2),
        TargetFunction("f3", 3, _f3),
    )
}

# training-set size per input dimension; meshgrid sets use the matching per-axis count
TRAIN_SIZE = {1: 100, 2: 400, 3: 1000}
TRAIN_GRID = {1: 100, 2: 20, 3: 10}
TEST_GRID = {1: 200, 2: 30, 3: 12}


def get_target(f: str | TargetFunction) -> TargetFunction:
    if isinstance(f, TargetFunction):
        return f
    try:
        return TARGETS[f]
    except KeyError:
        raise ConfigurationError(f"unknown target function {f!r}; choose from {sorted(TARGETS)}") from None


def eval_target(f: str | TargetFunction, x) -> float:
    target = get_target(f)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.shape != (target.dim,):
        raise UsageError(f"{target.name} takes a length-{target.dim} input, got shape {x.shape}")
    return float(target(x[None, :])[0])


@dataclass(frozen=True)
class Dataset:
    function: str
    inputs: np.ndarray
    targets: np.ndarray
    mode: str
    seed: int | None = None

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=np.float64)
        targets = np.array(self.targets, dtype=np.float64)
        inputs.setflags(write=False)
        targets.setflags(write=False)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    def __len__(self) -> int:
        return self.targets.size

    @property
    def dim(self) -> int:
        return self.inputs.shape[1]

    def to_csv(self, path: str | Path) -> None:
        write_csv(path, self.inputs, {"y": self.targets})


def write_csv(path, inputs: np.ndarray, columns: dict[str, np.ndarray], comment: str | None = None) -> None:
    """Rows of ``x0..x{d-1}`` followed by ``columns``, 17 significant digits."""
    inputs = np.atleast_2d(inputs)
    header = [f"x{j}" for j in range(inputs.shape[1])] + list(columns)
    values = np.column_stack([inputs] + [np.asarray(c, dtype=np.float64) for c in columns.values()])
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in values:
            writer.writerow([f"{v:.17g}" for v in row])


def grid_points(dim: int, points_per_dim: int) -> np.ndarray:
    axis = np.linspace(LOW, HIGH, points_per_dim)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def sample_meshgrid(f: str | TargetFunction, points_per_dim: int) -> Dataset:
    target = get_target(f)
    if points_per_dim < 2:
        raise UsageError("meshgrid needs at least 2 points per dimension")
    x = grid_points(target.dim, points_per_dim)
    return Dataset(target.name, x, target(x), MESHGRID)


def sample_random(f: str | TargetFunction, n: int, seed: int) -> Dataset:
    target = get_target(f)
    if n < 1:
        raise UsageError("random dataset needs n >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.uniform(LOW, HIGH, size=(n, target.dim))
    return Dataset(target.name, x, target(x), RANDOM, seed)


def training_set(f: str | TargetFunction, mode: str, seed: int) -> Dataset:
    target = get_target(f)
    if mode == MESHGRID:
        return sample_meshgrid(target, TRAIN_GRID[target.dim])
    if mode == RANDOM:
        return sample_random(target, TRAIN_SIZE[target.dim], seed)
    raise ConfigurationError(f"data mode must be {MESHGRID!r} or {RANDOM!r}, got {mode!r}")


def evaluation_set(f: str | TargetFunction) -> Dataset:
    target = get_target(f)
    return sample_meshgrid(target, TEST_GRID[target.dim])
