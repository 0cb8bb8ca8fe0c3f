"""Numerical checks of the basis-function structure of QNN outputs.

These do not train anything. They draw random circuits, evaluate the readout
on a grid and ask whether it lies in the span of a named dictionary of
functions (least squares), how large the spanned function space is (matrix
rank), and how well the one-qubit arcsin model can do at best.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import data
from .ansatz import AnsatzSpec
from .embedding import EmbeddingScheme, arcsin, hybrid, sinusoidal
from .errors import ConfigurationError
from .measurement import MeasurementPlan, post_measurement
from .model import ModelSpec, qubit_expectations
from .embedding import embed_batch

SPAN_TOL = 1e-9
RANK_RTOL = 1e-8
FLOOR_MIN = 0.05

BasisFn = Callable[[np.ndarray], np.ndarray]


def _one(x):
    return np.ones(x.shape[0])


def _c(j, fn):
    return lambda x: fn(x[:, j])


def _sqrt1m(v):
    return np.sqrt(1 - v**2)


BF_S: dict[str, BasisFn] = {"1": _one, "sin x": _c(0, np.sin), "cos x": _c(0, np.cos)}
BF_A: dict[str, BasisFn] = {"1": _one, "x": _c(0, lambda v: v), "sqrt(1-x^2)": _c(0, _sqrt1m)}
BF_P: dict[str, BasisFn] = {
    "1": _one, "cos x": _c(0, np.cos), "sin x": _c(0, np.sin),
    "sin x cos x": _c(0, lambda v: np.sin(v) * np.cos(v)),
    "cos^2 x": _c(0, lambda v: np.cos(v) ** 2), "sin^2 x": _c(0, lambda v: np.sin(v) ** 2),
}
AFFINE: dict[str, BasisFn] = {"1": _one, "x": _c(0, lambda v: v)}


def product_dictionary(*factors: dict[str, BasisFn], variables: tuple[int, ...] | None = None) -> dict[str, BasisFn]:
    """All products taking one function from each factor.

    Factor ``k`` reads input column ``variables[k]`` (default ``k``).
    """
    variables = variables or tuple(range(len(factors)))
    out: dict[str, BasisFn] = {"": _one}
    for factor, var in zip(factors, variables):
        new = {}
        for name_a, fa in out.items():
            for name_b, fb in factor.items():
                name = " ".join(p for p in (name_a, _rename(name_b, var)) if p and p != "1") or "1"
                new[name] = (lambda fa, fb, var: lambda x: fa(x) * fb(x[:, [var]]))(fa, fb, var)
        out = new
    return out


def _rename(name: str, var: int) -> str:
    return name if name == "1" else name.replace("x", f"x{var + 1}")


BF_2 = product_dictionary(BF_S, BF_S)
BF_H = product_dictionary(BF_S, BF_A, variables=(0, 0))


@dataclass(frozen=True)
class SpanTestResult:
    dictionary: str
    n_trials: int
    max_residual: float
    rank_deficient: bool
    threshold: float = SPAN_TOL

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold


def feature_matrix(dictionary: dict[str, BasisFn], x: np.ndarray) -> np.ndarray:
    return np.column_stack([fn(x) for fn in dictionary.values()])


def lstsq_residual(features: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Max-abs least-squares residual of every column of ``values``."""
    coef, *_ = np.linalg.lstsq(features, values, rcond=None)
    return np.max(np.abs(features @ coef - values), axis=0)


def grid(dim: int, points_per_dim: int = 201, low: float = data.LOW, high: float = data.HIGH) -> np.ndarray:
    axis = np.linspace(low, high, points_per_dim)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def random_outputs(embedding: EmbeddingScheme, x: np.ndarray, n_trials: int, rng: np.random.Generator,
                   n_layers: int = 4, qubit: int = 0, poly_degree: int = 0) -> np.ndarray:
    """``(N, n_trials)`` readouts of random circuits on inputs ``x``.

    With ``poly_degree > 0`` each readout is passed through a polynomial with
    random coefficients.
    """
    n = embedding.n_qubits
    model = ModelSpec(embedding, AnsatzSpec(n, n_layers), MeasurementPlan((qubit,), redundant=False), 1)
    thetas = rng.uniform(0, 2 * np.pi, size=(model.n_theta, n_trials))
    z = qubit_expectations(model, thetas, embed_batch(x, embedding))[..., qubit].T
    if poly_degree:
        w = rng.normal(size=(poly_degree + 1, n_trials))
        z = np.column_stack([post_measurement(z[:, k], w[:, k]) for k in range(n_trials)])
    return z


def span_test(embedding: EmbeddingScheme, dictionary: dict[str, BasisFn], n_trials: int = 50,
              x: np.ndarray | None = None, seed: int = 0, name: str = "", n_layers: int = 4,
              qubit: int = 0, poly_degree: int = 0, threshold: float = SPAN_TOL) -> SpanTestResult:
    """Fit random model outputs by the dictionary; report the worst residual."""
    if x is None:
        x = grid(embedding.n_variables, 201 if embedding.n_variables == 1 else 41)
    features = feature_matrix(dictionary, x)
    rank = np.linalg.matrix_rank(features)
    outputs = random_outputs(embedding, x, n_trials, np.random.default_rng(seed), n_layers, qubit, poly_degree)
    residuals = lstsq_residual(features, outputs)
    return SpanTestResult(name or f"{len(dictionary)}-function dictionary", n_trials,
                          float(residuals.max()), bool(rank < features.shape[1]), threshold)


def span_residuals(embedding: EmbeddingScheme, dictionary: dict[str, BasisFn], n_trials: int = 50,
                   x: np.ndarray | None = None, seed: int = 0, **kwargs) -> np.ndarray:
    """Per-trial residuals, for checks that need the distribution rather than the maximum."""
    if x is None:
        x = grid(embedding.n_variables, 201 if embedding.n_variables == 1 else 41)
    outputs = random_outputs(embedding, x, n_trials, np.random.default_rng(seed), **kwargs)
    return lstsq_residual(feature_matrix(dictionary, x), outputs)


def rank_grid(n_qubits: int) -> np.ndarray:
    """Smallest per-axis grid (>= 3 points) with at least 4 * 3**n samples."""
    per_axis = 3
    while per_axis**n_qubits < 4 * 3**n_qubits:
        per_axis += 1
    return grid(n_qubits, per_axis)


def basis_rank(n_qubits: int, n_random_params: int | None = None, x: np.ndarray | None = None,
               seed: int = 0, n_layers: int = 4, rtol: float = RANK_RTOL) -> int:
    """Dimension of the function space spanned by <Z_0> over random circuits.

    Every qubit embeds its own variable. The constant function is added to the
    sampled rows before the rank is taken.
    """
    if n_qubits < 1:
        raise ConfigurationError("n_qubits must be >= 1")
    if x is None:
        x = rank_grid(n_qubits)
    n_random_params = n_random_params or 3 * 3**n_qubits + 10
    embedding = sinusoidal(n_qubits, n_qubits)
    rows = random_outputs(embedding, x, n_random_params, np.random.default_rng(seed), n_layers).T
    rows = np.vstack([np.ones(x.shape[0]), rows])
    sv = np.linalg.svd(rows, compute_uv=False)
    return int(np.sum(sv > rtol * sv[0]))


def arcsin_error_floor(target, x: np.ndarray | None = None) -> float:
    """Smallest MAE of ``a*x + b*sqrt(1-x^2) + c`` fitted (least squares) to a univariate target.

    ``target`` is a target name, a :class:`~qnnx.data.TargetFunction` or any
    vectorised callable of a 1-D array.
    """
    if x is None:
        x = np.linspace(data.LOW, data.HIGH, 201)
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if isinstance(target, (str, data.TargetFunction)):
        t = data.get_target(target)
        if t.dim != 1:
            raise ConfigurationError(f"{t.name} is not univariate")
        y = t(x[:, None])
    else:
        y = np.asarray(target(x), dtype=np.float64)
    features = feature_matrix(BF_A, x[:, None])
    coef, *_ = np.linalg.lstsq(features, y, rcond=None)
    return float(np.mean(np.abs(features @ coef - y)))


@dataclass(frozen=True)
class OracleRow:
    name: str
    value: float
    threshold: float
    relation: str  # how value must compare to threshold: "<", ">" or "=="

    @property
    def passed(self) -> bool:
        if self.relation == "<":
            return self.value < self.threshold
        if self.relation == ">":
            return self.value > self.threshold
        return self.value == self.threshold


ORACLE_GROUPS = ("span", "rank", "floor")


def run_oracles(only: str | None = None, max_qubits: int = 3, n_trials: int = 50, seed: int = 0,
                drop_basis: str | None = None) -> list[OracleRow]:
    """Every span, rank and error-floor check as a list of rows.

    ``drop_basis`` removes the named element from the two-qubit dictionary,
    which must make its span checks fail.
    """
    if only is not None and only not in ORACLE_GROUPS:
        raise ConfigurationError(f"only must be one of {ORACLE_GROUPS}")
    rows: list[OracleRow] = []
    if only in (None, "span"):
        bf2 = dict(BF_2)
        if drop_basis is not None:
            if drop_basis not in bf2:
                raise ConfigurationError(f"{drop_basis!r} is not in the two-qubit dictionary {list(bf2)}")
            del bf2[drop_basis]
        checks = [
            ("span_sin_1q_bf_s", sinusoidal(1), BF_S, {}),
            ("span_sin_2q_z0_bf_2", sinusoidal(2, 2), bf2, {}),
            ("span_sin_2q_z1_bf_2", sinusoidal(2, 2), bf2, {"qubit": 1}),
            ("span_hybrid_2q_bf_h", hybrid(2, 1), BF_H, {}),
            ("span_arcsin_1q_bf_a", arcsin(1), BF_A, {}),
            ("span_sin_1q_poly2_bf_p", sinusoidal(1), BF_P, {"poly_degree": 2}),
        ]
        for name, emb, dictionary, kw in checks:
            res = span_test(emb, dictionary, n_trials, seed=seed, name=name, **kw)
            rows.append(OracleRow(name, res.max_residual, SPAN_TOL, "<"))
        # negative control: cos x is not affine on the input box
        neg = span_residuals(sinusoidal(1), AFFINE, n_trials, seed=seed)
        rows.append(OracleRow("span_negative_control_affine", float(np.median(neg)), 1e-2, ">"))
    if only in (None, "rank"):
        for n in range(1, max_qubits + 1):
            rows.append(OracleRow(f"rank_{n}q", basis_rank(n, seed=seed), 3**n, "=="))
    if only in (None, "floor"):
        rows.append(OracleRow("floor_arcsin_f1v1", arcsin_error_floor("f1v1"), FLOOR_MIN, ">"))
        rows.append(OracleRow("floor_arcsin_sqrt", arcsin_error_floor(_sqrt1m), 1e-12, "<"))
        rows.append(OracleRow("floor_arcsin_affine", arcsin_error_floor(lambda v: 0.3 * v + 0.1), 1e-12, "<"))
    return rows
