"""Model architecture, parameters and the forward pass.

The forward pass is embedding -> ansatz -> Pauli-Z expectations -> weighted
combination -> polynomial. Because the embedded state is a product state and
the ansatz does not depend on the input, a whole batch of inputs is pushed
through one circuit matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import measurement as meas
from .ansatz import AnsatzSpec, build_circuit, param_count
from .embedding import EmbeddingScheme, embed_batch
from .errors import ConfigurationError
from .measurement import MeasurementPlan
from .statevector import circuit_unitary


@dataclass(frozen=True)
class ModelSpec:
    embedding: EmbeddingScheme
    ansatz: AnsatzSpec
    plan: MeasurementPlan
    poly_degree: int = 2
    variant_name: str = "custom"
    # False pins the polynomial to the identity (0, 1)
    train_poly: bool = True

    def __post_init__(self):
        n = self.ansatz.n_qubits
        if self.embedding.n_qubits != n:
            raise ConfigurationError(
                f"embedding covers {self.embedding.n_qubits} qubits, ansatz {n}")
        if max(self.plan.measured_qubits) >= n:
            raise ConfigurationError(f"plan measures {self.plan.measured_qubits} on {n} qubits")
        if not 1 <= self.poly_degree <= meas.MAX_POLY_DEGREE:
            raise ConfigurationError(f"poly_degree must be in 1..{meas.MAX_POLY_DEGREE}")
        if not self.train_poly and self.poly_degree != 1:
            raise ConfigurationError("a fixed identity readout has degree 1")

    @property
    def n_qubits(self) -> int:
        return self.ansatz.n_qubits

    @property
    def n_inputs(self) -> int:
        return self.embedding.n_variables

    @property
    def n_theta(self) -> int:
        return param_count(self.ansatz)

    @property
    def n_trainable(self) -> int:
        n = self.n_theta
        if self.plan.redundant:
            n += self.plan.n_combine
        if self.train_poly:
            n += self.poly_degree + 1
        return n

    def describe(self) -> dict:
        return {
            "variant": self.variant_name,
            "qubits": self.n_qubits,
            "layers": self.ansatz.n_layers,
            "entangler": self.ansatz.entangler,
            "embedding": list(self.embedding.per_qubit),
            "variables": list(self.embedding.variable_of_qubit),
            "input_scale": self.embedding.input_scale,
            "measured_qubits": list(self.plan.measured_qubits),
            "redundant": self.plan.redundant,
            "poly_degree": self.poly_degree,
            "train_poly": self.train_poly,
        }


@dataclass(frozen=True)
class ParamSet:
    theta: np.ndarray
    combine_w: np.ndarray
    poly_w: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0]))

    def __post_init__(self):
        for name in ("theta", "combine_w", "poly_w"):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=np.float64))

    @property
    def readout(self) -> meas.ReadoutWeights:
        return meas.ReadoutWeights(self.combine_w, self.poly_w)

    def check(self, model: ModelSpec) -> None:
        if self.theta.shape != (model.n_theta,):
            raise ConfigurationError(f"theta needs {model.n_theta} entries, got {self.theta.shape}")
        if self.combine_w.shape != (model.plan.n_combine,):
            raise ConfigurationError(
                f"combine_w needs {model.plan.n_combine} entries, got {self.combine_w.shape}")
        if self.poly_w.shape != (model.poly_degree + 1,):
            raise ConfigurationError(
                f"poly_w needs {model.poly_degree + 1} entries, got {self.poly_w.shape}")

    def trainable_vector(self, model: ModelSpec) -> np.ndarray:
        parts = [self.theta]
        if model.plan.redundant:
            parts.append(self.combine_w)
        if model.train_poly:
            parts.append(self.poly_w)
        return np.concatenate(parts)

    def with_trainable(self, model: ModelSpec, vector: np.ndarray) -> "ParamSet":
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (model.n_trainable,):
            raise ConfigurationError(f"expected {model.n_trainable} trainable values")
        k = model.n_theta
        updates = {"theta": vector[:k]}
        if model.plan.redundant:
            updates["combine_w"] = vector[k:k + model.plan.n_combine]
            k += model.plan.n_combine
        if model.train_poly:
            updates["poly_w"] = vector[k:]
        return replace(self, **updates)

    def to_dict(self) -> dict:
        return {"theta": self.theta.tolist(), "combine_w": self.combine_w.tolist(),
                "poly_w": self.poly_w.tolist()}


def identity_poly(degree: int) -> np.ndarray:
    w = np.zeros(degree + 1)
    w[1] = 1.0
    return w


def init_params(model: ModelSpec, rng: np.random.Generator) -> ParamSet:
    """Angles uniform in [0, 2*pi); readout weights zero.

    When a trained polynomial sits on top of a trained weighted sum, an
    all-zero start is a stationary point (every gradient but the constant
    term vanishes), so the polynomial then starts from the identity instead.
    """
    theta = rng.uniform(0.0, 2 * np.pi, size=model.n_theta)
    combine_w = np.zeros(model.plan.n_combine)
    if not model.train_poly or model.plan.redundant:
        poly_w = identity_poly(model.poly_degree)
    else:
        poly_w = np.zeros(model.poly_degree + 1)
    return ParamSet(theta, combine_w, poly_w)


def qubit_expectations(model: ModelSpec, theta: np.ndarray, psi_in: np.ndarray) -> np.ndarray:
    """<Z_q> for every qubit and input.

    ``theta`` is ``(P,)`` or ``(P, K)``; ``psi_in`` is ``(N, 2**n)``. Returns
    ``(N, n)`` or ``(K, N, n)``.
    """
    theta = np.asarray(theta, dtype=np.float64)
    batch = theta.shape[1:]
    unitary = circuit_unitary(build_circuit(model.ansatz, theta), model.n_qubits, batch)
    dim = 2**model.n_qubits
    # inputs are rows, so each block must be U^T; one (N, D) x (D, K*D)
    # product then replaces K small ones
    u_rows = np.swapaxes(unitary.reshape((-1, dim, dim)), -1, -2)
    stacked = np.moveaxis(u_rows, 0, -2).reshape(dim, -1)
    if np.isrealobj(psi_in):
        probs = (psi_in @ np.ascontiguousarray(stacked.real.T).T) ** 2
        probs += (psi_in @ np.ascontiguousarray(stacked.imag.T).T) ** 2
    else:
        probs = np.abs(psi_in @ stacked) ** 2
    z = probs.reshape(psi_in.shape[0], -1, dim) @ meas.z_signs(model.n_qubits)
    return np.moveaxis(z, 0, -2).reshape(batch + (psi_in.shape[0], model.n_qubits))


def _inputs(model: ModelSpec, x) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != model.n_inputs:
        raise ConfigurationError(f"model takes {model.n_inputs} inputs, got {x.shape[1]}")
    return x


def predict(model: ModelSpec, params: ParamSet, x, shots: int = 0,
            rng: np.random.Generator | None = None) -> np.ndarray:
    """Model output for a batch of inputs ``x`` of shape ``(N, d)``."""
    params.check(model)
    psi = embed_batch(_inputs(model, x), model.embedding)
    z = qubit_expectations(model, params.theta, psi)
    if shots:
        z = meas.sample_expectation(z, shots, rng or np.random.default_rng())
    c = meas.combine(z, model.plan, params.combine_w)
    return meas.post_measurement(c, params.poly_w)


def forward(x, model: ModelSpec, params: ParamSet) -> float:
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return float(predict(model, params, x[None, :])[0])
