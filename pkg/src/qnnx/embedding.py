"""Angle embeddings of classical inputs onto the register.

Every qubit starts in |0> and receives a single RY rotation. A ``"sin"`` qubit
is rotated by ``input_scale * x_j`` and an ``"arcsin"`` qubit by ``arcsin(x_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .statevector import StateVector, product_state

SINUSOIDAL = "sin"
ARCSIN = "arcsin"
KINDS = (SINUSOIDAL, ARCSIN)

# sanity bound on raw sinusoidal angles
MAX_SIN_INPUT = np.pi


@dataclass(frozen=True)
class EmbeddingScheme:
    per_qubit: tuple[str, ...]
    variable_of_qubit: tuple[int, ...]
    input_scale: float = 1.0

    def __post_init__(self):
        per_qubit = tuple(self.per_qubit)
        variables = tuple(int(v) for v in self.variable_of_qubit)
        object.__setattr__(self, "per_qubit", per_qubit)
        object.__setattr__(self, "variable_of_qubit", variables)
        if len(per_qubit) != len(variables):
            raise ConfigurationError("per_qubit and variable_of_qubit differ in length")
        if not per_qubit:
            raise ConfigurationError("embedding needs at least one qubit")
        bad = [k for k in per_qubit if k not in KINDS]
        if bad:
            raise ConfigurationError(f"unknown embedding kind(s) {bad}; expected one of {KINDS}")
        if min(variables) < 0:
            raise ConfigurationError("variable indices must be non-negative")
        missing = set(range(self.n_variables)) - set(variables)
        if missing:
            raise ConfigurationError(f"input variables {sorted(missing)} feed no qubit")
        if not np.isfinite(self.input_scale) or self.input_scale == 0:
            raise ConfigurationError("input_scale must be finite and non-zero")

    @property
    def n_qubits(self) -> int:
        return len(self.per_qubit)

    @property
    def n_variables(self) -> int:
        return max(self.variable_of_qubit) + 1


def round_robin(n_qubits: int, n_variables: int) -> tuple[int, ...]:
    return tuple(q % n_variables for q in range(n_qubits))


def sinusoidal(n_qubits: int, n_variables: int = 1, input_scale: float = 1.0) -> EmbeddingScheme:
    return EmbeddingScheme((SINUSOIDAL,) * n_qubits, round_robin(n_qubits, n_variables), input_scale)


def arcsin(n_qubits: int, n_variables: int = 1) -> EmbeddingScheme:
    return EmbeddingScheme((ARCSIN,) * n_qubits, round_robin(n_qubits, n_variables))


def hybrid(n_qubits: int = 2, n_variables: int = 1, input_scale: float = 1.0) -> EmbeddingScheme:
    # qubit 0 sinusoidal, the remaining qubits arcsin
    kinds = (SINUSOIDAL,) + (ARCSIN,) * (n_qubits - 1)
    return EmbeddingScheme(kinds, round_robin(n_qubits, n_variables), input_scale)


def rotation_angles(x: np.ndarray, scheme: EmbeddingScheme) -> np.ndarray:
    """RY angle of every qubit for a batch of inputs, shape ``(N, n_qubits)``."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[-1] < scheme.n_variables:
        raise ConfigurationError(
            f"scheme reads {scheme.n_variables} variables, input has {x.shape[-1]}")
    cols = x[:, list(scheme.variable_of_qubit)]
    is_arcsin = np.array([k == ARCSIN for k in scheme.per_qubit])
    if is_arcsin.any() and np.any(np.abs(cols[:, is_arcsin]) > 1):
        raise DomainError("arcsin embedding needs |x| <= 1")
    if (~is_arcsin).any() and np.any(np.abs(cols[:, ~is_arcsin]) > MAX_SIN_INPUT):
        raise DomainError(f"sinusoidal embedding input exceeds {MAX_SIN_INPUT:.4f}")
    return np.where(is_arcsin, np.arcsin(np.clip(cols, -1, 1)), scheme.input_scale * cols)


def embed_batch(x: np.ndarray, scheme: EmbeddingScheme) -> np.ndarray:
    """Embedded amplitudes for a batch of inputs, shape ``(N, 2**n_qubits)``.

    The state is a real product state, so it is returned as float64.
    """
    angles = rotation_angles(x, scheme)
    columns = np.stack([np.cos(angles / 2), np.sin(angles / 2)], axis=-1)
    return product_state(columns)


def embed(x, scheme: EmbeddingScheme, n_qubits: int | None = None) -> StateVector:
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.ndim != 1:
        raise ConfigurationError("embed takes a single input vector")
    if n_qubits is not None and n_qubits != scheme.n_qubits:
        raise ConfigurationError(f"scheme covers {scheme.n_qubits} qubits, not {n_qubits}")
    return StateVector(scheme.n_qubits, embed_batch(x[None, :], scheme)[0])
