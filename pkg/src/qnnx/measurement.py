"""Pauli-Z readout, weighted multi-qubit combination and polynomial post-processing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, StructuralError
from .statevector import StateVector

MAX_POLY_DEGREE = 4


def z_signs(n_qubits: int) -> np.ndarray:
    """``(2**n, n)`` table of +1/-1: the Z eigenvalue of each qubit per basis index."""
    idx = np.arange(2**n_qubits)
    bits = (idx[:, None] >> (n_qubits - 1 - np.arange(n_qubits))[None, :]) & 1
    return 1.0 - 2.0 * bits


def z_expectations(amplitudes: np.ndarray, n_qubits: int) -> np.ndarray:
    """<Z_q> for every qubit; input ``(..., 2**n)``, output ``(..., n)``."""
    probs = np.abs(amplitudes) ** 2
    return probs @ z_signs(n_qubits)


def sample_expectation(exact: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Finite-shot estimate of a Z expectation: binomial count of +1 outcomes."""
    p_plus = np.clip((1.0 + np.asarray(exact)) / 2.0, 0.0, 1.0)
    return 2.0 * rng.binomial(shots, p_plus) / shots - 1.0


def pauli_z_expectation(state: StateVector, qubit: int, shots: int = 0,
                        rng: np.random.Generator | None = None) -> float:
    if not 0 <= qubit < state.n_qubits:
        raise StructuralError(f"qubit {qubit} not in register of {state.n_qubits}")
    value = z_expectations(state.amplitudes, state.n_qubits)[qubit]
    if shots:
        value = sample_expectation(value, shots, rng or np.random.default_rng())
    return float(value)


@dataclass(frozen=True)
class MeasurementPlan:
    measured_qubits: tuple[int, ...]
    redundant: bool = True

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.measured_qubits)
        object.__setattr__(self, "measured_qubits", qubits)
        if not qubits:
            raise ConfigurationError("measurement plan needs at least one qubit")
        if len(set(qubits)) != len(qubits) or min(qubits) < 0:
            raise ConfigurationError(f"measured qubits must be distinct and >= 0: {qubits}")

    @classmethod
    def all_qubits(cls, n_qubits: int, redundant: bool = True) -> "MeasurementPlan":
        return cls(tuple(range(n_qubits)) if redundant else (0,), redundant)

    @property
    def n_combine(self) -> int:
        """Length of the combine weight vector, bias included."""
        return len(self.measured_qubits) + 1


@dataclass(frozen=True)
class ReadoutWeights:
    combine_w: np.ndarray
    poly_w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "combine_w", np.asarray(self.combine_w, dtype=np.float64))
        object.__setattr__(self, "poly_w", np.asarray(self.poly_w, dtype=np.float64))


def combine(z: np.ndarray, plan: MeasurementPlan, combine_w: np.ndarray) -> np.ndarray:
    """Readout of per-qubit expectations ``z`` (last axis indexed by qubit)."""
    zq = z[..., list(plan.measured_qubits)]
    if not plan.redundant:
        return zq[..., 0]
    combine_w = np.asarray(combine_w, dtype=np.float64)
    if combine_w.shape != (plan.n_combine,):
        raise ConfigurationError(
            f"need {plan.n_combine} combine weights for {plan.measured_qubits}, got {combine_w.shape}")
    return zq @ combine_w[:-1] + combine_w[-1]


def combined_measurement(state: StateVector, plan: MeasurementPlan, weights: ReadoutWeights) -> float:
    if max(plan.measured_qubits) >= state.n_qubits:
        raise StructuralError(f"plan measures {plan.measured_qubits} on {state.n_qubits} qubits")
    z = z_expectations(state.amplitudes, state.n_qubits)
    return float(combine(z, plan, weights.combine_w))


def post_measurement(z, poly_w) -> float | np.ndarray:
    """Polynomial ``sum_k poly_w[k] * z**k``."""
    poly_w = np.asarray(poly_w, dtype=np.float64)
    return np.polynomial.polynomial.polyval(z, poly_w)


def post_measurement_derivative(z, poly_w) -> float | np.ndarray:
    poly_w = np.asarray(poly_w, dtype=np.float64)
    if poly_w.size < 2:
        return np.zeros_like(np.asarray(z, dtype=np.float64))
    return np.polynomial.polynomial.polyval(z, np.polynomial.polynomial.polyder(poly_w))
