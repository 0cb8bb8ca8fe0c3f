"""Layered hardware-efficient ansatz.

Each layer applies RY then RZ to every qubit, followed by a CNOT entangler
(linear chain, optionally closed into a ring). Parameters are consumed in gate
order: ``theta[2*(layer*n + q)]`` drives the RY on qubit ``q`` and the next
slot drives its RZ.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .statevector import CNOT, RY, RZ, Gate, MAX_QUBITS

ENTANGLERS = ("chain", "ring")


@dataclass(frozen=True)
class AnsatzSpec:
    n_qubits: int
    n_layers: int = 4
    entangler: str = "chain"

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigurationError(f"n_qubits must be in 1..{MAX_QUBITS}")
        if self.n_layers < 0:
            raise ConfigurationError("n_layers must be >= 0")
        if self.entangler not in ENTANGLERS:
            raise ConfigurationError(f"entangler must be one of {ENTANGLERS}")

    def entangling_pairs(self) -> list[tuple[int, int]]:
        n = self.n_qubits
        pairs = [(q, q + 1) for q in range(n - 1)]
        if self.entangler == "ring" and n >= 3:
            pairs.append((n - 1, 0))
        return pairs


def param_count(spec: AnsatzSpec) -> int:
    return 2 * spec.n_qubits * spec.n_layers


def build_circuit(spec: AnsatzSpec, theta) -> list[Gate]:
    """Gate list for ``theta``.

    ``theta`` may carry trailing batch axes, shape ``(P, *batch)``; each gate
    then holds an angle array of shape ``batch`` (see ``apply_gates``).
    """
    theta = np.asarray(theta, dtype=np.float64)
    n_params = param_count(spec)
    if theta.ndim == 0 or theta.shape[0] != n_params:
        raise ConfigurationError(
            f"ansatz needs {n_params} parameters, got shape {theta.shape}")
    as_angle = (lambda v: float(v)) if theta.ndim == 1 else (lambda v: v)
    gates: list[Gate] = []
    k = 0
    for _ in range(spec.n_layers):
        for q in range(spec.n_qubits):
            gates.append(RY(q, as_angle(theta[k])))
            gates.append(RZ(q, as_angle(theta[k + 1])))
            k += 2
        gates.extend(CNOT(c, t) for c, t in spec.entangling_pairs())
    return gates
