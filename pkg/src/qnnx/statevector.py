"""Dense statevector simulation with RY, RZ and CNOT gates.

Qubit 0 is the most significant bit of the amplitude index, so a two-qubit
amplitude vector is ordered ``|00>, |01>, |10>, |11>`` with the left label
belonging to qubit 0.

The array-level helpers (``apply_gates``, ``circuit_unitary``) accept leading
batch dimensions and per-batch gate angles; the training code relies on this to
evaluate all parameter-shifted circuits in one pass.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import ConfigurationError, StructuralError

MAX_QUBITS = 8
GATE_KINDS = ("RY", "RZ", "CNOT")

Angle = Union[float, np.ndarray]


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ConfigurationError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.n_qubits,):
            raise ConfigurationError(
                f"expected {2**self.n_qubits} amplitudes, got shape {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    control: int | None = None
    angle: Angle = 0.0

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ConfigurationError(f"unknown gate kind {self.kind!r}")
        if self.kind == "CNOT":
            if self.control is None:
                raise ConfigurationError("CNOT needs a control qubit")
            if self.control == self.target:
                raise StructuralError("CNOT control and target must differ")
        elif self.control is not None:
            raise ConfigurationError(f"{self.kind} does not take a control qubit")

    def qubits(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)

    def inverse(self) -> "Gate":
        if self.kind == "CNOT":
            return self
        return Gate(self.kind, self.target, angle=-self.angle)


def RY(target: int, angle: Angle) -> Gate:
    return Gate("RY", target, angle=angle)


def RZ(target: int, angle: Angle) -> Gate:
    return Gate("RZ", target, angle=angle)


def CNOT(control: int, target: int) -> Gate:
    return Gate("CNOT", target, control=control)


def ry_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rz_matrix(angle: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def init_zero(n_qubits: int) -> StateVector:
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(f"n_qubits must be an integer in 1..{MAX_QUBITS}, got {n_qubits!r}")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(int(n_qubits), amps)


def _check_indices(gate: Gate, n_qubits: int) -> None:
    for q in gate.qubits():
        if not 0 <= q < n_qubits:
            raise StructuralError(f"{gate.kind} acts on qubit {q}, register has {n_qubits}")


def _index(n_batch: int, n_qubits: int, fixed: dict[int, int]) -> tuple:
    idx = [slice(None)] * (n_batch + n_qubits)
    for q, bit in fixed.items():
        idx[n_batch + q] = bit
    return tuple(idx)


def _apply_tensor(psi: np.ndarray, gate: Gate, n_qubits: int) -> np.ndarray:
    # psi has shape batch + (2,)*n_qubits
    n_batch = psi.ndim - n_qubits
    if gate.kind == "CNOT":
        out = psi.copy()
        i10 = _index(n_batch, n_qubits, {gate.control: 1, gate.target: 0})
        i11 = _index(n_batch, n_qubits, {gate.control: 1, gate.target: 1})
        out[i10], out[i11] = psi[i11], psi[i10]
        return out

    angle = np.asarray(gate.angle, dtype=np.float64)
    if angle.ndim:
        # per-batch angles broadcast against the leading batch axes
        angle = angle.reshape(angle.shape + (1,) * (n_batch - angle.ndim + n_qubits - 1))
    axis = n_batch + gate.target
    a0 = np.take(psi, 0, axis=axis)
    a1 = np.take(psi, 1, axis=axis)
    if gate.kind == "RY":
        c, s = np.cos(angle / 2), np.sin(angle / 2)
        new0, new1 = c * a0 - s * a1, s * a0 + c * a1
    else:
        phase = np.exp(0.5j * angle)
        new0, new1 = a0 * np.conj(phase), a1 * phase
    return np.stack([new0, new1], axis=axis)


def apply_gates(amplitudes: np.ndarray, gates: Sequence[Gate], n_qubits: int) -> np.ndarray:
    """Apply ``gates`` in order to an array of shape ``batch + (2**n_qubits,)``.

    Gate angles may be arrays whose shape matches the leading batch axes; the
    batch is then expanded as needed.
    """
    amps = np.asarray(amplitudes, dtype=np.complex128)
    if amps.shape[-1] != 2**n_qubits:
        raise ConfigurationError(f"last axis must have length {2**n_qubits}")
    batch = amps.shape[:-1]
    psi = amps.reshape(batch + (2,) * n_qubits)
    for gate in gates:
        _check_indices(gate, n_qubits)
        psi = _apply_tensor(psi, gate, n_qubits)
    return psi.reshape(psi.shape[: psi.ndim - n_qubits] + (2**n_qubits,))


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    if np.ndim(gate.angle):
        raise ConfigurationError("apply_gate takes a scalar angle; use apply_gates for batches")
    _check_indices(gate, state.n_qubits)
    return StateVector(state.n_qubits, apply_gates(state.amplitudes, [gate], state.n_qubits))


def apply_circuit(state: StateVector, gates: Sequence[Gate]) -> StateVector:
    amps = state.amplitudes
    for gate in gates:
        amps = apply_gate(StateVector(state.n_qubits, amps), gate).amplitudes
    return StateVector(state.n_qubits, amps)


def circuit_unitary(gates: Sequence[Gate], n_qubits: int, batch_shape: tuple[int, ...] = ()) -> np.ndarray:
    """Matrix of the circuit, shape ``batch_shape + (D, D)`` with ``D = 2**n_qubits``.

    Column ``j`` is the circuit applied to basis state ``j``.
    """
    dim = 2**n_qubits
    basis = np.broadcast_to(np.eye(dim, dtype=np.complex128), batch_shape + (dim, dim))
    # rows of ``basis`` are input states; the result holds U^T per batch entry
    transposed = apply_gates(basis, gates, n_qubits)
    return np.swapaxes(transposed, -1, -2)


def product_state(columns: np.ndarray) -> np.ndarray:
    """Tensor product of single-qubit states.

    ``columns`` has shape ``batch + (n_qubits, 2)``; qubit 0 becomes the most
    significant factor.
    """
    columns = np.asarray(columns)
    out = columns[..., 0, :]
    for q in range(1, columns.shape[-2]):
        out = (out[..., :, None] * columns[..., q, None, :]).reshape(out.shape[:-1] + (-1,))
    return out
