from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qnnx.errors import ConfigurationError, StructuralError
from qnnx.statevector import (CNOT, RY, RZ, Gate, StateVector, apply_circuit, apply_gate, apply_gates,
                              circuit_unitary, init_zero, product_state, ry_matrix, rz_matrix)

I2 = np.eye(2)
P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])
X = np.array([[0.0, 1.0], [1.0, 0.0]])


def dense(gate: Gate, n: int) -> np.ndarray:
    """Full 2^n x 2^n matrix built from Kronecker products, qubit 0 leftmost."""
    def kron_at(ops):
        return reduce(np.kron, [ops.get(q, I2) for q in range(n)])
    if gate.kind == "CNOT":
        return kron_at({gate.control: P0}) + kron_at({gate.control: P1, gate.target: X})
    single = ry_matrix(gate.angle) if gate.kind == "RY" else rz_matrix(gate.angle)
    return kron_at({gate.target: single})


def random_circuit(rng, n, length):
    gates = []
    for _ in range(length):
        kind = rng.choice(["RY", "RZ", "CNOT"] if n > 1 else ["RY", "RZ"])
        if kind == "CNOT":
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(CNOT(int(c), int(t)))
        else:
            gates.append(Gate(str(kind), int(rng.integers(n)), angle=float(rng.uniform(-4, 4))))
    return gates


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(n, v / np.linalg.norm(v))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_init_zero(n):
    amps = init_zero(n).amplitudes
    assert amps.shape == (2**n,)
    assert amps[0] == 1 and np.count_nonzero(amps) == 1


@pytest.mark.parametrize("n", [0, -1, 9, 2.5])
def test_init_zero_rejects(n):
    with pytest.raises(ConfigurationError):
        init_zero(n)


def test_state_is_read_only():
    s = init_zero(2)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


@pytest.mark.parametrize("angle, expected", [
    (0.0, [1, 0]),
    (np.pi, [0, 1]),
    (np.pi / 2, [np.sqrt(2) / 2, np.sqrt(2) / 2]),
])
def test_ry_on_zero(angle, expected):
    out = apply_gate(init_zero(1), RY(0, angle))
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)


def test_cnot_flips_target():
    out = apply_gate(StateVector(2, [0, 0, 1, 0]), CNOT(0, 1))
    np.testing.assert_array_equal(out.amplitudes, [0, 0, 0, 1])
    # control in |0> leaves the target alone
    out = apply_gate(StateVector(2, [0, 1, 0, 0]), CNOT(0, 1))
    np.testing.assert_array_equal(out.amplitudes, [0, 1, 0, 0])


def test_empty_circuit_is_identity(rng):
    s = random_state(rng, 3)
    assert np.array_equal(apply_circuit(s, []).amplitudes, s.amplitudes)


def test_rotation_additivity():
    a, b = 0.4, -1.3
    lhs = apply_circuit(init_zero(1), [RY(0, a), RY(0, b)])
    rhs = apply_gate(init_zero(1), RY(0, a + b))
    np.testing.assert_allclose(lhs.amplitudes, rhs.amplitudes, atol=1e-15)


def test_product_of_two_rotations():
    x1, x2 = 0.7, -2.1
    out = apply_circuit(init_zero(2), [RY(0, x1), RY(1, x2)]).amplitudes
    c1, s1, c2, s2 = np.cos(x1 / 2), np.sin(x1 / 2), np.cos(x2 / 2), np.sin(x2 / 2)
    np.testing.assert_allclose(out, [c1 * c2, c1 * s2, s1 * c2, s1 * s2], atol=1e-15)


def test_rz_phase():
    out = apply_gate(StateVector(1, [1, 1] / np.sqrt(2)), RZ(0, np.pi / 2)).amplitudes
    np.testing.assert_allclose(out, np.array([np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4)]) / np.sqrt(2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_matches_kronecker_oracle(rng, n):
    for _ in range(20):
        gates = random_circuit(rng, n, 12)
        s = random_state(rng, n)
        expected = reduce(lambda v, g: dense(g, n) @ v, gates, s.amplitudes)
        np.testing.assert_allclose(apply_circuit(s, gates).amplitudes, expected, atol=1e-12)


def test_circuit_unitary_matches_oracle(rng):
    gates = random_circuit(rng, 3, 15)
    expected = reduce(lambda u, g: dense(g, 3) @ u, gates, np.eye(8))
    np.testing.assert_allclose(circuit_unitary(gates, 3), expected, atol=1e-12)


def test_batched_angles_match_loop(rng):
    angles = rng.uniform(-3, 3, size=(5,))
    gates = [RY(0, angles), CNOT(0, 1), RZ(1, 2 * angles)]
    batched = apply_gates(np.tile(init_zero(2).amplitudes, (5, 1)), gates, 2)
    for k in range(5):
        single = apply_circuit(init_zero(2), [RY(0, angles[k]), CNOT(0, 1), RZ(1, 2 * angles[k])])
        np.testing.assert_allclose(batched[k], single.amplitudes, atol=1e-14)


def test_product_state():
    cols = np.array([[np.cos(0.2), np.sin(0.2)], [np.cos(0.9), np.sin(0.9)]])
    np.testing.assert_allclose(product_state(cols), np.kron(cols[0], cols[1]))


@pytest.mark.parametrize("gate", [RY(2, 0.1), CNOT(0, 5), Gate("RZ", -1, angle=0.1)])
def test_out_of_range_gate(gate):
    with pytest.raises(StructuralError):
        apply_gate(init_zero(2), gate)


def test_gate_validation():
    with pytest.raises(StructuralError):
        CNOT(1, 1)
    with pytest.raises(ConfigurationError):
        Gate("H", 0)
    with pytest.raises(ConfigurationError):
        Gate("RY", 0, control=1)


def test_norm_preserved_over_many_circuits(rng):
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        out = apply_circuit(random_state(rng, n), random_circuit(rng, n, 10))
        worst = max(worst, abs(out.norm - 1.0))
    assert worst < 1e-12


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4), length=st.integers(0, 20))
def test_inverse_round_trip(seed, n, length):
    rng = np.random.default_rng(seed)
    s = random_state(rng, n)
    gates = random_circuit(rng, n, length)
    back = apply_circuit(apply_circuit(s, gates), [g.inverse() for g in reversed(gates)])
    assert np.max(np.abs(back.amplitudes - s.amplitudes)) < 1e-12
