import numpy as np
import pytest

from qnnx.ansatz import AnsatzSpec, build_circuit, param_count
from qnnx.errors import ConfigurationError


def test_single_qubit_layer():
    gates = build_circuit(AnsatzSpec(1, 1), [0.3, 0.4])
    assert [(g.kind, g.target, g.angle) for g in gates] == [("RY", 0, 0.3), ("RZ", 0, 0.4)]


def test_two_qubit_layer_order():
    gates = build_circuit(AnsatzSpec(2, 1), [1, 2, 3, 4])
    assert [g.kind for g in gates] == ["RY", "RZ", "RY", "RZ", "CNOT"]
    assert gates[-1].control == 0 and gates[-1].target == 1


def test_three_qubits_four_layers():
    spec = AnsatzSpec(3, 4)
    gates = build_circuit(spec, np.zeros(param_count(spec)))
    assert param_count(spec) == 24
    assert sum(g.kind != "CNOT" for g in gates) == 24
    assert sum(g.kind == "CNOT" for g in gates) == 8


@pytest.mark.parametrize("n, layers, count", [(2, 4, 16), (4, 4, 32), (1, 0, 0)])
def test_param_count(n, layers, count):
    assert param_count(AnsatzSpec(n, layers)) == count


def test_ring_closes_loop():
    assert AnsatzSpec(3, 1, "ring").entangling_pairs() == [(0, 1), (1, 2), (2, 0)]
    assert AnsatzSpec(2, 1, "ring").entangling_pairs() == [(0, 1)]


def test_deterministic(rng):
    spec = AnsatzSpec(3, 2)
    theta = rng.uniform(size=param_count(spec))
    assert build_circuit(spec, theta) == build_circuit(spec, theta.copy())


def test_length_mismatch():
    with pytest.raises(ConfigurationError):
        build_circuit(AnsatzSpec(2, 2), np.zeros(7))
    with pytest.raises(ConfigurationError):
        AnsatzSpec(2, 1, "star")
