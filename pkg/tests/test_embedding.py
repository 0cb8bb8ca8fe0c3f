import numpy as np
import pytest

from qnnx.embedding import EmbeddingScheme, arcsin, embed, embed_batch, hybrid, round_robin, sinusoidal
from qnnx.errors import ConfigurationError, DomainError
from qnnx.statevector import RY, apply_circuit, init_zero


@pytest.mark.parametrize("scheme", [sinusoidal(2), arcsin(2), hybrid(2)])
def test_zero_input_gives_all_zero_state(scheme):
    np.testing.assert_allclose(embed([0.0], scheme).amplitudes, [1, 0, 0, 0], atol=1e-15)


def test_sinusoidal_one_qubit():
    np.testing.assert_allclose(embed([np.pi / 2], sinusoidal(1)).amplitudes, [np.sqrt(0.5)] * 2)


def test_arcsin_one_qubit():
    np.testing.assert_allclose(embed([0.5], arcsin(1)).amplitudes, [np.cos(np.pi / 12), np.sin(np.pi / 12)])


def test_matches_explicit_rotations():
    scheme = hybrid(3, 2, input_scale=np.pi)
    x = np.array([0.3, -0.6])
    angles = [np.pi * x[0], np.arcsin(x[1]), np.arcsin(x[0])]
    expected = apply_circuit(init_zero(3), [RY(q, a) for q, a in enumerate(angles)])
    np.testing.assert_allclose(embed(x, scheme).amplitudes, expected.amplitudes, atol=1e-15)


def test_round_robin():
    assert round_robin(4, 2) == (0, 1, 0, 1)
    assert round_robin(3, 3) == (0, 1, 2)


def test_batch_matches_single(rng):
    scheme = sinusoidal(3, 2, input_scale=np.pi)
    x = rng.uniform(-0.95, 0.95, size=(7, 2))
    batch = embed_batch(x, scheme)
    for row, xi in zip(batch, x):
        np.testing.assert_allclose(row, embed(xi, scheme).amplitudes.real, atol=1e-15)


def test_domain_errors():
    with pytest.raises(DomainError):
        embed([1.01], arcsin(1))
    with pytest.raises(DomainError):
        embed([3.2], sinusoidal(1))


def test_scheme_validation():
    with pytest.raises(ConfigurationError):
        EmbeddingScheme(("sin", "tan"), (0, 0))
    with pytest.raises(ConfigurationError):
        EmbeddingScheme(("sin", "sin"), (0, 2))  # variable 1 never embedded
    with pytest.raises(ConfigurationError):
        embed([0.1, 0.2], sinusoidal(2, 2), n_qubits=3)
