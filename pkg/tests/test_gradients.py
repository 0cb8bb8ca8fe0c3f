import numpy as np
import pytest

from qnnx.ansatz import AnsatzSpec
from qnnx.embedding import hybrid, sinusoidal
from qnnx.errors import UsageError
from qnnx.gradients import full_gradient, loss_and_gradient, shift_gradient
from qnnx.measurement import MeasurementPlan
from qnnx.model import ModelSpec, ParamSet, predict


def mse(model, params, x, y):
    return float(np.mean((predict(model, params, x) - y) ** 2))


def finite_difference(model, params, x, y, h=1e-5):
    vec = params.trainable_vector(model)
    grad = np.empty_like(vec)
    for i in range(vec.size):
        up, down = vec.copy(), vec.copy()
        up[i] += h
        down[i] -= h
        grad[i] = (mse(model, params.with_trainable(model, up), x, y)
                   - mse(model, params.with_trainable(model, down), x, y)) / (2 * h)
    return grad


def random_model(rng):
    n = int(rng.integers(1, 4))
    d = int(rng.integers(1, n + 1))
    emb = hybrid(n, d, np.pi) if n > 1 and rng.random() < 0.3 else sinusoidal(n, d, np.pi)
    redundant = bool(rng.random() < 0.6)
    model = ModelSpec(emb, AnsatzSpec(n, int(rng.integers(1, 4))),
                      MeasurementPlan.all_qubits(n, redundant), int(rng.integers(1, 4)))
    params = ParamSet(rng.uniform(0, 2 * np.pi, model.n_theta), rng.normal(size=model.plan.n_combine),
                      rng.normal(size=model.poly_degree + 1))
    x = rng.uniform(-0.95, 0.95, size=(8, d))
    y = rng.normal(size=8)
    return model, params, x, y


def test_shift_rule_matches_finite_differences():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(20):
        model, params, x, y = random_model(rng)
        loss, grad = loss_and_gradient(model, params, x, y)
        assert loss == pytest.approx(mse(model, params, x, y), rel=1e-12)
        worst = max(worst, np.max(np.abs(grad.trainable_vector(model) - finite_difference(model, params, x, y))))
    assert worst < 1e-5


def _single_ry_model():
    # one layer on one qubit is RY(a) RZ(b); RZ does not change <Z>
    return ModelSpec(sinusoidal(1), AnsatzSpec(1, 1), MeasurementPlan((0,), redundant=False), 1)


def test_single_rotation_gradient():
    model = _single_ry_model()
    params = ParamSet([np.pi / 2, 0.0], [0, 0], [0, 1])
    np.testing.assert_allclose(shift_gradient(model, params, [0.0]), [[-1.0, 0.0]], atol=1e-15)
    for x, theta in [(0.3, 1.1), (-0.8, 2.5)]:
        g = shift_gradient(model, ParamSet([theta, 0.4], [0, 0], [0, 1]), [x])
        assert g[0, 0] == pytest.approx(-np.sin(x + theta), abs=1e-14)


def test_gradient_vanishes_at_extremum():
    g = shift_gradient(_single_ry_model(), ParamSet([0.0, 0.0], [0, 0], [0, 1]), [0.0])
    np.testing.assert_allclose(g, 0.0, atol=1e-15)


def test_zero_residual_zero_gradient(rng):
    model = ModelSpec(sinusoidal(2), AnsatzSpec(2, 2), MeasurementPlan((0,), redundant=False), 2)
    params = ParamSet(rng.uniform(0, 6, model.n_theta), [0, 0], [0, 1, 0])
    x = np.array([[0.4]])
    grad = full_gradient(model, params, x, predict(model, params, x))
    for block in (grad.d_theta, grad.d_combine, grad.d_poly):
        np.testing.assert_allclose(block, 0.0, atol=1e-15)


def test_empty_batch():
    model = _single_ry_model()
    with pytest.raises(UsageError):
        full_gradient(model, ParamSet([0.0, 0.0], [0, 0], [0, 1]), np.zeros((0, 1)), np.zeros(0))


def test_shot_gradient_is_unbiased_ish(rng):
    model, params, x, y = random_model(np.random.default_rng(5))
    exact = loss_and_gradient(model, params, x, y)[1].d_theta
    noisy = loss_and_gradient(model, params, x, y, shots=400_000, rng=rng)[1].d_theta
    assert np.max(np.abs(noisy - exact)) < 0.05 * max(1.0, np.max(np.abs(exact)))
