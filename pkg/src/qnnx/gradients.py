"""Loss gradients: parameter shift for circuit angles, chain rule for readout weights."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import measurement as meas
from .embedding import embed_batch
from .errors import ConfigurationError, UsageError
from .model import ModelSpec, ParamSet, qubit_expectations

SHIFT = np.pi / 2
LOSSES = ("mse",)


@dataclass(frozen=True)
class GradientVector:
    d_theta: np.ndarray
    d_combine: np.ndarray
    d_poly: np.ndarray

    @property
    def d_weights(self) -> np.ndarray:
        return np.concatenate([self.d_combine, self.d_poly])

    def trainable_vector(self, model: ModelSpec) -> np.ndarray:
        parts = [self.d_theta]
        if model.plan.redundant:
            parts.append(self.d_combine)
        if model.train_poly:
            parts.append(self.d_poly)
        return np.concatenate(parts)


def shifted_thetas(theta: np.ndarray) -> np.ndarray:
    """``(P, 2P+1)`` block: column 0 is ``theta``, then every +pi/2 shift, then every -pi/2."""
    theta = np.asarray(theta, dtype=np.float64)
    eye = np.eye(theta.size)
    return theta[:, None] + np.hstack([np.zeros((theta.size, 1)), SHIFT * eye, -SHIFT * eye])


def expectation_jacobian(model: ModelSpec, theta: np.ndarray, psi_in: np.ndarray,
                         shots: int = 0, rng: np.random.Generator | None = None):
    """Expectations ``(N, n)`` and their angle derivatives ``(N, n, P)``.

    With ``shots`` every circuit evaluation, shifted ones included, is replaced
    by a finite-shot estimate.
    """
    n_theta = theta.size
    z_all = qubit_expectations(model, shifted_thetas(theta), psi_in)  # (2P+1, N, n)
    if shots:
        z_all = meas.sample_expectation(z_all, shots, rng or np.random.default_rng())
    z = z_all[0]
    dz = (z_all[1:1 + n_theta] - z_all[1 + n_theta:]) / 2.0
    return z, np.moveaxis(dz, 0, -1)


def shift_gradient(model: ModelSpec, params: ParamSet, x) -> np.ndarray:
    """d<Z_q>/d theta_j for each measured qubit ``q``; shape ``(len(measured), P)``."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    psi = embed_batch(x[None, :], model.embedding)
    _, dz = expectation_jacobian(model, params.theta, psi)
    return dz[0, list(model.plan.measured_qubits), :]


def loss_and_gradient(model: ModelSpec, params: ParamSet, x, y, loss: str = "mse",
                      shots: int = 0, rng: np.random.Generator | None = None):
    """Mean loss over the batch and its gradient with respect to every parameter block.

    Fixed blocks (combine weights without redundant measurement, a pinned
    polynomial) still receive their gradient; the trainer ignores them.
    """
    if loss not in LOSSES:
        raise ConfigurationError(f"loss must be one of {LOSSES}")
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.shape[0] == 0:
        raise UsageError("gradient of an empty batch")
    if x.shape[0] != y.size:
        raise UsageError(f"{x.shape[0]} inputs but {y.size} targets")
    params.check(model)

    psi = embed_batch(x, model.embedding)
    z, dz = expectation_jacobian(model, params.theta, psi, shots, rng)
    qubits = list(model.plan.measured_qubits)
    zq, dzq = z[:, qubits], dz[:, qubits, :]

    c = meas.combine(z, model.plan, params.combine_w)
    f = meas.post_measurement(c, params.poly_w)
    residual = f - y
    n = y.size
    dl_df = 2.0 * residual / n

    powers = c[:, None] ** np.arange(params.poly_w.size)[None, :]
    d_poly = dl_df @ powers
    dl_dc = dl_df * meas.post_measurement_derivative(c, params.poly_w)

    if model.plan.redundant:
        w = params.combine_w[:-1]
        d_combine = np.append(dl_dc @ zq, dl_dc.sum())
        dc_dtheta = np.einsum("k,nkp->np", w, dzq)
    else:
        d_combine = np.zeros_like(params.combine_w)
        dc_dtheta = dzq[:, 0, :]
    d_theta = dl_dc @ dc_dtheta
    return float(np.mean(residual**2)), GradientVector(d_theta, d_combine, d_poly)


def full_gradient(model: ModelSpec, params: ParamSet, x, y, loss: str = "mse") -> GradientVector:
    return loss_and_gradient(model, params, x, y, loss)[1]
