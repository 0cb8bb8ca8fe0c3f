"""
Why the arcsin embedding struggles with sin(pi x)
=================================================

One arcsin-embedded qubit can only output ``a x + b sqrt(1 - x^2) + c``.
The best such fit to ``sin(pi x)`` is computed here in closed form, then
compared with trained models on ``sin(2 pi x)``.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from qnnx import analysis, data, trainer
from qnnx.model import predict

# %%
# The error floor needs no training: it is a least-squares fit.
print("best arcsin MAE on sin(pi x):", round(analysis.arcsin_error_floor("f1v1"), 4))
print("on sqrt(1-x^2):", analysis.arcsin_error_floor(lambda v: np.sqrt(1 - v**2)))

# %%
# One sinusoidal qubit, trained, gets far below that floor.
report = trainer.run("qnn-exc5", "f1v1", trainer.TrainConfig(qubits=1), seed=0)
print("trained one-qubit sinusoidal MAE:", f"{report.test_mae:.2e}")

# %%
# On the faster sin(2 pi x) the QCL-style model, two qubits and meshgrid data,
# still fails while the sinusoidal model with the same readout succeeds.
test = data.evaluation_set("f1v2")
fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot(test.inputs[:, 0], test.targets, "k", label="target")
for variant in ("qcl", "qnn-exc5"):
    report = trainer.run(variant, "f1v2", seed=0)
    model, _ = trainer.make_variant(variant, "f1v2")
    y = predict(model, report.param_set(), test.inputs)
    ax.plot(test.inputs[:, 0], y, "--", label=f"{variant} (MAE {report.test_mae:.2g})")
    print(variant, "test MAE", f"{report.test_mae:.3g}")
ax.legend()
ax.set_xlabel("x")
fig.savefig("qcl_vs_sinusoidal.svg")
