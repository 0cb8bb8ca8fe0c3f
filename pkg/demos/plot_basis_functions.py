"""
What functions can a small circuit produce?
===========================================

A qubit rotated by ``RY(x)`` and then by any fixed circuit reads out
``c0 + c1 cos x + c2 sin x`` in its Z expectation. Feeding ``arcsin x``
instead gives ``c0 + c1 x + c2 sqrt(1 - x^2)``. Here we check both claims
numerically and watch the dictionary grow as qubits are added.
"""

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from qnnx import analysis
from qnnx.embedding import arcsin, sinusoidal

x = analysis.grid(1, 201)
rng = np.random.default_rng(0)

# %%
# Five random circuits on one qubit, each fitted by three basis functions.
# The least-squares residual is at rounding level.
outputs = analysis.random_outputs(sinusoidal(1), x, 5, rng)
features = analysis.feature_matrix(analysis.BF_S, x)
print("residual against {1, sin x, cos x}:", analysis.lstsq_residual(features, outputs).max())

fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot(x[:, 0], outputs)
ax.set_xlabel("x")
ax.set_ylabel("<Z>")
ax.set_title("random one-qubit circuits")

# %%
# Swapping in the arcsin embedding changes the dictionary, not its size.
res = analysis.span_test(arcsin(1), analysis.BF_A, n_trials=50)
print("arcsin residual against {1, x, sqrt(1-x^2)}:", res.max_residual)

# %%
# Measuring either qubit of a two-qubit circuit lands in the same nine-element
# product dictionary, which is why combining both readouts adds freedom in
# the coefficients but no new functions.
for qubit in (0, 1):
    res = analysis.span_test(sinusoidal(2, 2), analysis.BF_2, n_trials=50, qubit=qubit)
    print(f"<Z_{qubit}> residual against the 9 products:", res.max_residual)

# %%
# The dimension of the spanned space triples with every qubit.
for n in (1, 2, 3):
    print(f"{n} qubit(s): rank {analysis.basis_rank(n)}")

# %%
# A quadratic post-processing step adds sin x cos x, sin^2 x and cos^2 x.
res = analysis.span_test(sinusoidal(1), analysis.BF_P, n_trials=50, poly_degree=2)
print("squared readout residual against the 6-element dictionary:", res.max_residual)

fig.savefig("basis_functions.svg")
