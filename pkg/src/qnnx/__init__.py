"""Statevector QNN regression with sinusoidal/arcsin/hybrid embeddings,
redundant measurement and polynomial post-processing."""

from .ansatz import AnsatzSpec, build_circuit, param_count
from .data import Dataset, TargetFunction, eval_target, sample_meshgrid, sample_random
from .embedding import EmbeddingScheme, embed
from .measurement import MeasurementPlan, ReadoutWeights, combined_measurement, pauli_z_expectation, post_measurement
from .model import ModelSpec, ParamSet, forward, init_params, predict
from .statevector import CNOT, RY, RZ, Gate, StateVector, apply_circuit, apply_gate, init_zero
from .trainer import RunReport, TrainConfig, ablate, make_variant, run, train, variance_study

__version__ = "0.1.0"
