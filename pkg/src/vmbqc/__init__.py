"""Variational cluster-state MBQC as a trainable generative model."""

from . import cqca, learn, mbqc, models, pauli, sim, targets

__all__ = ["cqca", "learn", "mbqc", "models", "pauli", "sim", "targets"]
__version__ = "0.1.0"
