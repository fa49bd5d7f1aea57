"""Entanglement witnessing for multimode Gaussian states by the partial scaling criterion."""

__version__ = "1.0.0"
