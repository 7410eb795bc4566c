"""Localizable entanglement of 1D spin chains.

Compute how much two-site entanglement local measurements on the rest of a
chain can concentrate on a chosen pair: exactly for short chains, through
matrix-product contraction and Metropolis sampling for long ones, and via
correlation-function bounds throughout.
"""

from . import cli, correlations, hilbert, le, measures, mps
from .errors import LeChainError

__all__ = ["cli", "correlations", "hilbert", "le", "measures", "mps", "LeChainError"]

__version__ = "0.1.0"
