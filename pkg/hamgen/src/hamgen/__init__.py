"""Molecular qubit-Hamiltonian generator for small Gaussian-basis systems.

Builds restricted mean-field solutions from built-in s-type Gaussian basis
tables, restricts to an active spin-orbital window, applies a fermion-to-
qubit encoding, and writes the result in the plain-text Pauli-sum format.
"""

__version__ = "0.1.0"

from .errors import (
    HamgenError,
    SCFConvergenceError,
    SpecError,
    ToolchainMissingError,
)
from .generate import MoleculeSpec, dumps, generate, parse_geometry

__all__ = [
    "HamgenError",
    "MoleculeSpec",
    "SCFConvergenceError",
    "SpecError",
    "ToolchainMissingError",
    "__version__",
    "dumps",
    "generate",
    "parse_geometry",
]
