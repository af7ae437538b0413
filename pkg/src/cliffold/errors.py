"""Exception types shared across the package.

Kept deliberately small; anything that is just a bad argument raises a
plain ValueError at the call site.
"""


class ParseError(ValueError):
    """Malformed Hamiltonian text, circuit JSON or cluster spec."""


class DimensionMismatchError(ValueError):
    """Operands defined on different qubit counts or outside register range."""


class NotCliffordError(ValueError):
    """A Clifford-only code path received a non-Clifford gate."""


class CapExceededError(ValueError):
    """Dense diagonalization requested above the feasibility cap."""


class ConvergenceError(RuntimeError):
    """An iterative solve exhausted its budget without meeting tolerance."""
