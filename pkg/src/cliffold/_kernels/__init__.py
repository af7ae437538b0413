"""Hot-loop kernels with a compiled core and a pure-numpy fallback.

The compiled Cython extension is used when it imported cleanly; setting
``CLIFFOLD_PURE_PYTHON=1`` forces the numpy fallback.  Both backends share
one contract (see _py docstring): Hermitian mask-pair semantics on
little-endian complex128 vectors.

``BACKEND`` names the active implementation ("cython" or "numpy").
"""

from __future__ import annotations

import os

from . import _py

BACKEND = "numpy"
expval = _py.expval
expval_batch = _py.expval_batch
matvec = _py.matvec
apply_pauli = _py.apply_pauli

if os.environ.get("CLIFFOLD_PURE_PYTHON") != "1":
    try:
        from . import _cy  # type: ignore[attr-defined]

        BACKEND = "cython"
        expval = _cy.expval
        expval_batch = _cy.expval_batch
        matvec = _cy.matvec
        apply_pauli = _cy.apply_pauli
    except ImportError:
        pass

__all__ = ["BACKEND", "expval", "expval_batch", "matvec", "apply_pauli"]
