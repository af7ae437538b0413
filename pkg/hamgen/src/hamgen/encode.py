"""Jordan-Wigner encoding of an active-space electronic Hamiltonian.

Spin orbitals map to qubits as ``2 * spatial + spin`` (spin 0/1), each qubit
holds one occupation with the occupied state on the -1 eigenvector of Z, and
the parity strings run over all lower-indexed qubits.  Pauli words are kept
as (x_mask, z_mask) bit pairs per qubit: (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
"""

from __future__ import annotations

import numpy as np

# (left_axis, right_axis) -> (product_axis, phase); axes 0..3 = I, X, Y, Z
_AXIS_MUL = {
    (0, 0): (0, 1.0),
    (0, 1): (1, 1.0),
    (0, 2): (2, 1.0),
    (0, 3): (3, 1.0),
    (1, 0): (1, 1.0),
    (2, 0): (2, 1.0),
    (3, 0): (3, 1.0),
    (1, 1): (0, 1.0),
    (2, 2): (0, 1.0),
    (3, 3): (0, 1.0),
    (1, 2): (3, 1.0j),
    (2, 1): (3, -1.0j),
    (2, 3): (1, 1.0j),
    (3, 2): (1, -1.0j),
    (3, 1): (2, 1.0j),
    (1, 3): (2, -1.0j),
}

_AXIS_FROM_BITS = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}
_BITS_FROM_AXIS = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}


def _mul_words(x1: int, z1: int, x2: int, z2: int):
    """Product of two Hermitian Pauli words as (x, z, phase)."""
    x_out = 0
    z_out = 0
    phase = 1.0 + 0.0j
    support = x1 | z1 | x2 | z2
    q = 0
    while support >> q:
        bit = 1 << q
        a1 = _AXIS_FROM_BITS[(1 if x1 & bit else 0, 1 if z1 & bit else 0)]
        a2 = _AXIS_FROM_BITS[(1 if x2 & bit else 0, 1 if z2 & bit else 0)]
        a3, ph = _AXIS_MUL[(a1, a2)]
        phase *= ph
        xb, zb = _BITS_FROM_AXIS[a3]
        if xb:
            x_out |= bit
        if zb:
            z_out |= bit
        q += 1
    return x_out, z_out, phase


def ladder(index: int, *, dagger: bool) -> list[tuple[int, int, complex]]:
    """Creation/annihilation operator for one spin orbital as Pauli words."""
    parity = (1 << index) - 1
    x = 1 << index
    sign = -1.0j if dagger else 1.0j
    # (X -+ iY)/2 behind the parity string; Y carries both mask bits
    return [(x, parity, 0.5), (x, parity | x, 0.5 * sign)]


def _multiply_into(
    left: list[tuple[int, int, complex]],
    right: list[tuple[int, int, complex]],
) -> list[tuple[int, int, complex]]:
    out: dict[tuple[int, int], complex] = {}
    for x1, z1, c1 in left:
        for x2, z2, c2 in right:
            x, z, ph = _mul_words(x1, z1, x2, z2)
            key = (x, z)
            out[key] = out.get(key, 0.0) + c1 * c2 * ph
    return [(x, z, c) for (x, z), c in out.items() if abs(c) > 1.0e-14]


def _product(ops: list[list[tuple[int, int, complex]]]):
    acc = ops[0]
    for op in ops[1:]:
        acc = _multiply_into(acc, op)
    return acc


def encode_hamiltonian(
    h: np.ndarray, g: np.ndarray, e_core: float
) -> tuple[int, dict[tuple[int, int], float]]:
    """Qubit Hamiltonian for one- and two-body integrals plus a core shift.

    ``h``/``g`` are spatial-orbital integrals (chemists' order for ``g``);
    both spins are expanded here.  Returns the qubit count and a mapping
    from (x_mask, z_mask) words to real coefficients.
    """
    n_spatial = h.shape[0]
    n_qubits = 2 * n_spatial
    acc: dict[tuple[int, int], complex] = {(0, 0): complex(e_core)}

    def add(words: list[tuple[int, int, complex]], scale: complex) -> None:
        for x, z, c in words:
            key = (x, z)
            acc[key] = acc.get(key, 0.0) + scale * c

    for p in range(n_spatial):
        for q in range(n_spatial):
            t = h[p, q]
            if abs(t) < 1.0e-14:
                continue
            for spin in (0, 1):
                words = _product(
                    [
                        ladder(2 * p + spin, dagger=True),
                        ladder(2 * q + spin, dagger=False),
                    ]
                )
                add(words, t)

    for p in range(n_spatial):
        for q in range(n_spatial):
            for r in range(n_spatial):
                for s in range(n_spatial):
                    v = g[p, q, r, s]
                    if abs(v) < 1.0e-14:
                        continue
                    for sp in (0, 1):
                        for tau in (0, 1):
                            i = 2 * p + sp
                            j = 2 * r + tau
                            k = 2 * s + tau
                            l = 2 * q + sp
                            if i == j or k == l:
                                # Pauli products would still cancel; skip early
                                continue
                            words = _product(
                                [
                                    ladder(i, dagger=True),
                                    ladder(j, dagger=True),
                                    ladder(k, dagger=False),
                                    ladder(l, dagger=False),
                                ]
                            )
                            add(words, 0.5 * v)

    terms: dict[tuple[int, int], float] = {}
    for key, coeff in acc.items():
        if abs(coeff) < 1.0e-12:
            continue
        if abs(coeff.imag) > 1.0e-10:
            raise AssertionError(
                f"non-Hermitian accumulation: imag {coeff.imag:.3e} on {key}"
            )
        terms[key] = float(coeff.real)
    return n_qubits, terms


def word_label(x: int, z: int) -> str:
    """Text-format factor list for one Pauli word; identity spells ``I``."""
    if not (x | z):
        return "I"
    parts = []
    q = 0
    support = x | z
    while support >> q:
        bit = 1 << q
        if x & bit and z & bit:
            parts.append(f"Y{q}")
        elif x & bit:
            parts.append(f"X{q}")
        elif z & bit:
            parts.append(f"Z{q}")
        q += 1
    return " ".join(parts)
