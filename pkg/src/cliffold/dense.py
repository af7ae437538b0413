"""Dense matrices and statevectors for small registers.

Index convention (package-wide): basis-state index bit q is qubit q, i.e.
little-endian, so qubit 0 varies fastest.  Local gate matrices index their
slot tuple the same way: slot i (``targets[i]``, with a control prepended
for controlled kinds) is bit i of the local row index.

Everything here scales as 2**n and is guarded by ``FEASIBILITY_CAP``;
raise the cap explicitly if you know what you are paying for.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import CapExceededError
from .gates import GENERAL, ROTATION, Circuit, Gate, Partition
from .pauli import PauliSum, PauliTerm

FEASIBILITY_CAP = 14

_IPOW = np.array([1.0, 1.0j, -1.0, -1.0j], dtype=np.complex128)

_SQ = {
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0),
    "S": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def check_cap(n_qubits: int, cap: int = FEASIBILITY_CAP) -> None:
    if n_qubits > cap:
        raise CapExceededError(
            f"dense path requested for {n_qubits} qubits, cap is {cap}"
        )


def basis_state(n_qubits: int, index: int = 0) -> np.ndarray:
    vec = np.zeros(1 << n_qubits, dtype=np.complex128)
    vec[index] = 1.0
    return vec


def pauli_dense(n_qubits: int, x: int, z: int, cap: int = FEASIBILITY_CAP) -> np.ndarray:
    """Dense matrix of the Hermitian string i**popcount(x&z) X^x Z^z."""
    check_cap(n_qubits, cap)
    dim = 1 << n_qubits
    idx = np.arange(dim, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z)).astype(np.int64) & 1)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    phase = _IPOW[(x & z).bit_count() & 3]
    mat[idx ^ np.uint64(x), idx] = phase * signs
    return mat


def paulisum_dense(h: PauliSum, cap: int = FEASIBILITY_CAP) -> np.ndarray:
    check_cap(h.n_qubits, cap)
    dim = 1 << h.n_qubits
    idx = np.arange(dim, dtype=np.uint64)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for (x, z), c in h.raw_items():
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z)).astype(np.int64) & 1)
        mat[idx ^ np.uint64(x), idx] += (c * _IPOW[(x & z).bit_count() & 3]) * signs
    return mat


# -- local gate matrices -------------------------------------------------------


def _controlled_local(kind: str) -> np.ndarray:
    # slots (control, target): control is local bit 0
    mat = np.zeros((4, 4), dtype=np.complex128)
    for idx in range(4):
        c = idx & 1
        t = (idx >> 1) & 1
        if not c:
            mat[idx, idx] = 1.0
        elif kind == "CX":
            mat[c | ((t ^ 1) << 1), idx] = 1.0
        elif kind == "CY":
            mat[c | ((t ^ 1) << 1), idx] = 1.0j if t == 0 else -1.0j
        elif kind == "CZ":
            mat[idx, idx] = -1.0 if t else 1.0
        else:
            raise ValueError(f"not a controlled kind: {kind}")
    return mat


_SWAP_LOCAL = np.zeros((4, 4), dtype=np.complex128)
for _idx in range(4):
    _SWAP_LOCAL[((_idx & 1) << 1) | ((_idx >> 1) & 1), _idx] = 1.0
del _idx


@lru_cache(maxsize=None)
def _controlled_cached(kind: str) -> np.ndarray:
    mat = _controlled_local(kind)
    mat.setflags(write=False)
    return mat


def generator_matrix_local(gate: Gate) -> np.ndarray:
    """Hermitian local generator of a rotation-style gate over its slots."""
    if gate.kind == GENERAL:
        return np.asarray(gate.generator)
    if gate.kind == ROTATION:
        gen: PauliTerm = gate.generator
        k = len(gate.targets)
        lx = 0
        lz = 0
        for i, q in enumerate(gate.targets):
            lx |= ((gen.x_mask >> q) & 1) << i
            lz |= ((gen.z_mask >> q) & 1) << i
        return pauli_dense(k, lx, lz, cap=k)
    raise ValueError(f"{gate.kind} has no generator")


def gate_local_unitary(gate: Gate) -> tuple[tuple[int, ...], np.ndarray]:
    """(slots, U_local) with slot i at local index bit i."""
    if gate.kind in _SQ:
        return gate.targets, _SQ[gate.kind]
    if gate.kind in ("CX", "CY", "CZ"):
        return (gate.control,) + gate.targets, _controlled_cached(gate.kind)
    if gate.kind == "SWAP":
        return gate.targets, _SWAP_LOCAL
    if gate.kind in (ROTATION, GENERAL):
        gen = generator_matrix_local(gate)
        vals, vecs = np.linalg.eigh(gen)
        u = (vecs * np.exp(-0.5j * gate.angle * vals)) @ vecs.conj().T
        return gate.targets, u
    raise ValueError(f"unknown gate kind {gate.kind}")


# -- statevector evolution -----------------------------------------------------


def apply_local_matrix(
    vec: np.ndarray, slots: tuple[int, ...], mat: np.ndarray, n_qubits: int
) -> np.ndarray:
    """Apply a little-endian local matrix over the given qubit slots."""
    k = len(slots)
    tensor = vec.reshape([2] * n_qubits)
    # C-order reshape puts qubit q on axis n-1-q; reversing the slot list
    # makes the flattened front index little-endian in the slots
    axes = [n_qubits - 1 - q for q in reversed(slots)]
    moved = np.moveaxis(tensor, axes, range(k))
    shape = moved.shape
    flat = moved.reshape(1 << k, -1)
    flat = mat @ flat
    moved = flat.reshape(shape)
    tensor = np.moveaxis(moved, range(k), axes)
    return np.ascontiguousarray(tensor).reshape(-1)


def apply_gate_statevector(vec: np.ndarray, gate: Gate, n_qubits: int) -> np.ndarray:
    if gate.kind == ROTATION:
        gen: PauliTerm = gate.generator
        half = 0.5 * gate.angle
        pv = _kernels.apply_pauli(vec, gen.x_mask, gen.z_mask)
        return math.cos(half) * vec - 1.0j * math.sin(half) * pv
    slots, mat = gate_local_unitary(gate)
    return apply_local_matrix(vec, slots, mat, n_qubits)


def apply_circuit_statevector(vec: np.ndarray, circuit: Circuit) -> np.ndarray:
    out = vec
    for gate in circuit.gates:
        out = apply_gate_statevector(out, gate, circuit.n_qubits)
    return out


def circuit_unitary(circuit: Circuit, cap: int = FEASIBILITY_CAP) -> np.ndarray:
    check_cap(circuit.n_qubits, cap)
    dim = 1 << circuit.n_qubits
    cols = np.eye(dim, dtype=np.complex128)
    for i in range(dim):
        cols[:, i] = apply_circuit_statevector(
            np.ascontiguousarray(cols[:, i]), circuit
        )
    return cols


def embed_product_state(
    partition: Partition, vectors: list[np.ndarray], cap: int = FEASIBILITY_CAP
) -> np.ndarray:
    """Full-register statevector of a cluster product state."""
    n = partition.n_qubits
    check_cap(n, cap)
    idx = np.arange(1 << n, dtype=np.int64)
    full = np.ones(1 << n, dtype=np.complex128)
    for cid, qubits in enumerate(partition.clusters):
        loc = np.zeros(1 << n, dtype=np.int64)
        for i, q in enumerate(qubits):
            loc |= ((idx >> q) & 1) << i
        full *= vectors[cid][loc]
    return full
