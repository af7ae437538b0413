"""Cluster product states: expectation values, cluster-local circuit
application, dense diagonalization and fidelity decomposition.

A :class:`ClusterState` is one normalized dense statevector per cluster;
the full state is their tensor product, which never has to be formed for
energies because every Pauli string factorizes over clusters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, dense
from .errors import CapExceededError, DimensionMismatchError
from .gates import ROTATION, Circuit, Gate, Partition
from .pauli import PauliSum, PauliTerm

DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class ClusterState:
    """Normalized product state, one complex128 vector per cluster."""

    partition: Partition
    vectors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.vectors) != self.partition.n_clusters:
            raise DimensionMismatchError(
                f"{len(self.vectors)} vectors for {self.partition.n_clusters} clusters"
            )
        fixed = []
        for qubits, vec in zip(self.partition.clusters, self.vectors):
            vec = np.asarray(vec, dtype=np.complex128)
            if vec.shape != (1 << len(qubits),):
                raise DimensionMismatchError(
                    f"cluster {qubits} needs a vector of length {1 << len(qubits)}"
                )
            norm = float(np.linalg.norm(vec))
            if abs(norm - 1.0) > 1e-8:
                raise ValueError(f"cluster vector norm {norm} is not 1")
            vec = vec / norm
            vec.setflags(write=False)
            fixed.append(vec)
        object.__setattr__(self, "vectors", tuple(fixed))

    @classmethod
    def zero_state(cls, partition: Partition) -> "ClusterState":
        return cls(
            partition,
            tuple(
                dense.basis_state(len(qubits)) for qubits in partition.clusters
            ),
        )

    @classmethod
    def random_state(
        cls, partition: Partition, rng: np.random.Generator
    ) -> "ClusterState":
        vecs = []
        for qubits in partition.clusters:
            dim = 1 << len(qubits)
            v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            vecs.append(v / np.linalg.norm(v))
        return cls(partition, tuple(vecs))

    def replace_cluster(self, cid: int, vec: np.ndarray) -> "ClusterState":
        vecs = list(self.vectors)
        vecs[cid] = vec
        return ClusterState(self.partition, tuple(vecs))

    def dense_vector(self, cap: int = dense.FEASIBILITY_CAP) -> np.ndarray:
        return dense.embed_product_state(self.partition, list(self.vectors), cap)


class ClusteredTerms:
    """Kernel-ready restriction of a Pauli sum onto a partition.

    Per cluster j, term k restricts to a Hermitian local string with masks
    (local_x[j][k], local_z[j][k]); the phase split is exact because the
    identity i**pc(x&z) = prod_j i**pc(x_j&z_j) holds for disjoint masks.
    """

    __slots__ = ("n_terms", "coeffs", "local_x", "local_z", "partition")

    def __init__(self, h: PauliSum, partition: Partition) -> None:
        if h.n_qubits != partition.n_qubits:
            raise DimensionMismatchError(
                f"operator on {h.n_qubits} qubits, partition on {partition.n_qubits}"
            )
        self.partition = partition
        items = list(h.raw_items())
        self.n_terms = len(items)
        self.coeffs = np.array([c for _, c in items], dtype=np.complex128)
        self.local_x = []
        self.local_z = []
        for qubits in partition.clusters:
            lxs = np.empty(self.n_terms, dtype=np.uint64)
            lzs = np.empty(self.n_terms, dtype=np.uint64)
            for k, ((x, z), _) in enumerate(items):
                lx = 0
                lz = 0
                for i, q in enumerate(qubits):
                    lx |= ((x >> q) & 1) << i
                    lz |= ((z >> q) & 1) << i
                lxs[k] = lx
                lzs[k] = lz
            self.local_x.append(lxs)
            self.local_z.append(lzs)

    def cluster_values(self, state: ClusterState) -> list[np.ndarray]:
        """Per-cluster local expectations of every term."""
        return [
            _kernels.expval_batch(state.vectors[j], self.local_x[j], self.local_z[j])
            for j in range(len(self.local_x))
        ]

    def energy_from_values(self, values: list[np.ndarray]) -> float:
        prod = self.coeffs.copy()
        for vals in values:
            prod *= vals
        return float(np.sum(prod).real)

    def expectation(self, state: ClusterState) -> float:
        return self.energy_from_values(self.cluster_values(state))

    def reduced_masks(
        self, values: list[np.ndarray], cid: int
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Unique local (x, z) masks on cluster cid with contracted coefficients.

        Coefficient of term k is scaled by the product of the other clusters'
        local expectations, then equal masks are merged.
        """
        weights = self.coeffs.copy()
        for j, vals in enumerate(values):
            if j != cid:
                weights *= vals
        size = len(self.partition.clusters[cid])
        packed = (self.local_x[cid] << np.uint64(size)) | self.local_z[cid]
        uniq, inverse = np.unique(packed, return_inverse=True)
        merged = np.zeros(len(uniq), dtype=np.complex128)
        np.add.at(merged, inverse, weights)
        xs = (uniq >> np.uint64(size)).astype(np.uint64)
        zs = (uniq & np.uint64((1 << size) - 1)).astype(np.uint64)
        return xs, zs, merged


def expectation(h: PauliSum, state: ClusterState) -> float:
    """<s|h|s> for a cluster product state (real part; h is Hermitian here)."""
    return ClusteredTerms(h, state.partition).expectation(state)


# -- cluster-local circuit application ------------------------------------------


def _local_slots(gate: Gate, qubits: tuple[int, ...]) -> tuple[int, ...]:
    pos = {q: i for i, q in enumerate(qubits)}
    if gate.kind in ("CX", "CY", "CZ"):
        return (pos[gate.control],) + tuple(pos[t] for t in gate.targets)
    return tuple(pos[t] for t in gate.targets)


def apply_circuit(state: ClusterState, circuit: Circuit) -> ClusterState:
    """Apply a circuit whose every gate stays inside one cluster."""
    partition = state.partition
    if circuit.n_qubits != partition.n_qubits:
        raise DimensionMismatchError("circuit register differs from partition")
    vecs = list(state.vectors)
    for gate in circuit.gates:
        cids = {partition.cluster_of(q) for q in gate.qubits}
        if len(cids) != 1:
            raise ValueError(
                f"{gate.kind} gate on {gate.qubits} spans clusters {sorted(cids)}"
            )
        cid = cids.pop()
        qubits = partition.clusters[cid]
        size = len(qubits)
        if gate.kind == ROTATION:
            gen: PauliTerm = gate.generator
            lx = 0
            lz = 0
            pos = {q: i for i, q in enumerate(qubits)}
            for q in gate.targets:
                lx |= ((gen.x_mask >> q) & 1) << pos[q]
                lz |= ((gen.z_mask >> q) & 1) << pos[q]
            half = 0.5 * gate.angle
            pv = _kernels.apply_pauli(vecs[cid], lx, lz)
            vecs[cid] = np.cos(half) * vecs[cid] - 1j * np.sin(half) * pv
        else:
            slots = _local_slots(gate, qubits)
            _, mat = dense.gate_local_unitary(gate)
            vecs[cid] = dense.apply_local_matrix(vecs[cid], slots, mat, size)
    return ClusterState(partition, tuple(vecs))


# -- dense diagonalization -------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """Full dense eigendecomposition with degenerate levels grouped."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column i belongs to eigenvalues[i]
    groups: tuple[tuple[int, ...], ...]

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])


def exact_ground(
    h: PauliSum,
    cap: int = dense.FEASIBILITY_CAP,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> Spectrum:
    """Dense spectrum of h (ascending) with degeneracy groups.

    Cost is 8**n_qubits; the cap raises CapExceededError first.
    """
    if h.n_qubits > cap:
        raise CapExceededError(
            f"exact diagonalization of {h.n_qubits} qubits exceeds cap {cap}"
        )
    mat = dense.paulisum_dense(h, cap)
    if np.max(np.abs(mat - mat.conj().T)) > 1e-9 * max(1.0, h.one_norm()):
        raise ValueError("operator is not Hermitian; no real spectrum")
    vals, vecs = np.linalg.eigh(mat)
    groups: list[tuple[int, ...]] = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[start] > degeneracy_tol:
            groups.append(tuple(range(start, i)))
            start = i
    return Spectrum(vals, vecs, tuple(groups))


# -- fidelity decomposition --------------------------------------------------------


@dataclass(frozen=True)
class FidelityRow:
    group_index: int
    eigenvalue: float
    fidelity: float


@dataclass(frozen=True)
class FidelityTable:
    rows: tuple[FidelityRow, ...]

    @property
    def total(self) -> float:
        return float(sum(r.fidelity for r in self.rows))

    @property
    def ground_fidelity(self) -> float:
        return self.rows[0].fidelity

    def to_csv(self) -> str:
        lines = ["group_index,eigenvalue,fidelity"]
        for r in self.rows:
            lines.append(f"{r.group_index},{r.eigenvalue:.17g},{r.fidelity:.17g}")
        return "\n".join(lines) + "\n"


def fidelity_table(
    state: ClusterState,
    circuit: Circuit | None,
    spectrum: Spectrum,
    cap: int = dense.FEASIBILITY_CAP,
) -> FidelityTable:
    """Overlap weights of the (optionally circuit-evolved) product state
    with each degenerate eigenspace; unitarity makes them sum to 1."""
    psi = state.dense_vector(cap)
    if circuit is not None:
        psi = dense.apply_circuit_statevector(psi, circuit)
    amps = spectrum.eigenvectors.conj().T @ psi
    weights = np.abs(amps) ** 2
    rows = []
    for gi, group in enumerate(spectrum.groups):
        fid = float(sum(weights[i] for i in group))
        rows.append(
            FidelityRow(gi, float(spectrum.eigenvalues[group[0]]), fid)
        )
    return FidelityTable(tuple(rows))
