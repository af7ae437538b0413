"""Independent dense linear-algebra oracles.

Everything here is rebuilt from numpy/scipy primitives: kron chains,
expm, matrix-unit embeddings, full-matrix eigensolves.  None of the
package's own dense helpers are reused, so agreement between the two
paths is real evidence rather than a tautology.

Conventions required to interpret the package's data (not its code):
basis index bit q is qubit q, and a k-qubit local matrix puts
targets[i] at bit i of its local index.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
P0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
P1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)

HADAMARD = (X + Z) / np.sqrt(2.0)
S_GATE = np.diag([1.0, 1.0j]).astype(complex)

GATE_1Q = {
    "H": HADAMARD,
    "S": S_GATE,
    "Sdg": S_GATE.conj().T,
    "X": X,
    "Y": Y,
    "Z": Z,
}

CONTROLLED_PAULI = {"CX": X, "CY": Y, "CZ": Z}


def embed_1q(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Kron chain placing ``op`` on one qubit; qubit 0 is least significant."""
    full = np.array([[1.0 + 0.0j]])
    for q in range(n):
        full = np.kron(op if q == qubit else I2, full)
    return full


def dense_string(n: int, x: int, z: int) -> np.ndarray:
    """Hermitian Pauli string for an (x, z) mask pair (Y carries its own i)."""
    full = np.array([[1.0 + 0.0j]])
    for q in range(n):
        bits = ((x >> q) & 1, (z >> q) & 1)
        f = {(0, 0): I2, (1, 0): X, (1, 1): Y, (0, 1): Z}[bits]
        full = np.kron(f, full)
    return full


def dense_term(term) -> np.ndarray:
    """coefficient * i**phase_exp * Hermitian string."""
    phase = 1.0j ** (term.phase_exp % 4)
    return term.coefficient * phase * dense_string(
        term.n_qubits, term.x_mask, term.z_mask
    )


def dense_sum(h) -> np.ndarray:
    dim = 1 << h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for (x, z), c in h.raw_items():
        out += c * dense_string(h.n_qubits, x, z)
    return out


def embed_local(mat: np.ndarray, targets, n: int) -> np.ndarray:
    """Embed a 2^k local matrix by expanding it into matrix units."""
    dim = 1 << n
    full = np.zeros((dim, dim), dtype=complex)
    for a in range(mat.shape[0]):
        for b in range(mat.shape[1]):
            v = mat[a, b]
            if v == 0:
                continue
            op = np.eye(dim, dtype=complex)
            for i, t in enumerate(targets):
                unit = np.zeros((2, 2), dtype=complex)
                unit[(a >> i) & 1, (b >> i) & 1] = 1.0
                op = op @ embed_1q(unit, t, n)
            full += v * op
    return full


def dense_gate(gate, n: int) -> np.ndarray:
    """Unitary of one gate on the full register."""
    kind = gate.kind
    if kind in GATE_1Q:
        return embed_1q(GATE_1Q[kind], gate.targets[0], n)
    if kind in CONTROLLED_PAULI:
        c, t = gate.control, gate.targets[0]
        return embed_1q(P0, c, n) + embed_1q(P1, c, n) @ embed_1q(
            CONTROLLED_PAULI[kind], t, n
        )
    if kind == "SWAP":
        a, b = gate.targets
        return 0.5 * (
            np.eye(1 << n, dtype=complex)
            + embed_1q(X, a, n) @ embed_1q(X, b, n)
            + embed_1q(Y, a, n) @ embed_1q(Y, b, n)
            + embed_1q(Z, a, n) @ embed_1q(Z, b, n)
        )
    if kind == "PauliRotation":
        g = dense_term(gate.generator)
        return expm(-0.5j * gate.angle * g)
    if kind == "GeneralGate":
        u_local = expm(-0.5j * gate.angle * np.asarray(gate.generator))
        return embed_local(u_local, gate.targets, n)
    raise ValueError(f"oracle has no unitary for kind {kind!r}")


def dense_circuit(circuit) -> np.ndarray:
    """Full unitary; gates[0] acts on states first."""
    n = circuit.n_qubits
    u = np.eye(1 << n, dtype=complex)
    for g in circuit.gates:
        u = dense_gate(g, n) @ u
    return u


def conjugated(h_dense: np.ndarray, u: np.ndarray) -> np.ndarray:
    return u.conj().T @ h_dense @ u


def ground_energy(h_dense: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(h_dense)[0])


# -- random instance generators (all seeded by the caller's Generator) ----------


def random_pauli_sum(rng: np.random.Generator, n: int, n_terms: int,
                     real: bool = True, include_identity: bool = False):
    """Random Hermitian operator with distinct non-identity strings."""
    from cliffold import PauliSum, PauliTerm

    # cannot ask for more distinct strings than the register offers
    available = (1 << (2 * n)) - (0 if include_identity else 1)
    n_terms = min(n_terms, available)
    seen = set()
    terms = []
    while len(terms) < n_terms:
        x = int(rng.integers(1 << n))
        z = int(rng.integers(1 << n))
        if (x, z) == (0, 0) and not include_identity:
            continue
        if (x, z) in seen:
            continue
        seen.add((x, z))
        c = float(rng.normal())
        if not real:
            c = complex(c, float(rng.normal()))
        terms.append(PauliTerm(n, x, z, 0, c))
    return PauliSum(n, terms)


def random_clifford_gate(rng: np.random.Generator, n: int):
    from cliffold import Gate, PauliTerm, rotation

    kinds = ["H", "S", "Sdg", "X", "Y", "Z", "rot1"]
    if n >= 2:
        kinds += ["CX", "CY", "CZ", "SWAP", "rot2"]
    kind = kinds[rng.integers(len(kinds))]
    if kind in ("H", "S", "Sdg", "X", "Y", "Z"):
        return Gate(kind, targets=(int(rng.integers(n)),))
    if kind in ("CX", "CY", "CZ"):
        c, t = (int(q) for q in rng.choice(n, size=2, replace=False))
        return Gate(kind, targets=(t,), control=c)
    if kind == "SWAP":
        a, b = (int(q) for q in rng.choice(n, size=2, replace=False))
        return Gate("SWAP", targets=(a, b))
    weight = 1 if kind == "rot1" else 2
    qs = sorted(int(q) for q in rng.choice(n, size=weight, replace=False))
    label = " ".join(f"{'XYZ'[rng.integers(3)]}{q}" for q in qs)
    angle = float((rng.integers(3) + 1) * np.pi / 2)
    return rotation(PauliTerm.from_label(label, n), angle)


def random_clifford_circuit(rng: np.random.Generator, n: int, n_gates: int):
    from cliffold import Circuit

    return Circuit(n, tuple(random_clifford_gate(rng, n) for _ in range(n_gates)))


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
