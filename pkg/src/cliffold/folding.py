"""Folding circuits into Hamiltonians: H -> U' H U for each gate U
(U' denotes the adjoint), so measuring the folded operator on a bare state
equals measuring the original on the circuit-evolved state.

``fold_circuit`` therefore processes gates in reverse list order: the last
gate acts immediately before measurement, so its transform wraps H first.

Four fold paths:

* discrete Clifford gates: table-driven mask rewriting, one string in ->
  one string out, coefficients exact
* Pauli rotations exp(-i a/2 P): commuting strings pass through; each
  anticommuting string Q becomes cos(a) Q + sin(a) (iPQ); at Clifford
  angles the trig pair is the exact integer (0, +-1)
* projector-generated gates exp(-i a (I - sP)/2): reduce to the rotation
  path with an effective angle (global phase drops out)
* excitation-style generators with g^3 = g: closed six-term expansion in
  cos(a/2), sin(a/2), 1 - cos(a/2)
* anything else Hermitian on <= 3 qubits: dense eigendecomposition of the
  local generator and re-expansion over the local Pauli basis
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dense import pauli_dense
from .errors import NotCliffordError
from .gates import (
    CLIFFORD_1Q,
    CLIFFORD_2Q,
    CONTROLLED,
    GENERAL,
    ROTATION,
    Circuit,
    Gate,
    clifford_angle_index,
)
from .pauli import PauliSum, PauliTerm, _product_phase_exp

_IPOW = (1 + 0j, 1j, -1 + 0j, -1j)

_SNAP_TOL = 1e-12

# U' P U images of single-qubit X and Z under each discrete 1q Clifford
_IMG_1Q: dict[str, dict[str, tuple[str, int]]] = {
    "H": {"X": ("Z0", 1), "Z": ("X0", 1)},
    "S": {"X": ("Y0", -1), "Z": ("Z0", 1)},
    "Sdg": {"X": ("Y0", 1), "Z": ("Z0", 1)},
    "X": {"X": ("X0", 1), "Z": ("Z0", -1)},
    "Y": {"X": ("X0", -1), "Z": ("Z0", -1)},
    "Z": {"X": ("X0", -1), "Z": ("Z0", 1)},
}

# slot 0 = control (or first SWAP target), slot 1 = target
_IMG_2Q: dict[str, dict[tuple[int, str], tuple[str, int]]] = {
    "CX": {
        (0, "X"): ("X0 X1", 1),
        (1, "X"): ("X1", 1),
        (0, "Z"): ("Z0", 1),
        (1, "Z"): ("Z0 Z1", 1),
    },
    "CY": {
        (0, "X"): ("X0 Y1", 1),
        (1, "X"): ("Z0 X1", 1),
        (0, "Z"): ("Z0", 1),
        (1, "Z"): ("Z0 Z1", 1),
    },
    "CZ": {
        (0, "X"): ("X0 Z1", 1),
        (1, "X"): ("Z0 X1", 1),
        (0, "Z"): ("Z0", 1),
        (1, "Z"): ("Z1", 1),
    },
    "SWAP": {
        (0, "X"): ("X1", 1),
        (1, "X"): ("X0", 1),
        (0, "Z"): ("Z1", 1),
        (1, "Z"): ("Z0", 1),
    },
}


@lru_cache(maxsize=None)
def _clifford_table(kind: str) -> dict[tuple[int, int], tuple[int, int, int]]:
    """Mask-pair image table for one discrete Clifford kind.

    The image of a Hermitian string i**pc(x&z) X^x Z^z follows from the
    generator images because conjugation is a homomorphism.
    """
    n_loc = 1 if kind in CLIFFORD_1Q else 2
    images: dict[tuple[int, str], PauliTerm] = {}
    if n_loc == 1:
        for axis, (label, sign) in _IMG_1Q[kind].items():
            images[(0, axis)] = PauliTerm.from_label(label, 1) * sign
    else:
        for (slot, axis), (label, sign) in _IMG_2Q[kind].items():
            images[(slot, axis)] = PauliTerm.from_label(label, 2) * sign
    table: dict[tuple[int, int], tuple[int, int, int]] = {}
    for x in range(1 << n_loc):
        for z in range(1 << n_loc):
            term = PauliTerm(n_loc, 0, 0, phase_exp=(x & z).bit_count())
            for j in range(n_loc):
                if (x >> j) & 1:
                    term = term.multiply(images[(j, "X")])
            for j in range(n_loc):
                if (z >> j) & 1:
                    term = term.multiply(images[(j, "Z")])
            coeff = term.canonical_coefficient()
            sign = int(round(coeff.real))
            if abs(coeff - sign) > 1e-12 or sign not in (-1, 1):
                raise AssertionError(
                    f"Clifford image of ({x},{z}) under {kind} is not +-1 Pauli"
                )
            table[(x, z)] = (term.x_mask, term.z_mask, sign)
    return table


def _gate_slots(gate: Gate) -> tuple[int, ...]:
    if gate.kind in CONTROLLED:
        return (gate.control,) + gate.targets
    return gate.targets


def conjugate_clifford(h: PauliSum, gate: Gate) -> PauliSum:
    """Exact fold of one discrete Clifford gate (or Clifford-angle rotation)."""
    if gate.kind == ROTATION:
        k = clifford_angle_index(gate.angle)
        if k is None:
            raise NotCliffordError(
                f"rotation angle {gate.angle} is not a multiple of pi/2"
            )
        gen: PauliTerm = gate.generator
        cs = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[k]
        return _fold_rotation_masks(h, gen.x_mask, gen.z_mask, *cs)
    if gate.kind not in CLIFFORD_1Q and gate.kind not in CLIFFORD_2Q:
        raise NotCliffordError(f"{gate.kind} has no exact Clifford fold")
    slots = _gate_slots(gate)
    table = _clifford_table(gate.kind)
    clear = 0
    for q in slots:
        clear |= 1 << q
    out: dict[tuple[int, int], complex] = {}
    for (x, z), c in h.raw_items():
        lx = 0
        lz = 0
        for i, q in enumerate(slots):
            lx |= ((x >> q) & 1) << i
            lz |= ((z >> q) & 1) << i
        nx, nz, sign = table[(lx, lz)]
        gx = x & ~clear
        gz = z & ~clear
        for i, q in enumerate(slots):
            gx |= ((nx >> i) & 1) << q
            gz |= ((nz >> i) & 1) << q
        key = (gx, gz)
        out[key] = out.get(key, 0j) + sign * c
    return PauliSum._from_raw(h.n_qubits, out, prune=False)


def _snap(v: float) -> float:
    if abs(v) < _SNAP_TOL:
        return 0.0
    if abs(v - 1.0) < _SNAP_TOL:
        return 1.0
    if abs(v + 1.0) < _SNAP_TOL:
        return -1.0
    return v


def _fold_rotation_masks(
    h: PauliSum, gx: int, gz: int, c: float, s: float
) -> PauliSum:
    out: dict[tuple[int, int], complex] = {}
    for (x, z), coeff in h.raw_items():
        anti = ((x & gz).bit_count() + (z & gx).bit_count()) & 1
        if not anti:
            key = (x, z)
            out[key] = out.get(key, 0j) + coeff
            continue
        if c != 0.0:
            key = (x, z)
            out[key] = out.get(key, 0j) + c * coeff
        if s != 0.0:
            # image term i * G * Q, re-expressed in Hermitian convention
            delta = (_product_phase_exp(gx, gz, x, z) + 1) % 4
            key = (gx ^ x, gz ^ z)
            out[key] = out.get(key, 0j) + s * coeff * _IPOW[delta]
    return PauliSum._from_raw(h.n_qubits, out)


def fold_rotation(h: PauliSum, generator: PauliTerm, angle: float) -> PauliSum:
    """Fold exp(-i angle/2 P) for a unit-coefficient Pauli string P."""
    if generator.n_qubits != h.n_qubits:
        generator = PauliTerm(
            h.n_qubits, generator.x_mask, generator.z_mask,
            generator.phase_exp, generator.coefficient,
        )
    if abs(generator.canonical_coefficient() - 1.0) > 1e-12:
        raise ValueError("rotation generator must have unit coefficient")
    k = clifford_angle_index(angle, tol=0.0)
    if k is not None:
        cs = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[k]
        c, s = cs
    else:
        c = _snap(math.cos(angle))
        s = _snap(math.sin(angle))
    return _fold_rotation_masks(h, generator.x_mask, generator.z_mask, c, s)


def fold_projector(h: PauliSum, projector: PauliSum, angle: float) -> PauliSum:
    """Fold exp(-i angle G) for a rank-deficient generator G = (I - sP)/2.

    ``projector`` must hold exactly the identity with coefficient 1/2 and one
    non-identity string with real coefficient +-1/2.  The identity part is a
    global phase, so the fold reduces to a Pauli rotation at an effective
    angle.
    """
    items = dict(projector.raw_items())
    if len(items) != 2 or (0, 0) not in items:
        raise ValueError(
            "projector must be (identity + one Pauli string) / 2"
        )
    c_i = items.pop((0, 0))
    ((px, pz), c_p), = items.items()
    if abs(c_i - 0.5) > 1e-10 or abs(c_p.imag) > 1e-10 or abs(abs(c_p.real) - 0.5) > 1e-10:
        raise ValueError(
            f"projector coefficients must be 1/2 and +-1/2, got {c_i}, {c_p}"
        )
    generator = PauliTerm(projector.n_qubits, px, pz)
    # exp(-ia(I - sP)/2) = phase * exp(-i(-sa)/2 P) with s = -2 Re(c_p)
    return fold_rotation(h, generator, 2.0 * c_p.real * angle)


def fold_excitation(
    h: PauliSum, generator: PauliSum, projector0: PauliSum, angle: float
) -> PauliSum:
    """Fold exp(-i angle/2 G) for a tripotent generator (G^3 = G).

    ``projector0`` must equal I - G^2 (the kernel projector of G); both
    preconditions are checked symbolically before expanding
    U' H U over the nine operator products it generates.
    """
    g2 = generator.compose(generator)
    g3 = g2.compose(generator)
    defect = (g3 - generator).max_abs_coefficient()
    if defect > 1e-10:
        raise ValueError(f"generator is not tripotent (|G^3-G| = {defect:.2e})")
    p0_expected = PauliSum.identity(h.n_qubits) - g2
    if not projector0.allclose(p0_expected, tol=1e-10):
        raise ValueError("projector0 does not equal I - G^2")

    c = _snap(math.cos(0.5 * angle))
    s = _snap(math.sin(0.5 * angle))
    d = 1.0 - c

    out = h * (c * c)
    if s != 0.0:
        ghg = generator.compose(h).compose(generator)
        out = out + ghg * (s * s)
        comm = h.compose(generator) - generator.compose(h)
        out = out + comm * (-1j * c * s)
    if d != 0.0:
        php = projector0.compose(h).compose(projector0)
        out = out + php * (d * d)
        anti = h.compose(projector0) + projector0.compose(h)
        out = out + anti * (c * d)
    if s != 0.0 and d != 0.0:
        cross = generator.compose(h).compose(projector0) - projector0.compose(
            h
        ).compose(generator)
        out = out + cross * (1j * s * d)
    return out.pruned()


@lru_cache(maxsize=8)
def _local_basis(k: int) -> tuple[tuple[tuple[int, int], ...], np.ndarray]:
    pairs = tuple(
        (lx, lz) for lx in range(1 << k) for lz in range(1 << k)
    )
    mats = np.stack([pauli_dense(k, lx, lz, cap=k) for lx, lz in pairs])
    return pairs, mats


def fold_general(h: PauliSum, gate: Gate) -> PauliSum:
    """Fold exp(-i angle/2 G) for an explicit Hermitian local generator."""
    if gate.kind != GENERAL:
        raise ValueError(f"fold_general expects a {GENERAL} gate, got {gate.kind}")
    targets = gate.targets
    k = len(targets)
    gen = np.asarray(gate.generator)
    vals, vecs = np.linalg.eigh(gen)
    u = (vecs * np.exp(-0.5j * gate.angle * vals)) @ vecs.conj().T
    pairs, mats = _local_basis(k)
    dim = 1 << k
    clear = 0
    for q in targets:
        clear |= 1 << q
    expansion: dict[tuple[int, int], list[tuple[int, int, complex]]] = {}
    out: dict[tuple[int, int], complex] = {}
    for (x, z), c in h.raw_items():
        lx = 0
        lz = 0
        for i, q in enumerate(targets):
            lx |= ((x >> q) & 1) << i
            lz |= ((z >> q) & 1) << i
        entry = expansion.get((lx, lz))
        if entry is None:
            p_loc = mats[(lx << k) | lz]
            m = u.conj().T @ p_loc @ u
            weights = np.einsum("qij,ji->q", mats, m) / dim
            entry = []
            for (nlx, nlz), w in zip(pairs, weights):
                if abs(w) <= _SNAP_TOL:
                    continue
                sx = 0
                sz = 0
                for i, q in enumerate(targets):
                    sx |= ((nlx >> i) & 1) << q
                    sz |= ((nlz >> i) & 1) << q
                entry.append((sx, sz, complex(w)))
            expansion[(lx, lz)] = entry
        rx = x & ~clear
        rz = z & ~clear
        for sx, sz, w in entry:
            key = (rx | sx, rz | sz)
            out[key] = out.get(key, 0j) + c * w
    return PauliSum._from_raw(h.n_qubits, out)


def fold_gate(h: PauliSum, gate: Gate) -> PauliSum:
    """Fold one gate of any supported kind."""
    if gate.kind in CLIFFORD_1Q or gate.kind in CLIFFORD_2Q:
        return conjugate_clifford(h, gate)
    if gate.kind == ROTATION:
        return fold_rotation(h, gate.generator, gate.angle)
    if gate.kind == GENERAL:
        return fold_general(h, gate)
    raise ValueError(f"unknown gate kind {gate.kind}")


@dataclass(frozen=True)
class FoldStep:
    gate_index: int
    kind: str
    cardinality: int


@dataclass(frozen=True)
class FoldReport:
    """Cardinality trajectory of a circuit fold, in fold (reverse gate) order."""

    initial_cardinality: int
    steps: tuple[FoldStep, ...]

    @property
    def final_cardinality(self) -> int:
        return self.steps[-1].cardinality if self.steps else self.initial_cardinality

    def to_csv(self) -> str:
        lines = ["gate_index,kind,cardinality"]
        for step in self.steps:
            lines.append(f"{step.gate_index},{step.kind},{step.cardinality}")
        return "\n".join(lines) + "\n"


def fold_circuit(h: PauliSum, circuit: Circuit) -> tuple[PauliSum, FoldReport]:
    """Fold a whole circuit (gate 0 acts first on states, so it folds last).

    Returns the transformed operator and the cardinality report; the growth
    ceiling 4**n_qubits can never be exceeded because the strings live in
    the n-qubit Pauli basis.
    """
    if circuit.n_qubits != h.n_qubits:
        raise ValueError(
            f"circuit on {circuit.n_qubits} qubits, operator on {h.n_qubits}"
        )
    folded = h
    steps = []
    for index in range(len(circuit.gates) - 1, -1, -1):
        gate = circuit.gates[index]
        folded = fold_gate(folded, gate)
        steps.append(FoldStep(index, gate.kind, folded.cardinality))
    return folded, FoldReport(h.cardinality, tuple(steps))
