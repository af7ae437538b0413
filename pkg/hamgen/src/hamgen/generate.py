"""Molecule description and qubit-Hamiltonian file generation.

The output is the plain-text Pauli format: a ``# qubits: N`` header, one
``<re> <im> <factors>`` line per term, and provenance comments describing
the geometry, basis, encoding, and active window.  Nuclear repulsion and
any frozen-orbital mean field are folded into the identity coefficient.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from . import __version__
from .basis import ATOMIC_NUMBER, CORE_ORBITALS, build_orbitals, nuclear_charges
from .encode import encode_hamiltonian, word_label
from .errors import SpecError
from .integrals import (
    attraction_matrix,
    kinetic_matrix,
    nuclear_repulsion,
    overlap_matrix,
    repulsion_tensor,
)
from .scf import run_rhf
from .transform import active_window, mo_integrals

Atom = tuple[str, tuple[float, float, float]]

_ENCODINGS = ("jordan-wigner",)


@dataclass(frozen=True)
class MoleculeSpec:
    """Everything needed to build one molecular qubit Hamiltonian.

    ``atoms`` holds (element, xyz) pairs with coordinates in angstrom.
    ``active`` counts spin orbitals; None keeps the whole space.  When the
    window is smaller than the space, the default selection selects the
    lowest-energy orbitals; ``active_orbitals`` overrides it with explicit
    spatial-orbital indices (energy order, after any frozen block).
    ``frozen_core`` removes filled shells below the valence space, which
    is a no-op for the first-row elements the basis tables cover.
    """

    atoms: tuple[Atom, ...]
    basis: str = "sto-3g"
    active: int | None = None
    encoding: str = "jordan-wigner"
    frozen_core: bool = False
    active_orbitals: tuple[int, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        if not self.atoms:
            raise SpecError("geometry has no atoms")
        for entry in self.atoms:
            if len(entry) != 2 or len(entry[1]) != 3:
                raise SpecError(f"bad geometry entry {entry!r}")
        if self.encoding.strip().lower() not in _ENCODINGS:
            raise SpecError(
                f"unknown encoding {self.encoding!r}; available: "
                + ", ".join(_ENCODINGS)
            )
        if self.active is not None:
            if self.active <= 0 or self.active % 2:
                raise SpecError(
                    f"active spin-orbital count must be positive and even, "
                    f"got {self.active}"
                )
        if self.active_orbitals is not None and self.active is not None:
            if len(self.active_orbitals) != self.active // 2:
                raise SpecError(
                    "active_orbitals length must match active // 2 spatial slots"
                )


def parse_geometry(text: str) -> tuple[Atom, ...]:
    """Parse ``El x y z`` atom entries separated by semicolons or newlines."""
    atoms: list[Atom] = []
    for chunk in text.replace(";", "\n").splitlines():
        line = chunk.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise SpecError(f"expected 'El x y z', got {line!r}")
        element = parts[0].capitalize()
        try:
            xyz = (float(parts[1]), float(parts[2]), float(parts[3]))
        except ValueError as exc:
            raise SpecError(f"bad coordinate in {line!r}") from exc
        atoms.append((element, xyz))
    if not atoms:
        raise SpecError("geometry has no atoms")
    return tuple(atoms)


def _electron_count(atoms: tuple[Atom, ...]) -> int:
    return sum(ATOMIC_NUMBER.get(el, 0) for el, _ in atoms)


def _frozen_count(atoms: tuple[Atom, ...]) -> int:
    return sum(CORE_ORBITALS.get(el, 0) for el, _ in atoms)


def _format_geometry(atoms: tuple[Atom, ...]) -> str:
    return "; ".join(
        f"{el} {x:.10g} {y:.10g} {z:.10g}" for el, (x, y, z) in atoms
    )


def build_terms(spec: MoleculeSpec):
    """Run the full chain mean field -> active window -> qubit terms.

    Returns (n_qubits, {(x_mask, z_mask): coefficient}, provenance dict).
    """
    orbitals = build_orbitals(spec.atoms, spec.basis)
    charges = nuclear_charges(spec.atoms)
    n_electrons = _electron_count(spec.atoms)

    s = overlap_matrix(orbitals)
    hcore = kinetic_matrix(orbitals) + attraction_matrix(orbitals, charges)
    eri = repulsion_tensor(orbitals)
    e_nuc = nuclear_repulsion(charges)

    mf = run_rhf(s, hcore, eri, n_electrons, e_nuc)
    h_mo, g_mo = mo_integrals(hcore, eri, mf.mo_coeffs)

    n_frozen = _frozen_count(spec.atoms) if spec.frozen_core else 0
    n_spatial = h_mo.shape[0]
    if spec.active is not None:
        n_active = spec.active // 2
        if n_frozen + n_active > n_spatial:
            raise SpecError(
                f"active window of {spec.active} spin orbitals does not fit "
                f"{2 * n_spatial} with {2 * n_frozen} frozen"
            )
    else:
        n_active = n_spatial - n_frozen

    space = active_window(
        h_mo,
        g_mo,
        e_nuc,
        n_electrons,
        n_frozen=n_frozen,
        n_active=n_active,
        selection=spec.active_orbitals,
    )
    n_qubits, terms = encode_hamiltonian(space.h, space.g, space.e_core)
    provenance = {
        "geometry": _format_geometry(spec.atoms) + " (angstrom)",
        "basis": spec.basis.strip().lower(),
        "encoding": spec.encoding.strip().lower(),
        "electrons": f"{space.n_electrons} active of {n_electrons}",
        "orbitals": (
            f"active spatial {list(space.orbital_indices)} of {n_spatial}, "
            f"frozen {n_frozen}"
        ),
        "scf energy": f"{mf.energy:.12f}",
        "identity term": "includes nuclear repulsion and frozen-orbital field",
    }
    return n_qubits, terms, provenance


def _term_sort_key(item: tuple[tuple[int, int], float]):
    (x, z), _ = item
    support = x | z
    factors = []
    q = 0
    while support >> q:
        bit = 1 << q
        if support & bit:
            axis = 2 if (x & bit and z & bit) else (1 if x & bit else 3)
            factors.append((q, axis))
        q += 1
    return (len(factors), tuple(factors))


def dumps(spec: MoleculeSpec) -> str:
    """Render the Hamiltonian for ``spec`` as deterministic text."""
    n_qubits, terms, provenance = build_terms(spec)
    buf = io.StringIO()
    buf.write(f"# qubits: {n_qubits}\n")
    buf.write(f"# generator: hamgen {__version__}\n")
    for key, value in provenance.items():
        buf.write(f"# {key}: {value}\n")
    for (x, z), coeff in sorted(terms.items(), key=lambda kv: _term_sort_key(kv)):
        buf.write(f"{coeff:.17g} 0 {word_label(x, z)}\n")
    return buf.getvalue()


def generate(spec: MoleculeSpec, out_path) -> str:
    """Write the Hamiltonian file for ``spec`` and return the path."""
    text = dumps(spec)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return str(out_path)
