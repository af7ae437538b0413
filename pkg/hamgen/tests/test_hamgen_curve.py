"""Dissociation-curve shape of the minimal-basis two-proton system."""

import numpy as np
import pytest

import cliffold
from hamgen import MoleculeSpec, dumps, parse_geometry
from hamgen.basis import build_orbitals, nuclear_charges
from hamgen.integrals import attraction_matrix, kinetic_matrix

SEPARATIONS = (0.5, 0.58, 0.66, 0.74, 0.82, 0.9, 1.0, 1.2, 1.5, 1.9, 2.3, 2.8)


@pytest.fixture(scope="module")
def curve():
    energies = []
    for r in SEPARATIONS:
        spec = MoleculeSpec(
            atoms=parse_geometry(f"H 0 0 0; H 0 0 {r}"), basis="sto-3g"
        )
        h = cliffold.loads_hamiltonian(dumps(spec))
        energies.append(cliffold.exact_ground(h).eigenvalues[0])
    return np.asarray(energies)


def _atom_energy():
    # one electron in one basis function: energy is the core matrix element
    atoms = (("H", (0.0, 0.0, 0.0)),)
    orbitals = build_orbitals(atoms, "sto-3g")
    hcore = kinetic_matrix(orbitals) + attraction_matrix(
        orbitals, nuclear_charges(atoms)
    )
    return hcore[0, 0]


def test_single_minimum_near_equilibrium(curve):
    best = int(np.argmin(curve))
    assert SEPARATIONS[best] == 0.74
    diffs = np.diff(curve)
    # strictly downhill into the minimum, strictly uphill after it
    assert np.all(diffs[:best] < 0.0)
    assert np.all(diffs[best:] > 0.0)


def test_energies_monotone_beyond_minimum(curve):
    best = int(np.argmin(curve))
    tail = curve[best:]
    assert np.all(np.diff(tail) > 0.0)


def test_dissociation_limit_approaches_isolated_atoms(curve):
    twice_atom = 2.0 * _atom_energy()
    assert abs(curve[-1] - twice_atom) < 2.0e-3


def test_molecule_is_bound(curve):
    twice_atom = 2.0 * _atom_energy()
    assert curve.min() < twice_atom - 0.1
