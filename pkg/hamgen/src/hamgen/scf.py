"""Restricted closed-shell self-consistent field solver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SCFConvergenceError, SpecError


@dataclass(frozen=True)
class SCFResult:
    """Converged mean-field data in the atomic-orbital basis.

    ``mo_coeffs`` columns are molecular orbitals sorted by ``mo_energies``;
    ``energy`` includes the nuclear repulsion passed to :func:`run_rhf`.
    """

    energy: float
    e_nuc: float
    mo_energies: np.ndarray
    mo_coeffs: np.ndarray
    n_electrons: int
    iterations: int


def _orthogonalizer(s: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(s)
    if vals.min() < 1.0e-10:
        raise SpecError("overlap matrix is numerically singular")
    return vecs @ np.diag(vals ** -0.5) @ vecs.T


def _fock(hcore: np.ndarray, eri: np.ndarray, density: np.ndarray) -> np.ndarray:
    coulomb = np.einsum("ls,pqsl->pq", density, eri)
    exchange = np.einsum("ls,plsq->pq", density, eri)
    return hcore + coulomb - 0.5 * exchange


def run_rhf(
    s: np.ndarray,
    hcore: np.ndarray,
    eri: np.ndarray,
    n_electrons: int,
    e_nuc: float,
    *,
    tol: float = 1.0e-11,
    max_iter: int = 200,
) -> SCFResult:
    """Iterate the closed-shell Fock equations to self-consistency.

    Starts from the core guess and stops once both the energy step and the
    largest density-matrix step fall below ``tol``.
    """
    if n_electrons <= 0 or n_electrons % 2:
        raise SpecError(
            f"restricted reference needs a positive even electron count, "
            f"got {n_electrons}"
        )
    n_occ = n_electrons // 2
    if n_occ > s.shape[0]:
        raise SpecError(
            f"{n_electrons} electrons do not fit in {s.shape[0]} spatial orbitals"
        )
    x = _orthogonalizer(s)

    def solve(fock: np.ndarray):
        f_ortho = x.T @ fock @ x
        energies, vecs = np.linalg.eigh(f_ortho)
        coeffs = x @ vecs
        occ = coeffs[:, :n_occ]
        return energies, coeffs, 2.0 * occ @ occ.T

    energies, coeffs, density = solve(hcore)
    e_old = np.inf
    for iteration in range(1, max_iter + 1):
        fock = _fock(hcore, eri, density)
        e_elec = 0.5 * float(np.einsum("pq,pq->", density, hcore + fock))
        energies, coeffs, new_density = solve(fock)
        delta_d = float(np.abs(new_density - density).max())
        delta_e = abs(e_elec - e_old)
        density = new_density
        e_old = e_elec
        if delta_d < tol and delta_e < tol:
            return SCFResult(
                energy=e_elec + e_nuc,
                e_nuc=e_nuc,
                mo_energies=energies,
                mo_coeffs=coeffs,
                n_electrons=n_electrons,
                iterations=iteration,
            )
    raise SCFConvergenceError(
        f"self-consistent field did not settle in {max_iter} iterations"
    )
