"""Molecular-orbital integral transforms and active-window selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpecError


@dataclass(frozen=True)
class ActiveSpace:
    """Electronic problem restricted to a window of spatial orbitals.

    ``h`` and ``g`` are one- and two-body integrals over the active window
    (chemists' index order for ``g``); ``e_core`` collects nuclear repulsion
    plus the mean-field energy of the frozen orbitals.
    """

    h: np.ndarray
    g: np.ndarray
    e_core: float
    n_electrons: int
    orbital_indices: tuple[int, ...]


def mo_integrals(hcore: np.ndarray, eri: np.ndarray, coeffs: np.ndarray):
    """Rotate atomic-orbital integrals into the molecular-orbital basis."""
    h = coeffs.T @ hcore @ coeffs
    g = np.einsum(
        "pi,qj,pqrs,rk,sl->ijkl", coeffs, coeffs, eri, coeffs, coeffs, optimize=True
    )
    return h, g


def active_window(
    h: np.ndarray,
    g: np.ndarray,
    e_nuc: float,
    n_electrons: int,
    *,
    n_frozen: int = 0,
    n_active: int | None = None,
    selection: tuple[int, ...] | None = None,
) -> ActiveSpace:
    """Freeze the lowest ``n_frozen`` orbitals and keep an active window.

    Orbitals are indexed in ascending energy order (the order ``mo_integrals``
    inherits from the SCF solution).  With no explicit ``selection`` the
    default window is the lowest-energy ``n_active`` orbitals above the frozen
    block, which keeps every occupied orbital whenever the window is at least
    as large as the occupation.
    """
    n_spatial = h.shape[0]
    if n_frozen < 0 or 2 * n_frozen > n_electrons:
        raise SpecError(
            f"cannot freeze {n_frozen} orbitals with {n_electrons} electrons"
        )
    if selection is not None:
        active = tuple(sorted(int(i) for i in selection))
        if len(set(active)) != len(active):
            raise SpecError("active orbital selection repeats an index")
        if any(i < n_frozen or i >= n_spatial for i in active):
            raise SpecError(
                f"active orbital selection must lie in [{n_frozen}, {n_spatial})"
            )
    else:
        if n_active is None:
            n_active = n_spatial - n_frozen
        if n_active < 0 or n_frozen + n_active > n_spatial:
            raise SpecError(
                f"active window of {n_active} orbitals does not fit "
                f"{n_spatial} spatial orbitals with {n_frozen} frozen"
            )
        active = tuple(range(n_frozen, n_frozen + n_active))

    n_active_electrons = n_electrons - 2 * n_frozen
    if n_active_electrons > 2 * len(active):
        raise SpecError(
            f"{n_active_electrons} active electrons exceed "
            f"{2 * len(active)} active spin orbitals"
        )

    frozen = tuple(range(n_frozen))
    e_core = e_nuc
    for i in frozen:
        e_core += 2.0 * h[i, i]
        for j in frozen:
            e_core += 2.0 * g[i, i, j, j] - g[i, j, j, i]

    idx = np.asarray(active, dtype=int)
    h_act = h[np.ix_(idx, idx)].copy()
    for i in frozen:
        h_act += 2.0 * g[np.ix_(idx, idx, [i], [i])][:, :, 0, 0]
        h_act -= g[np.ix_(idx, [i], [i], idx)][:, 0, 0, :]
    g_act = g[np.ix_(idx, idx, idx, idx)].copy()

    return ActiveSpace(
        h=h_act,
        g=g_act,
        e_core=e_core,
        n_electrons=n_active_electrons,
        orbital_indices=active,
    )
