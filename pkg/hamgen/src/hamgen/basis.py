"""Built-in Gaussian basis data and atomic-orbital construction.

The generator carries its own integral engine, so only element/basis pairs
listed in the shell table below are available.  All shells are contracted
s-type Gaussians; the contraction coefficients weight unit-normalized
primitives and each contracted function is renormalized exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ToolchainMissingError

BOHR_PER_ANGSTROM = 1.0 / 0.529177210903

ATOMIC_NUMBER = {"H": 1, "He": 2}

# Filled shells below the valence space, per element.  First-row atoms keep
# every orbital in the valence, so the frozen-core option is inert for them.
CORE_ORBITALS = {"H": 0, "He": 0}

# (element, basis) -> tuple of s shells, each (exponents, coefficients).
_SHELLS: dict[tuple[str, str], tuple[tuple[tuple[float, ...], tuple[float, ...]], ...]] = {
    ("H", "sto-3g"): (
        (
            (3.425250914, 0.6239137298, 0.1688554040),
            (0.1543289673, 0.5353281423, 0.4446345422),
        ),
    ),
    ("He", "sto-3g"): (
        (
            (6.362421394, 1.158922999, 0.3136497915),
            (0.1543289673, 0.5353281423, 0.4446345422),
        ),
    ),
    ("H", "6-31g"): (
        (
            (18.73113696, 2.825394365, 0.6401216923),
            (0.03349460434, 0.2347269535, 0.8137573261),
        ),
        ((0.1612777588,), (1.0,)),
    ),
}


def supported_pairs() -> tuple[tuple[str, str], ...]:
    """Every (element, basis) pair the integral tables cover."""
    return tuple(sorted(_SHELLS))


@dataclass(frozen=True)
class Orbital:
    """One contracted s-type atomic orbital.

    ``exps``/``coeffs`` describe the primitives, ``center`` is in bohr, and
    the coefficients already include primitive normalization plus an overall
    rescale so the contracted function has unit self-overlap.
    """

    exps: np.ndarray
    coeffs: np.ndarray
    center: np.ndarray


def _primitive_norm(alpha: float) -> float:
    # unit L2 norm for exp(-alpha r^2) in three dimensions
    return (2.0 * alpha / math.pi) ** 0.75


def _self_overlap(exps: np.ndarray, coeffs: np.ndarray) -> float:
    a = exps[:, None]
    b = exps[None, :]
    s = (math.pi / (a + b)) ** 1.5
    return float(np.einsum("i,j,ij->", coeffs, coeffs, s))


def make_orbital(exps, coeffs, center_bohr) -> Orbital:
    """Normalize a contraction and attach it to a center given in bohr."""
    exps = np.asarray(exps, dtype=float)
    raw = np.asarray(coeffs, dtype=float) * np.array(
        [_primitive_norm(a) for a in exps]
    )
    raw = raw / math.sqrt(_self_overlap(exps, raw))
    return Orbital(exps=exps, coeffs=raw, center=np.asarray(center_bohr, dtype=float))


def build_orbitals(
    atoms: tuple[tuple[str, tuple[float, float, float]], ...], basis: str
) -> list[Orbital]:
    """Atomic-orbital list for a geometry given in angstrom.

    Raises ToolchainMissingError when any (element, basis) pair is absent
    from the built-in tables.
    """
    key_basis = basis.strip().lower()
    orbitals: list[Orbital] = []
    for element, xyz in atoms:
        shells = _SHELLS.get((element, key_basis))
        if shells is None:
            known = ", ".join(f"{e}/{b}" for e, b in supported_pairs())
            raise ToolchainMissingError(
                f"no integral tables for {element!r} in basis {basis!r}; "
                f"available: {known}"
            )
        center = np.asarray(xyz, dtype=float) * BOHR_PER_ANGSTROM
        for exps, coeffs in shells:
            orbitals.append(make_orbital(exps, coeffs, center))
    return orbitals


def nuclear_charges(
    atoms: tuple[tuple[str, tuple[float, float, float]], ...]
) -> list[tuple[int, np.ndarray]]:
    """(charge, center_bohr) pairs for the nuclei."""
    out = []
    for element, xyz in atoms:
        z = ATOMIC_NUMBER.get(element)
        if z is None:
            raise ToolchainMissingError(f"unknown element {element!r}")
        out.append((z, np.asarray(xyz, dtype=float) * BOHR_PER_ANGSTROM))
    return out
