"""Closed-form molecular integrals over contracted s-type Gaussians.

Every formula reduces to products of primitive-pair quantities plus the
zeroth Boys function, so plain scalar loops are plenty fast for the basis
sizes the shell tables allow.
"""

from __future__ import annotations

import math

import numpy as np

from .basis import Orbital

TWO_PI_POW = 2.0 * math.pi ** 2.5


def boys0(t: float) -> float:
    """F0(t) = integral of exp(-t u^2) for u in [0, 1]."""
    if t < 1.0e-12:
        # series limit; keeps the t -> 0 branch smooth
        return 1.0 - t / 3.0
    st = math.sqrt(t)
    return 0.5 * math.sqrt(math.pi) * math.erf(st) / st


def _pair(a: float, b: float, ra: np.ndarray, rb: np.ndarray):
    p = a + b
    d2 = float(np.dot(ra - rb, ra - rb))
    pref = math.exp(-a * b / p * d2)
    center = (a * ra + b * rb) / p
    return p, d2, pref, center


def overlap(oa: Orbital, ob: Orbital) -> float:
    total = 0.0
    for a, ca in zip(oa.exps, oa.coeffs):
        for b, cb in zip(ob.exps, ob.coeffs):
            p, _, pref, _ = _pair(a, b, oa.center, ob.center)
            total += ca * cb * (math.pi / p) ** 1.5 * pref
    return total


def kinetic(oa: Orbital, ob: Orbital) -> float:
    total = 0.0
    for a, ca in zip(oa.exps, oa.coeffs):
        for b, cb in zip(ob.exps, ob.coeffs):
            p, d2, pref, _ = _pair(a, b, oa.center, ob.center)
            mu = a * b / p
            s = (math.pi / p) ** 1.5 * pref
            total += ca * cb * mu * (3.0 - 2.0 * mu * d2) * s
    return total


def attraction(oa: Orbital, ob: Orbital, charge: float, rc: np.ndarray) -> float:
    """Electron-nucleus term for one point charge; negative by construction."""
    total = 0.0
    for a, ca in zip(oa.exps, oa.coeffs):
        for b, cb in zip(ob.exps, ob.coeffs):
            p, _, pref, center = _pair(a, b, oa.center, ob.center)
            t = p * float(np.dot(center - rc, center - rc))
            total += ca * cb * (2.0 * math.pi / p) * pref * boys0(t)
    return -charge * total


def repulsion(oa: Orbital, ob: Orbital, oc: Orbital, od: Orbital) -> float:
    """(ab|cd) in chemists' notation: electrons 1 on ab, 2 on cd."""
    total = 0.0
    for a, ca in zip(oa.exps, oa.coeffs):
        for b, cb in zip(ob.exps, ob.coeffs):
            p, _, pref_ab, rp = _pair(a, b, oa.center, ob.center)
            for c, cc in zip(oc.exps, oc.coeffs):
                for d, cd in zip(od.exps, od.coeffs):
                    q, _, pref_cd, rq = _pair(c, d, oc.center, od.center)
                    t = p * q / (p + q) * float(np.dot(rp - rq, rp - rq))
                    total += (
                        ca
                        * cb
                        * cc
                        * cd
                        * TWO_PI_POW
                        / (p * q * math.sqrt(p + q))
                        * pref_ab
                        * pref_cd
                        * boys0(t)
                    )
    return total


def overlap_matrix(orbitals: list[Orbital]) -> np.ndarray:
    n = len(orbitals)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = overlap(orbitals[i], orbitals[j])
    return out


def kinetic_matrix(orbitals: list[Orbital]) -> np.ndarray:
    n = len(orbitals)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = kinetic(orbitals[i], orbitals[j])
    return out


def attraction_matrix(
    orbitals: list[Orbital], charges: list[tuple[int, np.ndarray]]
) -> np.ndarray:
    n = len(orbitals)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            v = sum(
                attraction(orbitals[i], orbitals[j], z, rc) for z, rc in charges
            )
            out[i, j] = out[j, i] = v
    return out


def repulsion_tensor(orbitals: list[Orbital]) -> np.ndarray:
    """Full (pq|rs) tensor; the scalar kernel is cheap at these sizes."""
    n = len(orbitals)
    out = np.empty((n, n, n, n))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    out[p, q, r, s] = repulsion(
                        orbitals[p], orbitals[q], orbitals[r], orbitals[s]
                    )
    return out


def nuclear_repulsion(charges: list[tuple[int, np.ndarray]]) -> float:
    total = 0.0
    for i in range(len(charges)):
        zi, ri = charges[i]
        for j in range(i + 1, len(charges)):
            zj, rj = charges[j]
            total += zi * zj / math.sqrt(float(np.dot(ri - rj, ri - rj)))
    return total
