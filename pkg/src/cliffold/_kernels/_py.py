"""Pure-numpy kernel backend.

All four kernels treat a mask pair (x, z) as the HERMITIAN string
i**popcount(x&z) X^x Z^z acting on a little-endian dense vector
(basis-index bit q <=> qubit q), so callers pass canonical coefficients
and never track phases themselves.

Action on a basis state:  P|b> = i**popcount(x&z) * (-1)**popcount(z&b) |b^x>
"""

from __future__ import annotations

import numpy as np

_IPOW = np.array([1.0, 1.0j, -1.0, -1.0j], dtype=np.complex128)

_idx_cache: dict[int, np.ndarray] = {}


def _indices(dim: int) -> np.ndarray:
    idx = _idx_cache.get(dim)
    if idx is None:
        idx = np.arange(dim, dtype=np.uint64)
        _idx_cache[dim] = idx
    return idx


def _signs(z: int, dim: int) -> np.ndarray:
    # (-1)**popcount(z & b) over all basis indices b
    par = np.bitwise_count(_indices(dim) & np.uint64(z)).astype(np.int64) & 1
    return 1.0 - 2.0 * par


def apply_pauli(vec: np.ndarray, x: int, z: int) -> np.ndarray:
    dim = vec.shape[0]
    phase = _IPOW[(x & z).bit_count() & 3]
    out = np.empty_like(vec)
    # b^x over all b is a permutation, so this scatter has no collisions
    out[_indices(dim) ^ np.uint64(x)] = (phase * _signs(z, dim)) * vec
    return out


def expval(vec: np.ndarray, x: int, z: int) -> complex:
    dim = vec.shape[0]
    phase = _IPOW[(x & z).bit_count() & 3]
    gathered = vec[_indices(dim) ^ np.uint64(x)]
    return complex(phase * np.sum(_signs(z, dim) * np.conj(gathered) * vec))


def expval_batch(vec: np.ndarray, xs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    out = np.empty(xs.shape[0], dtype=np.complex128)
    for k in range(xs.shape[0]):
        out[k] = expval(vec, int(xs[k]), int(zs[k]))
    return out


def matvec(
    vec: np.ndarray, xs: np.ndarray, zs: np.ndarray, coeffs: np.ndarray
) -> np.ndarray:
    dim = vec.shape[0]
    idx = _indices(dim)
    acc = np.zeros(dim, dtype=np.complex128)
    for k in range(xs.shape[0]):
        x = int(xs[k])
        z = int(zs[k])
        phase = coeffs[k] * _IPOW[(x & z).bit_count() & 3]
        acc[idx ^ np.uint64(x)] += (phase * _signs(z, dim)) * vec
    return acc
