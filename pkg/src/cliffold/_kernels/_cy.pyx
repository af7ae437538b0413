# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend (same contract as _py: Hermitian mask pairs on
little-endian dense vectors).  Tight C loops with hardware popcount."""

import numpy as np

from libc.stdint cimport uint64_t

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define cliffold_popcount64(x) __builtin_popcountll(x)
    #else
    static int cliffold_popcount64(unsigned long long x)
    { int c = 0; while (x) { x &= x - 1; ++c; } return c; }
    #endif
    """
    int cliffold_popcount64(uint64_t x) nogil


cdef inline double complex _ipow(int k) noexcept nogil:
    if k == 0:
        return 1.0
    elif k == 1:
        return 1.0j
    elif k == 2:
        return -1.0
    return -1.0j


cdef double complex _expval_one(
    const double complex[::1] vec, uint64_t x, uint64_t z
) noexcept nogil:
    cdef Py_ssize_t dim = vec.shape[0]
    cdef Py_ssize_t b
    cdef double complex acc = 0.0
    for b in range(dim):
        if cliffold_popcount64(z & <uint64_t> b) & 1:
            acc = acc - vec[<Py_ssize_t> (x ^ <uint64_t> b)].conjugate() * vec[b]
        else:
            acc = acc + vec[<Py_ssize_t> (x ^ <uint64_t> b)].conjugate() * vec[b]
    return _ipow(cliffold_popcount64(x & z) & 3) * acc


def expval(const double complex[::1] vec, x, z):
    cdef uint64_t cx = <uint64_t> x
    cdef uint64_t cz = <uint64_t> z
    cdef double complex out
    with nogil:
        out = _expval_one(vec, cx, cz)
    return complex(out)


def expval_batch(
    const double complex[::1] vec,
    const uint64_t[::1] xs,
    const uint64_t[::1] zs,
):
    cdef Py_ssize_t n = xs.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t k
    with nogil:
        for k in range(n):
            out[k] = _expval_one(vec, xs[k], zs[k])
    return out_arr


def matvec(
    const double complex[::1] vec,
    const uint64_t[::1] xs,
    const uint64_t[::1] zs,
    const double complex[::1] coeffs,
):
    cdef Py_ssize_t dim = vec.shape[0]
    cdef Py_ssize_t n = xs.shape[0]
    out_arr = np.zeros(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t k, b
    cdef uint64_t x, z
    cdef double complex c
    with nogil:
        for k in range(n):
            x = xs[k]
            z = zs[k]
            c = coeffs[k] * _ipow(cliffold_popcount64(x & z) & 3)
            for b in range(dim):
                if cliffold_popcount64(z & <uint64_t> b) & 1:
                    out[<Py_ssize_t> (x ^ <uint64_t> b)] = (
                        out[<Py_ssize_t> (x ^ <uint64_t> b)] - c * vec[b]
                    )
                else:
                    out[<Py_ssize_t> (x ^ <uint64_t> b)] = (
                        out[<Py_ssize_t> (x ^ <uint64_t> b)] + c * vec[b]
                    )
    return out_arr


def apply_pauli(const double complex[::1] vec, x, z):
    cdef uint64_t cx = <uint64_t> x
    cdef uint64_t cz = <uint64_t> z
    cdef Py_ssize_t dim = vec.shape[0]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double complex ph = _ipow(cliffold_popcount64(cx & cz) & 3)
    cdef Py_ssize_t b
    with nogil:
        for b in range(dim):
            if cliffold_popcount64(cz & <uint64_t> b) & 1:
                out[<Py_ssize_t> (cx ^ <uint64_t> b)] = -ph * vec[b]
            else:
                out[<Py_ssize_t> (cx ^ <uint64_t> b)] = ph * vec[b]
    return out_arr
