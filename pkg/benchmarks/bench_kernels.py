"""Timing comparison of the compiled and pure-numpy kernel backends.

Runs the three hot kernels (batched expectations, shifted matvec, single
Pauli application) on the register sizes the solvers actually touch and
prints per-call times plus the speedup of the compiled core.

    python3 benchmarks/bench_kernels.py [--repeats 2000] [--seed 0]
"""

import argparse
import time

import numpy as np

from cliffold._kernels import _py

try:
    from cliffold._kernels import _cy
except ImportError:
    _cy = None


def _random_case(rng, n_qubits, n_terms):
    dim = 1 << n_qubits
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    vec = (vec / np.linalg.norm(vec)).astype(np.complex128)
    xs = rng.integers(0, dim, size=n_terms).astype(np.uint64)
    zs = rng.integers(0, dim, size=n_terms).astype(np.uint64)
    coeffs = (rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)).astype(
        np.complex128
    )
    return vec, xs, zs, coeffs


def _time(fn, repeats):
    fn()  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    if _cy is None:
        print("compiled backend unavailable; timing the numpy fallback only")
    backends = [("numpy", _py)] + ([("cython", _cy)] if _cy else [])

    print(f"{'kernel':<14} {'qubits':>6} {'terms':>6} "
          + "".join(f"{name + ' us':>12}" for name, _ in backends)
          + ("{:>10}".format("speedup") if _cy else ""))
    for n_qubits, n_terms in ((4, 16), (8, 64), (12, 256)):
        vec, xs, zs, coeffs = _random_case(rng, n_qubits, n_terms)
        cases = {
            "expval_batch": lambda b: b.expval_batch(vec, xs, zs),
            "matvec": lambda b: b.matvec(vec, xs, zs, coeffs),
            "apply_pauli": lambda b: b.apply_pauli(
                vec, int(xs[0]), int(zs[0])
            ),
        }
        for kernel, call in cases.items():
            times = [_time(lambda b=b: call(b), args.repeats)
                     for _, b in backends]
            row = f"{kernel:<14} {n_qubits:>6} {n_terms:>6}"
            for t in times:
                row += f"{t * 1e6:>12.2f}"
            if _cy:
                row += f"{times[0] / times[1]:>10.1f}x"
            print(row)


if __name__ == "__main__":
    main()
