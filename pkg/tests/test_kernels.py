import numpy as np
import pytest

import oracles as orc
from cliffold._kernels import _py

try:
    from cliffold._kernels import _cy
except ImportError:  # pragma: no cover - extension not built
    _cy = None

BACKENDS = [_py] + ([_cy] if _cy is not None else [])
TOL = 1e-12


def _rand(rng, n):
    return orc.random_state(rng, 1 << n).astype(np.complex128)


def test_compiled_backend_present():
    # the build is expected to produce the extension in this environment
    assert _cy is not None


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_apply_pauli_matches_dense(backend, n):
    rng = np.random.default_rng(7 + n)
    for _ in range(20):
        v = _rand(rng, n)
        x = int(rng.integers(1 << n))
        z = int(rng.integers(1 << n))
        got = backend.apply_pauli(v, x, z)
        want = orc.dense_string(n, x, z) @ v
        assert np.max(np.abs(got - want)) < TOL


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_expval_matches_dense(backend, n):
    rng = np.random.default_rng(17 + n)
    for _ in range(20):
        v = _rand(rng, n)
        x = int(rng.integers(1 << n))
        z = int(rng.integers(1 << n))
        got = backend.expval(v, x, z)
        want = complex(v.conj() @ (orc.dense_string(n, x, z) @ v))
        assert abs(got - want) < TOL


@pytest.mark.parametrize("backend", BACKENDS)
def test_expval_batch_and_matvec_match_dense(backend):
    rng = np.random.default_rng(31)
    n = 3
    v = _rand(rng, n)
    k = 11
    xs = rng.integers(1 << n, size=k).astype(np.uint64)
    zs = rng.integers(1 << n, size=k).astype(np.uint64)
    coeffs = (rng.normal(size=k) + 1j * rng.normal(size=k)).astype(np.complex128)

    batch = backend.expval_batch(v, xs, zs)
    for i in range(k):
        want = complex(v.conj() @ (orc.dense_string(n, int(xs[i]), int(zs[i])) @ v))
        assert abs(batch[i] - want) < TOL

    acc = backend.matvec(v, xs, zs, coeffs)
    dense = sum(
        coeffs[i] * orc.dense_string(n, int(xs[i]), int(zs[i])) for i in range(k)
    )
    assert np.max(np.abs(acc - dense @ v)) < TOL


@pytest.mark.skipif(_cy is None, reason="extension not built")
@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_backends_agree_bitwise_shapes(n):
    rng = np.random.default_rng(91 + n)
    v = _rand(rng, n)
    k = 17
    xs = rng.integers(1 << n, size=k).astype(np.uint64)
    zs = rng.integers(1 << n, size=k).astype(np.uint64)
    coeffs = (rng.normal(size=k) + 1j * rng.normal(size=k)).astype(np.complex128)
    for i in range(k):
        x, z = int(xs[i]), int(zs[i])
        assert np.max(np.abs(_py.apply_pauli(v, x, z) - _cy.apply_pauli(v, x, z))) < TOL
        assert abs(_py.expval(v, x, z) - _cy.expval(v, x, z)) < TOL
    assert np.max(np.abs(
        _py.expval_batch(v, xs, zs) - _cy.expval_batch(v, xs, zs)
    )) < TOL
    assert np.max(np.abs(
        _py.matvec(v, xs, zs, coeffs) - _cy.matvec(v, xs, zs, coeffs)
    )) < TOL


@pytest.mark.parametrize("backend", BACKENDS)
def test_identity_masks_are_noop(backend):
    rng = np.random.default_rng(3)
    v = _rand(rng, 3)
    assert np.allclose(backend.apply_pauli(v, 0, 0), v)
    assert backend.expval(v, 0, 0) == pytest.approx(1.0)


def test_backend_selection_env(tmp_path):
    import subprocess, sys
    code = "import cliffold; print(cliffold.KERNEL_BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True, text=True,
        env={"PATH": "/usr/bin:/bin", "CLIFFOLD_PURE_PYTHON": "1"},
    )
    assert out.stdout.strip() == "numpy"
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True,
        env={"PATH": "/usr/bin:/bin"},
    )
    assert out.stdout.strip() == "cython"
