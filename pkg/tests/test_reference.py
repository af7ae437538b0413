"""Product-state baselines: shifted power iteration and the rotation ansatz."""

import math

import numpy as np
import pytest

import oracles as orc
from cliffold import (
    Circuit,
    DimensionMismatchError,
    Gate,
    Partition,
    PauliSum,
    PauliTerm,
    PowerMethodConfig,
    VariationalReference,
    expectation,
    optimize_reference,
    power_method,
    reduced_hamiltonian,
    rotation,
)
from cliffold.reference import worker_count

BELL_H = {"X0 X1": -1.0, "Z0 Z1": -1.0}
# best product-state energy of the Bell Hamiltonian: for unit Bloch vectors
# a, b the energy is -(ax*bx + az*bz) >= -|a||b| >= -1, attained at a = b
BELL_PRODUCT_OPT = -1.0


def _separable_sum(rng, na, nb, terms=5):
    """h_a (x) 1 + 1 (x) h_b on na + nb qubits, plus its exact product optimum."""
    n = na + nb
    ha = orc.random_pauli_sum(rng, na, terms)
    hb = orc.random_pauli_sum(rng, nb, terms)
    labels = {}
    for (x, z), c in ha.raw_items():
        t = PauliTerm(n, x, z, 0, c)
        labels[t.label()] = labels.get(t.label(), 0) + c
    for (x, z), c in hb.raw_items():
        t = PauliTerm(n, x << na, z << na, 0, c)
        labels[t.label()] = labels.get(t.label(), 0) + c
    h = PauliSum.from_label_coeffs(n, labels)
    want = orc.ground_energy(orc.dense_sum(ha)) + orc.ground_energy(orc.dense_sum(hb))
    return h, want


# -- config validation -------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [
        {"tol": 0.0},
        {"tol": -1e-9},
        {"max_iter": 0},
        {"restarts": 0},
        {"gamma": "biggest"},
    ],
)
def test_power_method_config_rejects(kwargs):
    with pytest.raises(ValueError):
        PowerMethodConfig(**kwargs)


def test_power_method_config_accepts_auto_gamma():
    cfg = PowerMethodConfig(gamma="auto")
    assert cfg.gamma == "auto"


# -- power method ------------------------------------------------------------------


def test_power_method_separable_reaches_cluster_minima():
    rng = np.random.default_rng(3)
    p = Partition.from_spec("0,1;2,3")
    for _ in range(8):
        h, want = _separable_sum(rng, 2, 2)
        res = power_method(h, p, PowerMethodConfig(gamma="auto", seed=7))
        assert res.converged
        assert abs(res.energy - want) < 1e-6
        # reported energy is the actual expectation of the reported state
        assert abs(expectation(h, res.state) - res.energy) < 1e-9


def test_power_method_bell_product_optimum():
    h = PauliSum.from_label_coeffs(2, BELL_H)
    res = power_method(
        h, Partition.from_spec("0;1"), PowerMethodConfig(gamma="auto", seed=11)
    )
    assert abs(res.energy - BELL_PRODUCT_OPT) < 1e-6


def test_power_method_single_cluster_is_ground_state():
    rng = np.random.default_rng(13)
    h = orc.random_pauli_sum(rng, 3, 8)
    res = power_method(
        h, Partition.from_spec("0,1,2"), PowerMethodConfig(gamma="auto", seed=1)
    )
    assert abs(res.energy - orc.ground_energy(orc.dense_sum(h))) < 1e-6


def test_power_method_trace_monotone_and_consistent():
    rng = np.random.default_rng(17)
    h, _ = _separable_sum(rng, 2, 2)
    cfg = PowerMethodConfig(gamma="auto", seed=2)
    res = power_method(h, Partition.from_spec("0,1;2,3"), cfg)
    assert res.trace[-1] == res.energy
    for a, b in zip(res.trace, res.trace[1:]):
        assert b <= a + cfg.tol
    assert res.sweeps >= 1


def test_power_method_not_converged_with_tiny_budget():
    rng = np.random.default_rng(19)
    h, _ = _separable_sum(rng, 2, 2)
    res = power_method(
        h,
        Partition.from_spec("0,1;2,3"),
        PowerMethodConfig(gamma="auto", max_iter=1, tol=1e-14),
    )
    assert not res.converged


def test_power_method_deterministic_across_thread_counts(monkeypatch):
    rng = np.random.default_rng(23)
    h, _ = _separable_sum(rng, 2, 2)
    p = Partition.from_spec("0,1;2,3")
    cfg = PowerMethodConfig(gamma="auto", seed=5, restarts=4)
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("CLIFFOLD_THREADS", threads)
        outs.append(power_method(h, p, cfg))
    a, b = outs
    assert a.energy == b.energy
    assert a.sweeps == b.sweeps
    for va, vb in zip(a.state.vectors, b.state.vectors):
        np.testing.assert_array_equal(va, vb)


def test_worker_count_env(monkeypatch):
    monkeypatch.delenv("CLIFFOLD_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("CLIFFOLD_THREADS", "8")
    assert worker_count() == 8
    monkeypatch.setenv("CLIFFOLD_THREADS", "oops")
    assert worker_count() == 1
    monkeypatch.setenv("CLIFFOLD_THREADS", "-3")
    assert worker_count() == 1


# -- reduced operator --------------------------------------------------------------


def test_reduced_hamiltonian_matches_replacement_oracle():
    rng = np.random.default_rng(29)
    from cliffold import ClusterState

    p = Partition.from_spec("0,3;1,2,4")
    h = orc.random_pauli_sum(rng, 5, 10, include_identity=True)
    s = ClusterState.random_state(p, rng)
    for cid, qubits in enumerate(p.clusters):
        red = reduced_hamiltonian(h, s, cid)
        assert red.n_qubits == len(qubits)
        mat = orc.dense_sum(red)
        for _ in range(4):
            w = orc.random_state(rng, 1 << len(qubits))
            got = float(np.real(w.conj() @ mat @ w))
            want = expectation(h, s.replace_cluster(cid, w))
            assert abs(got - want) < 1e-9


def test_reduced_hamiltonian_rejects_bad_inputs():
    from cliffold import ClusterState

    p = Partition.from_spec("0;1")
    s = ClusterState.zero_state(p)
    h = PauliSum.from_label_coeffs(2, {"Z0": 1.0})
    with pytest.raises(ValueError):
        reduced_hamiltonian(h, s, 2)
    h3 = PauliSum.from_label_coeffs(3, {"Z0": 1.0})
    with pytest.raises(DimensionMismatchError):
        reduced_hamiltonian(h3, s, 0)


# -- variational reference ---------------------------------------------------------


def test_variational_reference_rejects_cross_cluster_gate():
    p = Partition.from_spec("0;1")
    c = Circuit(2, (Gate("CX", (1,), control=0),))
    with pytest.raises(ValueError):
        VariationalReference(p, c)


def test_variational_reference_rejects_parametrized_non_rotation():
    from cliffold import general

    p = Partition.from_spec("0,1")
    g = general((0,), orc.HADAMARD, 1.0, parametrized=True)
    with pytest.raises(ValueError):
        VariationalReference(p, Circuit(2, (g,)))


def test_variational_reference_theta_count_checked():
    p = Partition.from_spec("0")
    c = Circuit(1, (rotation(PauliTerm.from_label("Y0", 1), 0.1, True),))
    with pytest.raises(ValueError):
        VariationalReference(p, c, initial_thetas=(0.1, 0.2))


def test_optimize_reference_single_qubit_x():
    # Ry(t)|0> gives <X> = sin t, so min of -<X> is -1
    h = PauliSum.from_label_coeffs(1, {"X0": -1.0})
    p = Partition.from_spec("0")
    ref = VariationalReference(
        p, Circuit(1, (rotation(PauliTerm.from_label("Y0", 1), 0.3, True),))
    )
    res = optimize_reference(ref, h)
    assert abs(res.energy - (-1.0)) < 1e-6
    assert abs(math.sin(res.thetas[0]) - 1.0) < 1e-5
    assert abs(expectation(h, res.state) - res.energy) < 1e-12
    assert res.n_evaluations >= 1


def test_optimize_reference_bell_product_optimum():
    h = PauliSum.from_label_coeffs(2, BELL_H)
    p = Partition.from_spec("0;1")
    c = Circuit(
        2,
        (
            rotation(PauliTerm.from_label("Y0", 2), 0.4, True),
            rotation(PauliTerm.from_label("Y1", 2), 1.1, True),
        ),
    )
    res = optimize_reference(VariationalReference(p, c), h)
    assert abs(res.energy - BELL_PRODUCT_OPT) < 1e-6


def test_optimize_reference_no_parameters():
    h = PauliSum.from_label_coeffs(1, {"Z0": 1.0})
    p = Partition.from_spec("0")
    ref = VariationalReference(p, Circuit(1, (Gate("X", (0,)),)))
    res = optimize_reference(ref, h)
    assert res.thetas == ()
    assert abs(res.energy - (-1.0)) < 1e-12


def test_parameter_shift_gradient_matches_finite_difference():
    rng = np.random.default_rng(31)
    h = orc.random_pauli_sum(rng, 2, 5)
    p = Partition.from_spec("0;1")
    c = Circuit(
        2,
        (
            rotation(PauliTerm.from_label("Y0", 2), 0.0, True),
            rotation(PauliTerm.from_label("X1", 2), 0.0, True),
        ),
    )
    ref = VariationalReference(p, c)

    from cliffold import ClusteredTerms

    ct = ClusteredTerms(h, p)

    def energy(ts):
        return ct.expectation(ref.state(ts))

    thetas = rng.uniform(-math.pi, math.pi, size=2)
    eps = 1e-6
    for i in range(2):
        plus = thetas.copy()
        minus = thetas.copy()
        plus[i] += 0.5 * math.pi
        minus[i] -= 0.5 * math.pi
        shift = 0.5 * (energy(plus) - energy(minus))
        plus_fd = thetas.copy()
        minus_fd = thetas.copy()
        plus_fd[i] += eps
        minus_fd[i] -= eps
        fd = (energy(plus_fd) - energy(minus_fd)) / (2 * eps)
        assert abs(shift - fd) < 1e-5
