"""Product-state reference solvers.

Two ways to produce the baseline product state the search must beat:

* :func:`power_method` — shifted power iteration alternated over clusters
  (Gauss-Seidel style): build the reduced operator for one cluster against
  the current other-cluster states, apply (H_red - gamma I), renormalize.
* :func:`optimize_reference` — a parametrized cluster-local rotation ansatz
  minimized with analytic parameter-shift gradients and L-BFGS-B.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize as _sciopt

from . import _kernels
from .errors import DimensionMismatchError
from .gates import ROTATION, Circuit, Partition
from .pauli import PauliSum, PauliTerm
from .simulator import ClusteredTerms, ClusterState, apply_circuit


def worker_count() -> int:
    raw = os.environ.get("CLIFFOLD_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


@dataclass(frozen=True)
class PowerMethodConfig:
    gamma: float | str = 1.0  # numeric shift, or "auto" for one-norm + 1
    tol: float = 1e-8
    max_iter: int = 10000
    seed: int = 0
    restarts: int = 5

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if isinstance(self.gamma, str) and self.gamma != "auto":
            raise ValueError(f"gamma must be a number or 'auto', got {self.gamma!r}")


@dataclass(frozen=True)
class PowerMethodResult:
    state: ClusterState
    energy: float
    converged: bool
    sweeps: int
    trace: tuple[float, ...]  # energy after each accepted sweep, best restart


def _resolve_gamma(cfg: PowerMethodConfig, h: PauliSum) -> float:
    if cfg.gamma == "auto":
        return h.one_norm() + 1.0
    return float(cfg.gamma)


def _run_one_restart(
    ct: ClusteredTerms,
    partition: Partition,
    gamma: float,
    tol: float,
    max_iter: int,
    rng: np.random.Generator,
) -> PowerMethodResult:
    state = ClusterState.random_state(partition, rng)
    values = ct.cluster_values(state)
    energy = ct.energy_from_values(values)
    trace = [energy]
    converged = False
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        prev_state = state
        prev_values = [v.copy() for v in values]
        for cid in range(partition.n_clusters):
            xs, zs, coeffs = ct.reduced_masks(values, cid)
            vec = state.vectors[cid]
            new_vec = _kernels.matvec(vec, xs, zs, coeffs) - gamma * vec
            norm = np.linalg.norm(new_vec)
            if norm == 0.0:
                continue  # vec is exactly an eigenvector at gamma; keep it
            new_vec = new_vec / norm
            state = state.replace_cluster(cid, new_vec)
            values[cid] = _kernels.expval_batch(
                state.vectors[cid], ct.local_x[cid], ct.local_z[cid]
            )
        new_energy = ct.energy_from_values(values)
        if new_energy > energy + tol:
            # shifted iteration walked uphill (gamma on the wrong side of the
            # spectrum midpoint); keep the last good state
            state = prev_state
            values = prev_values
            break
        delta = abs(new_energy - energy)
        energy = new_energy
        trace.append(energy)
        if delta <= tol:
            converged = True
            break
    return PowerMethodResult(state, energy, converged, sweeps, tuple(trace))


def power_method(
    h: PauliSum, partition: Partition, cfg: PowerMethodConfig = PowerMethodConfig()
) -> PowerMethodResult:
    """Best product state over ``cfg.restarts`` seeded random starts."""
    ct = ClusteredTerms(h, partition)
    gamma = _resolve_gamma(cfg, h)
    streams = [
        np.random.default_rng(s)
        for s in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    ]

    def run(rng: np.random.Generator) -> PowerMethodResult:
        return _run_one_restart(ct, partition, gamma, cfg.tol, cfg.max_iter, rng)

    workers = min(worker_count(), cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, streams))
    else:
        results = [run(rng) for rng in streams]
    best = results[0]
    for r in results[1:]:
        if r.energy < best.energy:  # strict: ties keep the earlier restart
            best = r
    return best


def reduced_hamiltonian(h: PauliSum, s: ClusterState, cluster: int) -> PauliSum:
    """Contract every term against the other clusters' states; the result
    acts on ``len(cluster qubits)`` qubits (cluster-local indexing)."""
    partition = s.partition
    if not (0 <= cluster < partition.n_clusters):
        raise ValueError(f"invalid cluster id {cluster}")
    if h.n_qubits != partition.n_qubits:
        raise DimensionMismatchError("operator/partition size mismatch")
    ct = ClusteredTerms(h, partition)
    values = ct.cluster_values(s)
    xs, zs, coeffs = ct.reduced_masks(values, cluster)
    size = len(partition.clusters[cluster])
    return PauliSum(
        size,
        (
            PauliTerm(size, int(x), int(z), 0, complex(c))
            for x, z, c in zip(xs, zs, coeffs)
        ),
    )


# -- variational reference ---------------------------------------------------


@dataclass(frozen=True)
class VariationalReference:
    """Cluster-local rotation ansatz applied to |0...0>.

    Every parametrized gate must be a Pauli rotation (the parameter-shift
    rule below assumes involutory generators); fixed gates may be anything
    cluster-local.
    """

    partition: Partition
    circuit: Circuit
    initial_thetas: tuple[float, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        for g in self.circuit.gates:
            if self.partition.spans_clusters(g.qubits):
                raise ValueError(f"{g.kind} gate on {g.qubits} spans clusters")
            if g.parametrized and g.kind != ROTATION:
                raise ValueError("only Pauli rotations can be parametrized here")
        if self.initial_thetas is None:
            object.__setattr__(
                self, "initial_thetas", self.circuit.parameters()
            )
        elif len(self.initial_thetas) != self.circuit.n_parameters:
            raise ValueError("initial_thetas length != parameter count")

    def state(self, thetas) -> ClusterState:
        bound = self.circuit.bind_parameters(list(thetas))
        return apply_circuit(ClusterState.zero_state(self.partition), bound)


@dataclass(frozen=True)
class OptimizeResult:
    thetas: tuple[float, ...]
    energy: float
    state: ClusterState
    n_evaluations: int


def optimize_reference(
    ref: VariationalReference,
    h_folded: PauliSum,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> OptimizeResult:
    """Minimize the folded-operator energy over the ansatz angles.

    Gradients use the parameter-shift identity for involutory generators:
    dE/dt = (E(t + pi/2) - E(t - pi/2)) / 2.
    """
    ct = ClusteredTerms(h_folded, ref.partition)
    evals = 0

    def energy(thetas: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        return ct.expectation(ref.state(thetas))

    n = ref.circuit.n_parameters
    x0 = np.asarray(ref.initial_thetas, dtype=float)
    if n == 0:
        st = ref.state(())
        return OptimizeResult((), ct.expectation(st), st, 1)

    def grad(thetas: np.ndarray) -> np.ndarray:
        g = np.empty(n)
        for i in range(n):
            plus = thetas.copy()
            minus = thetas.copy()
            plus[i] += 0.5 * math.pi
            minus[i] -= 0.5 * math.pi
            g[i] = 0.5 * (energy(plus) - energy(minus))
        return g

    res = _sciopt.minimize(
        energy,
        x0,
        jac=grad,
        method="L-BFGS-B",
        tol=tol,
        options={"maxiter": max_iter},
    )
    thetas = tuple(float(t) for t in res.x)
    st = ref.state(thetas)
    return OptimizeResult(thetas, ct.expectation(st), st, evals)
