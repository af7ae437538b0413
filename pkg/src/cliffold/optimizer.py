"""Genetic search for the folded re-entangling circuit, plus the
near-Clifford single-gate parametrization sweep.

The search never touches statevectors directly: every candidate circuit is
folded into the Hamiltonian and scored by re-solving the product-state
reference on the folded operator.  Determinism is by construction: one
seeded stream per population, a fixed reference seed for every candidate,
and selection that never depends on evaluation order, so thread count
cannot change results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import NotCliffordError
from .folding import fold_circuit, fold_gate
from .gates import (
    CLIFFORD_1Q,
    CONTROLLED,
    DEFAULT_POOL,
    GENERAL,
    ROTATION,
    Circuit,
    Gate,
    Partition,
    general,
    rotation,
    sample_pool_gates,
)
from .pauli import PauliSum, PauliTerm
from .reference import PowerMethodConfig, PowerMethodResult, power_method, worker_count
from .simulator import ClusteredTerms, ClusterState

# Reference budgets: loose inside generations, tight for final winners.
ADD_WEIGHT_FLOOR = 0.15
BASELINE_SLACK = 1e-12


@dataclass(frozen=True)
class ReferenceBudget:
    tol: float
    max_iter: int
    restarts: int


LOOSE_BUDGET = ReferenceBudget(tol=1e-5, max_iter=400, restarts=2)
TIGHT_BUDGET = ReferenceBudget(tol=1e-8, max_iter=10000, restarts=5)


@dataclass(frozen=True)
class PowerMethodBackend:
    """Reference backend scoring folded operators with the power method.

    The seed is fixed across candidates on purpose: every candidate is
    scored from identical starting conditions, which also makes results
    independent of evaluation order and thread count.
    """

    gamma: float | str = "auto"
    seed: int = 0

    def solve(
        self, h_folded: PauliSum, partition: Partition, budget: ReferenceBudget
    ) -> PowerMethodResult:
        cfg = PowerMethodConfig(
            gamma=self.gamma,
            tol=budget.tol,
            max_iter=budget.max_iter,
            seed=self.seed,
            restarts=budget.restarts,
        )
        return power_method(h_folded, partition, cfg)


def evaluate_candidate(
    h: PauliSum,
    m: Circuit,
    partition: Partition,
    ref_backend: PowerMethodBackend,
    budget: ReferenceBudget,
) -> float:
    folded, _ = fold_circuit(h, m)
    return ref_backend.solve(folded, partition, budget).energy


@dataclass(frozen=True)
class GAConfig:
    n_populations: int = 12
    n_offspring: int = 9
    max_iter: int = 20
    patience_limit: int = 4
    temperature_initial: float = 0.02
    temperature_decay: float = 0.9
    mutation_weights: tuple[float, float, float, float] = (0.35, 0.40, 0.15, 0.10)
    cross_cluster_only: bool = False
    seed: int = 0
    convergence_tol: float = 1e-9

    def __post_init__(self) -> None:
        if min(self.n_populations, self.n_offspring, self.max_iter) < 1:
            raise ValueError("population, offspring and iteration counts must be >= 1")
        if self.patience_limit < 1:
            raise ValueError("patience_limit must be >= 1")
        if not (0.0 < self.temperature_decay < 1.0):
            raise ValueError("temperature_decay must lie in (0, 1)")
        if self.temperature_initial <= 0.0:
            raise ValueError("temperature_initial must be positive")
        w = self.mutation_weights
        if len(w) != 4 or any(x < 0 for x in w) or abs(sum(w) - 1.0) > 1e-9:
            raise ValueError("mutation_weights must be 4 non-negative values summing to 1")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")

    def weights_at(self, iteration: int) -> tuple[float, float, float, float]:
        """Mutation weights with the add rate annealed linearly down to the
        floor by max_iter; the other moves share the freed mass pro rata."""
        w_add, w_change, w_delete, w_rearrange = self.mutation_weights
        frac = min(max(iteration, 0) / self.max_iter, 1.0)
        add = w_add + (min(ADD_WEIGHT_FLOOR, w_add) - w_add) * frac
        rest = w_change + w_delete + w_rearrange
        if rest <= 0.0:
            return (1.0, 0.0, 0.0, 0.0)
        scale = (1.0 - add) / rest
        return (add, w_change * scale, w_delete * scale, w_rearrange * scale)


@dataclass(frozen=True)
class PopulationState:
    circuit: Circuit
    energy: float
    best_energy: float
    patience: int
    snapshot: Circuit
    snapshot_energy: float
    temperature: float


_ARITY_KINDS_1Q = set(CLIFFORD_1Q)


def _replace_on_same_qubits(victim: Gate, sampled: Gate) -> Gate | None:
    """Re-place a sampled discrete gate onto the victim's qubits when the
    arities line up; None means the caller should substitute the block."""
    if sampled.kind in _ARITY_KINDS_1Q and len(victim.qubits) == 1:
        return Gate(sampled.kind, targets=victim.qubits)
    if len(victim.qubits) == 2:
        a, b = victim.qubits
        if sampled.kind == "SWAP":
            return Gate("SWAP", targets=(a, b))
        if sampled.kind in CONTROLLED:
            return Gate(sampled.kind, targets=(b,), control=a)
    return None


def propose_mutation(
    p: PopulationState,
    pool,
    partition: Partition,
    rng: np.random.Generator,
    weights: tuple[float, float, float, float] | None = None,
    cross_cluster_only: bool = False,
) -> Circuit:
    """One mutated copy of the population's circuit.

    Moves: add (insert a pool element at a random position), change (swap a
    gate for a pool sample, reusing its qubits when arities match), delete,
    rearrange (swap two gate positions).  Moves that need more gates than
    the circuit has degrade to add.
    """
    circuit = p.circuit
    moves = ("add", "change", "delete", "rearrange")
    w = weights if weights is not None else (0.35, 0.40, 0.15, 0.10)
    move = moves[int(rng.choice(4, p=np.asarray(w, dtype=float)))]
    if move in ("change", "delete") and len(circuit) == 0:
        move = "add"
    if move == "rearrange" and len(circuit) < 2:
        move = "add"

    n = circuit.n_qubits
    if move == "add":
        block = sample_pool_gates(pool, n, partition, rng, cross_cluster_only)
        pos = int(rng.integers(len(circuit) + 1))
        return circuit.inserted(pos, block)
    if move == "delete":
        return circuit.without(int(rng.integers(len(circuit))))
    if move == "rearrange":
        i, j = (int(v) for v in rng.choice(len(circuit), size=2, replace=False))
        return circuit.swapped(i, j)
    # change
    idx = int(rng.integers(len(circuit)))
    victim = circuit.gates[idx]
    block = sample_pool_gates(pool, n, partition, rng, cross_cluster_only)
    if len(block) == 1:
        placed = _replace_on_same_qubits(victim, block[0])
        if placed is not None:
            return circuit.replaced(idx, placed)
    return circuit.without(idx).inserted(idx, block)


def select_offspring(
    parent: PopulationState,
    children,
    rng: np.random.Generator,
    *,
    baseline: float,
    patience_limit: int,
    decay: float,
) -> PopulationState:
    """Metropolis-style single-survivor selection.

    The best child is taken if it improves on the parent; a worse child is
    accepted with probability exp(-dE/T); anything above the reference
    baseline is vetoed outright.  Rejection bumps patience; at the limit the
    circuit rolls back to its snapshot.  Temperature decays once per call.
    """
    if not children:
        raise ValueError("select_offspring needs at least one child")
    energies = [e for _, e in children]
    best_i = min(range(len(children)), key=lambda i: (energies[i], i))
    cand_circuit, cand_energy = children[best_i]

    accept = False
    if cand_energy <= baseline + BASELINE_SLACK:
        if cand_energy < parent.energy:
            accept = True
        else:
            delta = cand_energy - parent.energy
            t = max(parent.temperature, 1e-300)
            accept = float(rng.random()) < math.exp(-delta / t)

    new_t = parent.temperature * decay
    if accept:
        improved = cand_energy < parent.energy
        return PopulationState(
            circuit=cand_circuit,
            energy=cand_energy,
            best_energy=min(parent.best_energy, cand_energy),
            patience=0 if improved else parent.patience,
            snapshot=cand_circuit if improved else parent.snapshot,
            snapshot_energy=cand_energy if improved else parent.snapshot_energy,
            temperature=new_t,
        )
    patience = parent.patience + 1
    if patience >= patience_limit:
        return PopulationState(
            circuit=parent.snapshot,
            energy=parent.snapshot_energy,
            best_energy=parent.best_energy,
            patience=0,
            snapshot=parent.snapshot,
            snapshot_energy=parent.snapshot_energy,
            temperature=new_t,
        )
    return replace(parent, patience=patience, temperature=new_t)


@dataclass(frozen=True)
class SearchResult:
    circuit: Circuit
    state: ClusterState
    energy: float
    baseline_energy: float
    generations: int
    trace: tuple[tuple[int, int, float], ...]  # (generation, population, energy)

    def trace_csv(self) -> str:
        lines = ["generation,population,energy"]
        for g, p, e in self.trace:
            lines.append(f"{g},{p},{e:.17g}")
        return "\n".join(lines) + "\n"


def run_search(
    h: PauliSum,
    partition: Partition,
    cfg: GAConfig = GAConfig(),
    pool=DEFAULT_POOL,
    ref_backend: PowerMethodBackend | None = None,
    tight_budget: ReferenceBudget = TIGHT_BUDGET,
) -> SearchResult:
    """Evolve per-population circuits until max_iter or the global best
    stops moving by more than convergence_tol across a generation.

    The empty circuit (reference baseline) seeds the global best, so the
    returned energy can never exceed the baseline.
    """
    backend = ref_backend or PowerMethodBackend(gamma="auto", seed=cfg.seed)
    empty = Circuit(h.n_qubits)
    baseline = evaluate_candidate(h, empty, partition, backend, tight_budget)

    rngs = [
        np.random.default_rng(s)
        for s in np.random.SeedSequence(cfg.seed).spawn(cfg.n_populations)
    ]

    def loose(m: Circuit) -> float:
        return evaluate_candidate(h, m, partition, backend, LOOSE_BUDGET)

    workers = worker_count()

    def eval_many(circuits: list[Circuit]) -> list[float]:
        if workers > 1 and len(circuits) > 1:
            with ThreadPoolExecutor(max_workers=workers) as tp:
                return list(tp.map(loose, circuits))
        return [loose(m) for m in circuits]

    init_circuits = []
    for rng in rngs:
        gs: list[Gate] = []
        for _ in range(int(rng.integers(1, 4))):
            gs.extend(
                sample_pool_gates(pool, h.n_qubits, partition, rng,
                                  cfg.cross_cluster_only)
            )
        init_circuits.append(Circuit(h.n_qubits, tuple(gs)))
    init_energies = eval_many(init_circuits)

    pops = [
        PopulationState(
            circuit=c,
            energy=e,
            best_energy=e,
            patience=0,
            snapshot=c,
            snapshot_energy=e,
            temperature=cfg.temperature_initial,
        )
        for c, e in zip(init_circuits, init_energies)
    ]

    best_circuit = empty
    best_energy = baseline
    for c, e in zip(init_circuits, init_energies):
        if e < best_energy:
            best_circuit, best_energy = c, e

    trace: list[tuple[int, int, float]] = []
    generations = 0
    prev_best = best_energy
    for gen in range(cfg.max_iter):
        generations = gen + 1
        weights = cfg.weights_at(gen)
        proposals: list[list[Circuit]] = []
        for pop, rng in zip(pops, rngs):
            proposals.append(
                [
                    propose_mutation(
                        pop, pool, partition, rng, weights,
                        cfg.cross_cluster_only,
                    )
                    for _ in range(cfg.n_offspring)
                ]
            )
        flat = [m for group in proposals for m in group]
        flat_energies = eval_many(flat)
        cursor = 0
        for i, (pop, rng) in enumerate(zip(pops, rngs)):
            group = proposals[i]
            energies = flat_energies[cursor:cursor + len(group)]
            cursor += len(group)
            for m, e in zip(group, energies):
                if e < best_energy:
                    best_circuit, best_energy = m, e
            pops[i] = select_offspring(
                pop,
                list(zip(group, energies)),
                rng,
                baseline=baseline,
                patience_limit=cfg.patience_limit,
                decay=cfg.temperature_decay,
            )
            trace.append((gen, i, pops[i].energy))
        if gen > 0 and prev_best - best_energy < cfg.convergence_tol:
            break
        prev_best = best_energy

    folded, _ = fold_circuit(h, best_circuit)
    tight = backend.solve(folded, partition, tight_budget)
    final_circuit, final_energy, final_state = best_circuit, tight.energy, tight.state
    if final_energy > baseline:
        folded_empty, _ = fold_circuit(h, empty)
        ref = backend.solve(folded_empty, partition, tight_budget)
        final_circuit, final_energy, final_state = empty, ref.energy, ref.state
    return SearchResult(
        circuit=final_circuit,
        state=final_state,
        energy=final_energy,
        baseline_energy=baseline,
        generations=generations,
        trace=tuple(trace),
    )


# -- near-Clifford sweep -----------------------------------------------------

_H_GENERATOR = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)

_AXIS_OF = {"X": "X", "Y": "Y", "Z": "Z", "S": "Z", "Sdg": "Z"}
_THETA_OF = {"X": math.pi, "Y": math.pi, "Z": math.pi,
             "S": 0.5 * math.pi, "Sdg": 1.5 * math.pi}


def parametrized_form(gate: Gate, n_qubits: int) -> Gate | None:
    """Continuous-generator version of an eligible single-qubit gate, with
    the angle at its Clifford-equivalent value; None when ineligible."""
    if gate.kind == "H":
        return general(gate.targets, _H_GENERATOR, math.pi, parametrized=True)
    if gate.kind in _AXIS_OF:
        gen = PauliTerm.from_label(f"{_AXIS_OF[gate.kind]}{gate.targets[0]}", n_qubits)
        return rotation(gen, _THETA_OF[gate.kind], parametrized=True)
    if gate.kind == ROTATION and gate.generator.weight == 1:
        return replace(gate, parametrized=True)
    return None


@dataclass(frozen=True)
class SweepResult:
    circuit: Circuit
    gate_index: int | None
    tau: float | None
    energy: float
    state: ClusterState
    clifford_energy: float
    notice: str | None = None


def _golden_section(f, lo: float, hi: float, tol: float, max_iter: int = 200):
    """Deterministic bounded golden-section minimizer."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = f(c)
    fd = f(d)
    it = 0
    while (b - a) > tol and it < max_iter:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        it += 1
    x = 0.5 * (a + b)
    return x, f(x)


_SCAN_GRID = 16


def _line_minimize(f, center: float, tol: float, n_grid: int = _SCAN_GRID):
    """Minimize a 2*pi-periodic 1-D slice over one full period.

    The slice is a trigonometric polynomial and generally multimodal, so a
    bare golden-section can sit down in the wrong valley; bracket first with
    a coarse grid (center always a grid point), then refine by golden-section
    inside the winning bracket.
    """
    step = 2.0 * math.pi / n_grid
    xs = [center + (j - n_grid // 2) * step for j in range(n_grid)]
    fs = [f(x) for x in xs]
    k = min(range(n_grid), key=lambda j: (fs[j], j))
    x, fx = _golden_section(f, xs[k] - step, xs[k] + step, tol)
    if fs[k] < fx:
        return xs[k], fs[k]
    return x, fx


def near_clifford_sweep(
    h: PauliSum,
    m_clifford: Circuit,
    partition: Partition,
    cfg: GAConfig = GAConfig(),
    ref_backend: PowerMethodBackend | None = None,
    max_alternations: int = 12,
    tight_budget: ReferenceBudget = TIGHT_BUDGET,
) -> SweepResult:
    """Try promoting each eligible gate (single-qubit, never controlled or
    SWAP) to its continuous form, co-optimizing the angle and the reference,
    and keep the single best replacement.

    The Clifford angle stays inside every search window, and a candidate
    that ends up worse than the tight Clifford baseline is discarded, so
    the returned energy never exceeds the baseline.
    """
    if not m_clifford.is_clifford:
        raise NotCliffordError("sweep input must be a Clifford circuit")
    backend = ref_backend or PowerMethodBackend(gamma="auto", seed=cfg.seed)

    folded_cliff, _ = fold_circuit(h, m_clifford)
    cliff = backend.solve(folded_cliff, partition, tight_budget)

    eligible = [
        (i, pg)
        for i, g in enumerate(m_clifford.gates)
        if (pg := parametrized_form(g, m_clifford.n_qubits)) is not None
    ]
    if not eligible:
        return SweepResult(
            circuit=m_clifford,
            gate_index=None,
            tau=None,
            energy=cliff.energy,
            state=cliff.state,
            clifford_energy=cliff.energy,
            notice="no eligible gate: circuit left Clifford",
        )

    n = m_clifford.n_qubits
    best: SweepResult | None = None
    for i, pgate in eligible:
        theta_c = pgate.angle
        # gates after position i fold first; freeze that inner part once
        inner, _ = fold_circuit(h, Circuit(n, m_clifford.gates[i + 1:]))
        prefix = Circuit(n, m_clifford.gates[:i])

        def folded_at(tau: float) -> PauliSum:
            mid = fold_gate(inner, replace(pgate, angle=float(tau)))
            out, _ = fold_circuit(mid, prefix)
            return out

        def energy_at(tau: float, state: ClusterState) -> float:
            return ClusteredTerms(folded_at(tau), partition).expectation(state)

        # Coordinate descent in (reference, tau) stalls if it starts in the
        # wrong valley of the multimodal slice, so seed tau with the best of
        # a re-solved coarse scan over one full period around the Clifford
        # angle (the Clifford angle itself is a scan point).
        tau = theta_c
        scan_energy = math.inf
        step = 2.0 * math.pi / _SCAN_GRID
        for j in range(_SCAN_GRID):
            t = theta_c + (j - _SCAN_GRID // 2) * step
            r = backend.solve(folded_at(t), partition, LOOSE_BUDGET)
            if r.energy < scan_energy:
                scan_energy = r.energy
                tau = t
        prev_energy = math.inf
        state = cliff.state
        for _ in range(max_alternations):
            res = backend.solve(folded_at(tau), partition, LOOSE_BUDGET)
            state = res.state
            tau, e = _line_minimize(lambda t: energy_at(t, state), tau, tol=1e-4)
            if abs(prev_energy - e) < LOOSE_BUDGET.tol:
                prev_energy = e
                break
            prev_energy = e
        # tight final pass: re-solve the reference, re-tune tau, re-solve
        res = backend.solve(folded_at(tau), partition, tight_budget)
        tau, _ = _line_minimize(lambda t: energy_at(t, res.state), tau, tol=1e-9)
        final = backend.solve(folded_at(tau), partition, tight_budget)
        if best is None or final.energy < best.energy:
            best = SweepResult(
                circuit=m_clifford.replaced(i, replace(pgate, angle=float(tau))),
                gate_index=i,
                tau=float(tau),
                energy=final.energy,
                state=final.state,
                clifford_energy=cliff.energy,
            )

    if best is None or best.energy > cliff.energy:
        return SweepResult(
            circuit=m_clifford,
            gate_index=None,
            tau=None,
            energy=cliff.energy,
            state=cliff.state,
            clifford_energy=cliff.energy,
            notice="no parametrization improved on the Clifford baseline",
        )
    return best
