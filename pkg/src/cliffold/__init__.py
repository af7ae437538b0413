"""cliffold: ground-state search over cluster product states with the
re-entangling circuit folded into the Hamiltonian.

The workflow: parse a Pauli-string Hamiltonian, pick a qubit partition,
solve the product-state reference (power method), genetically search a
Clifford circuit that is folded into the operator rather than applied to
the state, then optionally promote one gate to a continuous parameter.
"""

from . import _kernels
from .dense import (
    FEASIBILITY_CAP,
    apply_circuit_statevector,
    apply_gate_statevector,
    basis_state,
    circuit_unitary,
    embed_product_state,
    pauli_dense,
    paulisum_dense,
)
from .errors import (
    CapExceededError,
    ConvergenceError,
    DimensionMismatchError,
    NotCliffordError,
    ParseError,
)
from .folding import (
    FoldReport,
    conjugate_clifford,
    fold_circuit,
    fold_excitation,
    fold_gate,
    fold_general,
    fold_projector,
    fold_rotation,
)
from .gates import (
    DEFAULT_POOL,
    Circuit,
    Gate,
    Partition,
    clifford_angle_index,
    excitation_template,
    general,
    rotation,
    sample_pool_gates,
)
from .gates import dump as dump_circuit
from .gates import dumps as dumps_circuit
from .gates import load as load_circuit
from .gates import loads as loads_circuit
from .optimizer import (
    GAConfig,
    PopulationState,
    PowerMethodBackend,
    ReferenceBudget,
    SearchResult,
    SweepResult,
    evaluate_candidate,
    near_clifford_sweep,
    parametrized_form,
    propose_mutation,
    run_search,
    select_offspring,
)
from .pauli import PauliSum, PauliTerm
from .pauli import dump as dump_hamiltonian
from .pauli import dumps as dumps_hamiltonian
from .pauli import load as load_hamiltonian
from .pauli import loads as loads_hamiltonian
from .reference import (
    OptimizeResult,
    PowerMethodConfig,
    PowerMethodResult,
    VariationalReference,
    optimize_reference,
    power_method,
    reduced_hamiltonian,
)
from .simulator import (
    ClusteredTerms,
    ClusterState,
    FidelityTable,
    Spectrum,
    apply_circuit,
    exact_ground,
    expectation,
    fidelity_table,
)

__version__ = "0.1.0"

KERNEL_BACKEND = _kernels.BACKEND

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "FEASIBILITY_CAP",
    "PauliSum",
    "PauliTerm",
    "Circuit",
    "Gate",
    "Partition",
    "rotation",
    "general",
    "excitation_template",
    "DEFAULT_POOL",
    "sample_pool_gates",
    "clifford_angle_index",
    "load_hamiltonian",
    "loads_hamiltonian",
    "dump_hamiltonian",
    "dumps_hamiltonian",
    "load_circuit",
    "loads_circuit",
    "dump_circuit",
    "dumps_circuit",
    "pauli_dense",
    "paulisum_dense",
    "basis_state",
    "circuit_unitary",
    "apply_gate_statevector",
    "apply_circuit_statevector",
    "embed_product_state",
    "FoldReport",
    "fold_circuit",
    "fold_gate",
    "fold_rotation",
    "fold_projector",
    "fold_excitation",
    "fold_general",
    "conjugate_clifford",
    "ClusterState",
    "ClusteredTerms",
    "Spectrum",
    "FidelityTable",
    "expectation",
    "apply_circuit",
    "exact_ground",
    "fidelity_table",
    "PowerMethodConfig",
    "PowerMethodResult",
    "power_method",
    "reduced_hamiltonian",
    "VariationalReference",
    "OptimizeResult",
    "optimize_reference",
    "GAConfig",
    "PopulationState",
    "PowerMethodBackend",
    "SearchResult",
    "SweepResult",
    "ReferenceBudget",
    "run_search",
    "near_clifford_sweep",
    "parametrized_form",
    "propose_mutation",
    "select_offspring",
    "evaluate_candidate",
    "ParseError",
    "DimensionMismatchError",
    "NotCliffordError",
    "CapExceededError",
    "ConvergenceError",
]
