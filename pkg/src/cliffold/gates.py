"""Gate records, circuits, qubit partitions and the mutation gate pool.

A circuit is an ordered gate list; gate 0 acts first on states.  Supported
kinds:

* discrete single-qubit Cliffords: H, S, Sdg, X, Y, Z
* discrete two-qubit Cliffords: CX, CY, CZ (control + one target), SWAP
* ``PauliRotation``: exp(-i angle/2 * P) for a unit-coefficient Pauli
  string P given as the ``generator``
* ``GeneralGate``: exp(-i angle/2 * G) for an explicit Hermitian matrix G
  on 1-3 target qubits

Local generator matrices are little-endian over the ``targets`` tuple:
``targets[i]`` is index bit i, so ``targets[0]`` is the least significant
bit of the matrix row index.

Circuit JSON (one object, ``format: "cliffold-circuit/1"``) stores each
gate as ``{kind, targets, control, angle, parametrized, generator}`` where
a Pauli generator is its factor string (e.g. ``"X0 Z1"``) and a matrix
generator is a nested list of ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, NotCliffordError, ParseError
from .pauli import PauliTerm

CLIFFORD_1Q = ("H", "S", "Sdg", "X", "Y", "Z")
CLIFFORD_2Q = ("CX", "CY", "CZ", "SWAP")
CONTROLLED = ("CX", "CY", "CZ")
ROTATION = "PauliRotation"
GENERAL = "GeneralGate"
ALL_KINDS = CLIFFORD_1Q + CLIFFORD_2Q + (ROTATION, GENERAL)

# Pool angles for sampled Clifford rotations inside excitation templates.
CLIFFORD_ANGLES = (0.5 * math.pi, math.pi, 1.5 * math.pi)

DEFAULT_POOL = CLIFFORD_1Q + CLIFFORD_2Q + ("Exc1", "Exc2")

_TWO_PI = 2.0 * math.pi


def clifford_angle_index(angle: float, tol: float = 1e-9) -> int | None:
    """k in {0,1,2,3} when angle is within tol of k*pi/2 (mod 2pi), else None."""
    reduced = math.fmod(angle, _TWO_PI)
    if reduced < 0.0:
        reduced += _TWO_PI
    k = round(reduced / (0.5 * math.pi))
    if abs(reduced - k * 0.5 * math.pi) <= tol:
        return k % 4
    return None


def is_clifford_angle(angle: float, tol: float = 1e-9) -> bool:
    return clifford_angle_index(angle, tol) is not None


@dataclass(frozen=True, eq=False)
class Gate:
    """One gate application.  Immutable; reparametrize via replace()."""

    kind: str
    targets: tuple[int, ...]
    control: int | None = None
    generator: object | None = None  # PauliTerm or complex ndarray
    angle: float | None = None
    parametrized: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if self.kind not in ALL_KINDS:
            raise ParseError(f"unknown gate kind {self.kind!r}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"duplicate targets in {self.kind} gate")
        if any(t < 0 for t in self.targets):
            raise ValueError("negative qubit index")
        if self.kind in CLIFFORD_1Q:
            self._require(len(self.targets) == 1, "exactly one target")
            self._require(self.control is None, "no control")
            self._require(self.generator is None and self.angle is None,
                          "no generator or angle")
            self._require(not self.parametrized, "not parametrizable")
        elif self.kind in CONTROLLED:
            self._require(len(self.targets) == 1, "exactly one target")
            self._require(isinstance(self.control, int) and self.control >= 0,
                          "a control qubit")
            self._require(self.control not in self.targets,
                          "control distinct from target")
            self._require(self.generator is None and self.angle is None,
                          "no generator or angle")
            self._require(not self.parametrized, "not parametrizable")
        elif self.kind == "SWAP":
            self._require(len(self.targets) == 2, "exactly two targets")
            self._require(self.control is None, "no control")
            self._require(self.generator is None and self.angle is None,
                          "no generator or angle")
            self._require(not self.parametrized, "not parametrizable")
        elif self.kind == ROTATION:
            self._require(isinstance(self.generator, PauliTerm),
                          "a PauliTerm generator")
            self._require(self.angle is not None, "an angle")
            self._require(self.control is None, "no control")
            gen: PauliTerm = self.generator  # type: ignore[assignment]
            if abs(gen.canonical_coefficient() - 1.0) > 1e-12:
                raise ValueError(
                    "rotation generator must be a unit-coefficient Pauli string"
                )
            sup = tuple(sorted(gen.support()))
            if not sup:
                raise ValueError("rotation generator must act on at least one qubit")
            if self.targets != sup:
                raise ValueError(
                    f"targets {self.targets} do not match generator support {sup}"
                )
        elif self.kind == GENERAL:
            self._require(self.angle is not None, "an angle")
            self._require(self.control is None, "no control")
            self._require(1 <= len(self.targets) <= 3, "1-3 targets")
            mat = np.asarray(self.generator, dtype=np.complex128)
            dim = 1 << len(self.targets)
            if mat.shape != (dim, dim):
                raise ValueError(
                    f"generator matrix shape {mat.shape} does not match "
                    f"{len(self.targets)} targets"
                )
            if np.max(np.abs(mat - mat.conj().T)) > 1e-10:
                raise ValueError("generator matrix must be Hermitian")
            mat.setflags(write=False)
            object.__setattr__(self, "generator", mat)
        if self.parametrized and self.kind not in (ROTATION, GENERAL):
            raise ValueError(f"{self.kind} gates carry no continuous parameter")
        if self.angle is not None:
            object.__setattr__(self, "angle", float(self.angle))

    def _require(self, cond: bool, what: str) -> None:
        if not cond:
            raise ValueError(f"{self.kind} gate needs {what}")

    @property
    def qubits(self) -> tuple[int, ...]:
        if self.control is not None:
            return (self.control,) + self.targets
        return self.targets

    @property
    def is_clifford(self) -> bool:
        """True when the discrete-Clifford fold path applies to this gate."""
        if self.kind in CLIFFORD_1Q or self.kind in CLIFFORD_2Q:
            return True
        if self.kind == ROTATION:
            return is_clifford_angle(self.angle)
        return False

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gate):
            return NotImplemented
        if (self.kind, self.targets, self.control, self.angle, self.parametrized) != (
            other.kind, other.targets, other.control, other.angle, other.parametrized
        ):
            return False
        if isinstance(self.generator, PauliTerm) or isinstance(
            other.generator, PauliTerm
        ):
            return self.generator == other.generator
        if self.generator is None or other.generator is None:
            return self.generator is None and other.generator is None
        return np.array_equal(self.generator, other.generator)

    __hash__ = None  # type: ignore[assignment]


def rotation(generator: PauliTerm, angle: float, parametrized: bool = False) -> Gate:
    """PauliRotation with targets derived from the generator's support."""
    return Gate(
        kind=ROTATION,
        targets=tuple(sorted(generator.support())),
        generator=generator.canonical(),
        angle=angle,
        parametrized=parametrized,
    )


def general(
    targets: Sequence[int], matrix: np.ndarray, angle: float, parametrized: bool = False
) -> Gate:
    return Gate(
        kind=GENERAL,
        targets=tuple(targets),
        generator=matrix,
        angle=angle,
        parametrized=parametrized,
    )


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate list on a fixed-width register; gate 0 acts first."""

    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise DimensionMismatchError(
                    f"{g.kind} gate on {g.qubits} outside {self.n_qubits}-qubit register"
                )
            if g.kind == ROTATION and g.generator.n_qubits != self.n_qubits:
                raise DimensionMismatchError(
                    "rotation generator register width differs from circuit"
                )

    def __len__(self) -> int:
        return len(self.gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.gates == other.gates

    __hash__ = None  # type: ignore[assignment]

    @property
    def is_clifford(self) -> bool:
        return all(g.is_clifford for g in self.gates)

    def support(self) -> frozenset[int]:
        out: set[int] = set()
        for g in self.gates:
            out.update(g.qubits)
        return frozenset(out)

    def appended(self, *gs: Gate) -> "Circuit":
        return Circuit(self.n_qubits, self.gates + tuple(gs))

    def inserted(self, index: int, gs: "Gate | Iterable[Gate]") -> "Circuit":
        if isinstance(gs, Gate):
            gs = (gs,)
        gl = list(self.gates)
        gl[index:index] = list(gs)
        return Circuit(self.n_qubits, tuple(gl))

    def without(self, index: int) -> "Circuit":
        gl = list(self.gates)
        del gl[index]
        return Circuit(self.n_qubits, tuple(gl))

    def replaced(self, index: int, g: Gate) -> "Circuit":
        gl = list(self.gates)
        gl[index] = g
        return Circuit(self.n_qubits, tuple(gl))

    def swapped(self, i: int, j: int) -> "Circuit":
        gl = list(self.gates)
        gl[i], gl[j] = gl[j], gl[i]
        return Circuit(self.n_qubits, tuple(gl))

    # -- parameters -------------------------------------------------------

    def parameter_indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gates) if g.parametrized)

    @property
    def n_parameters(self) -> int:
        return len(self.parameter_indices())

    def bind_parameters(self, thetas: Sequence[float]) -> "Circuit":
        idxs = self.parameter_indices()
        if len(thetas) != len(idxs):
            raise ValueError(
                f"{len(idxs)} parametrized gates but {len(thetas)} angles"
            )
        gl = list(self.gates)
        for i, theta in zip(idxs, thetas):
            gl[i] = replace(gl[i], angle=float(theta))
        return Circuit(self.n_qubits, tuple(gl))

    def parameters(self) -> tuple[float, ...]:
        return tuple(self.gates[i].angle for i in self.parameter_indices())


# -- partitions --------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Assignment of every qubit to exactly one cluster.

    ``cluster_index[q]`` is the cluster id of qubit q; ids are contiguous
    starting at 0.  The text grammar is semicolon-separated groups of
    comma-separated indices or inclusive ranges, e.g. ``"0-2;3,5;4"``.
    """

    cluster_index: tuple[int, ...]
    clusters: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "cluster_index", tuple(int(c) for c in self.cluster_index)
        )
        if not self.cluster_index:
            raise ValueError("empty partition")
        ids = sorted(set(self.cluster_index))
        if ids != list(range(len(ids))):
            raise ValueError("cluster ids must be contiguous from 0")
        clusters: list[list[int]] = [[] for _ in ids]
        for q, c in enumerate(self.cluster_index):
            clusters[c].append(q)
        object.__setattr__(
            self, "clusters", tuple(tuple(c) for c in clusters)
        )

    @property
    def n_qubits(self) -> int:
        return len(self.cluster_index)

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[int]]) -> "Partition":
        groups = [sorted(int(q) for q in grp) for grp in clusters]
        if any(not grp for grp in groups):
            raise ValueError("empty cluster")
        flat = sorted(q for grp in groups for q in grp)
        if flat != list(range(len(flat))):
            raise ValueError(
                "clusters must cover qubits 0..n-1 exactly once"
            )
        index = [0] * len(flat)
        for cid, grp in enumerate(groups):
            for q in grp:
                index[q] = cid
        return cls(tuple(index))

    @classmethod
    def from_spec(cls, spec: str) -> "Partition":
        groups: list[list[int]] = []
        for part in spec.split(";"):
            part = part.strip()
            if not part:
                raise ParseError(f"empty group in cluster spec {spec!r}")
            qubits: list[int] = []
            for item in part.split(","):
                item = item.strip()
                if "-" in item:
                    lo_s, hi_s = item.split("-", 1)
                    try:
                        lo, hi = int(lo_s), int(hi_s)
                    except ValueError as exc:
                        raise ParseError(f"bad range {item!r}") from exc
                    if hi < lo:
                        raise ParseError(f"descending range {item!r}")
                    qubits.extend(range(lo, hi + 1))
                else:
                    try:
                        qubits.append(int(item))
                    except ValueError as exc:
                        raise ParseError(f"bad qubit index {item!r}") from exc
            groups.append(qubits)
        flat = [q for grp in groups for q in grp]
        if len(set(flat)) != len(flat):
            raise ParseError(f"qubit assigned twice in cluster spec {spec!r}")
        if sorted(flat) != list(range(len(flat))):
            raise ParseError(
                f"cluster spec {spec!r} does not cover qubits 0..{max(flat)}"
            )
        return cls.from_clusters(groups)

    def to_spec(self) -> str:
        parts = []
        for grp in self.clusters:
            runs: list[str] = []
            start = prev = grp[0]
            for q in grp[1:] + (None,):  # type: ignore[operator]
                if q is not None and q == prev + 1:
                    prev = q
                    continue
                runs.append(str(start) if start == prev else f"{start}-{prev}")
                if q is not None:
                    start = prev = q
            parts.append(",".join(runs))
        return ";".join(parts)

    def cluster_of(self, qubit: int) -> int:
        return self.cluster_index[qubit]

    def spans_clusters(self, qubits: Iterable[int]) -> bool:
        return len({self.cluster_index[q] for q in qubits}) > 1


def circuit_crosses_clusters(circuit: Circuit, partition: Partition) -> bool:
    """True iff some gate touches at least two clusters."""
    return any(partition.spans_clusters(g.qubits) for g in circuit.gates)


# -- excitation-style templates ----------------------------------------------

WRAPPERS = (None, "Rx", "Ry")


def excitation_template(
    n_qubits: int,
    qubits: Sequence[int],
    wrappers: Sequence[str | None],
    angle: float,
    parametrized: bool = False,
) -> tuple[Gate, ...]:
    """Basis-wrapped parity ladder: per-qubit axis changes, a descending CX
    chain, one Z rotation on the last qubit, then the mirror image.

    The whole block implements exp(-i angle/2 * W) for a weight-len(qubits)
    Pauli string W whose axis on each qubit is set by the wrapper (None -> Z,
    "Rx" -> Y, "Ry" -> X up to sign).
    """
    qubits = tuple(int(q) for q in qubits)
    if len(set(qubits)) != len(qubits) or not qubits:
        raise ValueError("template qubits must be distinct and non-empty")
    if len(wrappers) != len(qubits):
        raise ValueError("one wrapper entry per template qubit")
    if not parametrized and clifford_angle_index(angle) is None:
        raise NotCliffordError(
            f"fixed template instance needs a Clifford angle, got {angle}"
        )

    def axis_rot(q: int, axis: str, theta: float) -> Gate:
        gen = PauliTerm.from_label(f"{axis}{q}", n_qubits)
        return rotation(gen, theta)

    pre: list[Gate] = []
    post: list[Gate] = []
    for q, w in zip(qubits, wrappers):
        if w is None:
            continue
        if w == "Rx":
            pre.append(axis_rot(q, "X", 0.5 * math.pi))
            post.append(axis_rot(q, "X", 1.5 * math.pi))
        elif w == "Ry":
            pre.append(axis_rot(q, "Y", 0.5 * math.pi))
            post.append(axis_rot(q, "Y", 1.5 * math.pi))
        else:
            raise ValueError(f"unknown wrapper {w!r}")
    ladder = [
        Gate("CX", targets=(qubits[i + 1],), control=qubits[i])
        for i in range(len(qubits) - 1)
    ]
    central = rotation(
        PauliTerm.from_label(f"Z{qubits[-1]}", n_qubits), angle, parametrized
    )
    return tuple(pre + ladder + [central] + list(reversed(ladder)) + list(reversed(post)))


# -- gate pool sampling --------------------------------------------------------

_TEMPLATE_SIZES = {"Exc1": 2, "Exc2": 4}


def sample_pool_gates(
    pool: Sequence[str],
    n_qubits: int,
    partition: Partition,
    rng: np.random.Generator,
    cross_cluster_only: bool = False,
) -> tuple[Gate, ...]:
    """Draw one pool element (a single gate, or a template block) with
    uniformly random placement.

    With ``cross_cluster_only`` the element must touch at least two clusters:
    single-qubit kinds are excluded from the draw and multi-qubit placements
    are constrained to span clusters.
    """
    def _size(k: str) -> int:
        return 1 if k in CLIFFORD_1Q else _TEMPLATE_SIZES.get(k, 2)

    # kinds wider than the register are silently unavailable
    kinds = [k for k in pool if _size(k) <= n_qubits]
    if cross_cluster_only:
        if partition.n_clusters < 2:
            raise ValueError("cross-cluster sampling needs at least two clusters")
        kinds = [k for k in kinds if k in CLIFFORD_2Q or k in _TEMPLATE_SIZES]
        if not kinds:
            raise ValueError("pool has no multi-qubit kinds to place across clusters")
    if not kinds:
        raise ValueError("empty gate pool")
    kind = kinds[rng.integers(len(kinds))]

    if kind in CLIFFORD_1Q:
        q = int(rng.integers(n_qubits))
        return (Gate(kind, targets=(q,)),)

    size = 2 if kind in CLIFFORD_2Q else _TEMPLATE_SIZES.get(kind)
    if size is None:
        raise ParseError(f"unknown pool kind {kind!r}")
    if n_qubits < size:
        raise ValueError(f"{kind} needs {size} qubits, register has {n_qubits}")

    if cross_cluster_only:
        for _ in range(1000):
            qs = tuple(int(q) for q in rng.choice(n_qubits, size=size, replace=False))
            if partition.spans_clusters(qs):
                break
        else:
            raise ValueError("could not place a cross-cluster gate")
    else:
        qs = tuple(int(q) for q in rng.choice(n_qubits, size=size, replace=False))

    if kind == "SWAP":
        return (Gate("SWAP", targets=(qs[0], qs[1])),)
    if kind in CONTROLLED:
        return (Gate(kind, targets=(qs[1],), control=qs[0]),)
    wrappers = [WRAPPERS[rng.integers(3)] for _ in range(size)]
    angle = CLIFFORD_ANGLES[rng.integers(3)]
    return excitation_template(n_qubits, qs, wrappers, angle)


# -- circuit JSON ---------------------------------------------------------------

_FORMAT = "cliffold-circuit/1"


def _gate_to_obj(g: Gate) -> dict:
    if g.generator is None:
        gen = None
    elif isinstance(g.generator, PauliTerm):
        gen = g.generator.label()
    else:
        gen = {
            "matrix": [
                [[float(v.real), float(v.imag)] for v in row]
                for row in np.asarray(g.generator)
            ]
        }
    return {
        "kind": g.kind,
        "targets": list(g.targets),
        "control": g.control,
        "angle": g.angle,
        "parametrized": g.parametrized,
        "generator": gen,
    }


def _gate_from_obj(obj: dict, n_qubits: int) -> Gate:
    try:
        kind = obj["kind"]
        targets = tuple(obj["targets"])
        control = obj.get("control")
        angle = obj.get("angle")
        parametrized = bool(obj.get("parametrized", False))
        gen_obj = obj.get("generator")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed gate record {obj!r}") from exc
    generator = None
    if isinstance(gen_obj, str):
        generator = PauliTerm.from_label(gen_obj, n_qubits)
    elif isinstance(gen_obj, dict):
        try:
            generator = np.array(
                [[complex(re, im) for re, im in row] for row in gen_obj["matrix"]],
                dtype=np.complex128,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed generator matrix in {obj!r}") from exc
    elif gen_obj is not None:
        raise ParseError(f"malformed generator field {gen_obj!r}")
    try:
        return Gate(
            kind=kind,
            targets=targets,
            control=control,
            generator=generator,
            angle=angle,
            parametrized=parametrized,
        )
    except (ValueError, TypeError) as exc:
        raise ParseError(f"invalid gate record {obj!r}: {exc}") from exc


def dumps(circuit: Circuit, indent: int | None = 2) -> str:
    obj = {
        "format": _FORMAT,
        "n_qubits": circuit.n_qubits,
        "gates": [_gate_to_obj(g) for g in circuit.gates],
    }
    return json.dumps(obj, indent=indent) + "\n"


def loads(text: str) -> Circuit:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"circuit JSON does not parse: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("format") != _FORMAT:
        raise ParseError(f"expected a {_FORMAT!r} document")
    try:
        n_qubits = int(obj["n_qubits"])
        gate_objs = obj["gates"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("circuit JSON missing n_qubits/gates") from exc
    gates = tuple(_gate_from_obj(g, n_qubits) for g in gate_objs)
    try:
        return Circuit(n_qubits, gates)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load(path) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump(circuit: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(circuit))
