"""Phase-tracked Pauli strings and real-world Hamiltonians built from them.

An n-qubit Pauli string is a pair of bit masks plus a power-of-i phase and a
complex coefficient.  Bit q of ``x_mask`` / ``z_mask`` records an X / Z
factor on qubit q:

    (0, 0) -> I    (1, 0) -> X    (0, 1) -> Z    (1, 1) -> Y

A site with both bits set is the Hermitian Y under the convention Y = i X Z,
so a mask pair alone always names a Hermitian operator and every bookkeeping
phase lives in ``phase_exp`` (i**phase_exp) or the coefficient.  Masks are
plain Python ints, so there is no hard qubit-count ceiling.

The text format accepted by :func:`loads` is one term per line::

    # qubits: 4
    -1.5  0.0   Z0 Z1
     0.25 0.0   X0 Y3
     2.0  0.0   I

i.e. real part, imaginary part, then whitespace-separated single-qubit
factors (or the literal ``I`` for identity).  ``#`` starts a comment; the
optional ``# qubits: N`` header pins the register width when trailing
identity qubits matter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import DimensionMismatchError, ParseError

# Coefficients at or below this magnitude are dropped when sums are pruned.
PRUNE_TOL = 1e-12

_AXIS_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_AXIS = {v: k for k, v in _AXIS_TO_BITS.items()}

_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)


def _product_phase_exp(x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of i picked up when (x1,z1) multiplies (x2,z2) on the left.

    Each mask pair denotes the Hermitian string i**popcount(x&z) X^x Z^z.
    Commuting Z^z1 past X^x2 contributes (-1)**popcount(z1&x2); re-expressing
    the product in Hermitian form absorbs i**popcount(x&z) factors.
    """
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    raw = (
        (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        + 2 * (z1 & x2).bit_count()
        - (x3 & z3).bit_count()
    )
    return raw % 4


@dataclass(frozen=True)
class PauliTerm:
    """One Pauli string with an explicit phase and coefficient.

    The operator denoted is ``coefficient * i**phase_exp * P(x_mask, z_mask)``
    where P is Hermitian.  Terms are immutable; algebra returns new terms.
    """

    n_qubits: int
    x_mask: int
    z_mask: int
    phase_exp: int = 0
    coefficient: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise DimensionMismatchError(
                f"mask outside a {self.n_qubits}-qubit register"
            )
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)
        object.__setattr__(self, "coefficient", complex(self.coefficient))

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliTerm":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_label(cls, label: str, n_qubits: int | None = None) -> "PauliTerm":
        """Parse factors like ``"X0 Y3 Z5"`` (or ``"I"``) into a term."""
        x_mask = 0
        z_mask = 0
        max_q = -1
        parts = label.split()
        if not parts:
            raise ParseError("empty Pauli label")
        if parts == ["I"]:
            if n_qubits is None:
                raise ParseError("bare identity needs an explicit qubit count")
            return cls.identity(n_qubits)
        for part in parts:
            axis, idx = part[:1], part[1:]
            if axis not in ("X", "Y", "Z") or not idx.isdigit():
                raise ParseError(f"bad Pauli factor {part!r}")
            q = int(idx)
            bit = 1 << q
            if (x_mask | z_mask) & bit:
                raise ParseError(f"qubit {q} appears twice in {label!r}")
            xb, zb = _AXIS_TO_BITS[axis]
            x_mask |= xb << q
            z_mask |= zb << q
            max_q = max(max_q, q)
        n = n_qubits if n_qubits is not None else max_q + 1
        if max_q >= n:
            raise DimensionMismatchError(
                f"label {label!r} touches qubit {max_q} outside {n}-qubit register"
            )
        return cls(n, x_mask, z_mask)

    # -- queries ---------------------------------------------------------

    def label(self) -> str:
        """Axis/index factors of the Hermitian part, e.g. ``"X0 Y3"``."""
        if not (self.x_mask | self.z_mask):
            return "I"
        parts = []
        for q in range(self.n_qubits):
            bits = ((self.x_mask >> q) & 1, (self.z_mask >> q) & 1)
            if bits != (0, 0):
                parts.append(f"{_BITS_TO_AXIS[bits]}{q}")
        return " ".join(parts)

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return (self.x_mask | self.z_mask).bit_count()

    def support(self) -> frozenset[int]:
        mask = self.x_mask | self.z_mask
        return frozenset(q for q in range(self.n_qubits) if (mask >> q) & 1)

    def canonical_coefficient(self) -> complex:
        """Coefficient with the i**phase_exp factor folded in."""
        return self.coefficient * _I_POW[self.phase_exp]

    def canonical(self) -> "PauliTerm":
        """Equivalent term with phase_exp folded into the coefficient."""
        if self.phase_exp == 0:
            return self
        return PauliTerm(
            self.n_qubits,
            self.x_mask,
            self.z_mask,
            0,
            self.canonical_coefficient(),
        )

    # -- algebra ----------------------------------------------------------

    def multiply(self, other: "PauliTerm") -> "PauliTerm":
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatchError(
                f"cannot multiply {self.n_qubits}- and {other.n_qubits}-qubit terms"
            )
        delta = _product_phase_exp(
            self.x_mask, self.z_mask, other.x_mask, other.z_mask
        )
        return PauliTerm(
            self.n_qubits,
            self.x_mask ^ other.x_mask,
            self.z_mask ^ other.z_mask,
            (self.phase_exp + other.phase_exp + delta) % 4,
            self.coefficient * other.coefficient,
        )

    def __mul__(self, other):
        if isinstance(other, PauliTerm):
            return self.multiply(other)
        if isinstance(other, (int, float, complex)):
            return PauliTerm(
                self.n_qubits,
                self.x_mask,
                self.z_mask,
                self.phase_exp,
                self.coefficient * other,
            )
        return NotImplemented

    __rmul__ = __mul__

    def commutes_with(self, other: "PauliTerm") -> bool:
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatchError("commutation needs equal qubit counts")
        anti = (
            (self.x_mask & other.z_mask).bit_count()
            + (self.z_mask & other.x_mask).bit_count()
        ) & 1
        return anti == 0

    def scaled(self, factor: complex) -> "PauliTerm":
        return self * factor


class PauliSum:
    """A Hamiltonian: complex linear combination of Hermitian Pauli strings.

    Internally a dict keyed by (x_mask, z_mask) with canonical complex
    coefficients (phase folded in).  All mutating-looking operations return
    new sums; instances are safe to share across threads.
    """

    __slots__ = ("n_qubits", "_coeffs")

    def __init__(self, n_qubits: int, terms: Iterable[PauliTerm] = ()) -> None:
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
        self.n_qubits = n_qubits
        coeffs: dict[tuple[int, int], complex] = {}
        for term in terms:
            if term.n_qubits != n_qubits:
                raise DimensionMismatchError(
                    f"{term.n_qubits}-qubit term in {n_qubits}-qubit sum"
                )
            key = (term.x_mask, term.z_mask)
            coeffs[key] = coeffs.get(key, 0j) + term.canonical_coefficient()
        self._coeffs = {k: c for k, c in coeffs.items() if abs(c) > PRUNE_TOL}

    # -- raw-dict fast path for internal algebra --------------------------

    @classmethod
    def _from_raw(
        cls, n_qubits: int, coeffs: dict[tuple[int, int], complex], prune: bool = True
    ) -> "PauliSum":
        out = cls.__new__(cls)
        out.n_qubits = n_qubits
        if prune:
            coeffs = {k: c for k, c in coeffs.items() if abs(c) > PRUNE_TOL}
        out._coeffs = coeffs
        return out

    def raw_items(self) -> Iterator[tuple[tuple[int, int], complex]]:
        return iter(self._coeffs.items())

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits)

    @classmethod
    def identity(cls, n_qubits: int, coefficient: complex = 1.0) -> "PauliSum":
        return cls._from_raw(n_qubits, {(0, 0): complex(coefficient)})

    @classmethod
    def from_label_coeffs(
        cls,
        n_qubits: int,
        pairs: Mapping[str, complex] | Iterable[tuple[str, complex]],
    ) -> "PauliSum":
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        return cls(
            n_qubits,
            (
                PauliTerm.from_label(lbl, n_qubits) * c
                for lbl, c in pairs
            ),
        )

    # -- queries -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._coeffs)

    @property
    def cardinality(self) -> int:
        """Number of surviving Pauli strings."""
        return len(self._coeffs)

    def __iter__(self) -> Iterator[PauliTerm]:
        for (x, z), c in self._coeffs.items():
            yield PauliTerm(self.n_qubits, x, z, 0, c)

    def coefficient(self, which) -> complex:
        """Canonical coefficient of one string, by label, term, or (x, z)."""
        if isinstance(which, str):
            t = PauliTerm.from_label(which, self.n_qubits)
            key = (t.x_mask, t.z_mask)
        elif isinstance(which, PauliTerm):
            key = (which.x_mask, which.z_mask)
        else:
            key = tuple(which)
        return self._coeffs.get(key, 0j)

    def terms(self) -> list[PauliTerm]:
        return list(self)

    def support(self) -> frozenset[int]:
        mask = 0
        for x, z in self._coeffs:
            mask |= x | z
        return frozenset(q for q in range(self.n_qubits) if (mask >> q) & 1)

    def hermiticity_defect(self) -> float:
        """Largest |Im coefficient|; zero for a Hermitian operator."""
        return max((abs(c.imag) for c in self._coeffs.values()), default=0.0)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return self.hermiticity_defect() <= tol

    def one_norm(self) -> float:
        return float(sum(abs(c) for c in self._coeffs.values()))

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self._coeffs.values()), default=0.0)

    # -- algebra -----------------------------------------------------------

    def _check_same_space(self, other: "PauliSum") -> None:
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatchError(
                f"cannot combine {self.n_qubits}- and {other.n_qubits}-qubit sums"
            )

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check_same_space(other)
        coeffs = dict(self._coeffs)
        for key, c in other._coeffs.items():
            coeffs[key] = coeffs.get(key, 0j) + c
        return PauliSum._from_raw(self.n_qubits, coeffs)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, factor):
        if isinstance(factor, (int, float, complex)):
            return PauliSum._from_raw(
                self.n_qubits, {k: c * factor for k, c in self._coeffs.items()}
            )
        if isinstance(factor, PauliSum):
            return self.compose(factor)
        return NotImplemented

    __rmul__ = __mul__

    def add_term(self, term: PauliTerm) -> "PauliSum":
        if term.n_qubits != self.n_qubits:
            raise DimensionMismatchError("term/sum qubit counts differ")
        coeffs = dict(self._coeffs)
        key = (term.x_mask, term.z_mask)
        coeffs[key] = coeffs.get(key, 0j) + term.canonical_coefficient()
        return PauliSum._from_raw(self.n_qubits, coeffs)

    def compose(self, other: "PauliSum") -> "PauliSum":
        """Operator product self @ other, re-expanded over Pauli strings."""
        self._check_same_space(other)
        coeffs: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in self._coeffs.items():
            for (x2, z2), c2 in other._coeffs.items():
                delta = _product_phase_exp(x1, z1, x2, z2)
                key = (x1 ^ x2, z1 ^ z2)
                coeffs[key] = coeffs.get(key, 0j) + c1 * c2 * _I_POW[delta]
        return PauliSum._from_raw(self.n_qubits, coeffs)

    def adjoint(self) -> "PauliSum":
        return PauliSum._from_raw(
            self.n_qubits, {k: c.conjugate() for k, c in self._coeffs.items()},
            prune=False,
        )

    def pruned(self, tol: float = PRUNE_TOL) -> "PauliSum":
        return PauliSum._from_raw(
            self.n_qubits, {k: c for k, c in self._coeffs.items() if abs(c) > tol},
            prune=False,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._coeffs == other._coeffs

    def allclose(self, other: "PauliSum", tol: float = 1e-10) -> bool:
        self._check_same_space(other)
        keys = set(self._coeffs) | set(other._coeffs)
        return all(
            abs(self._coeffs.get(k, 0j) - other._coeffs.get(k, 0j)) <= tol
            for k in keys
        )

    def __repr__(self) -> str:
        return f"PauliSum(n_qubits={self.n_qubits}, cardinality={len(self)})"


# -- text format -----------------------------------------------------------


def dumps(h: PauliSum) -> str:
    """Serialize to the line-per-term text format (deterministic order).

    Terms are sorted by (x_mask, z_mask); coefficients are printed with 17
    significant digits so a parse/serialize round trip is bit-exact.
    """
    lines = [f"# qubits: {h.n_qubits}"]
    for (x, z), c in sorted(h.raw_items()):
        label = PauliTerm(h.n_qubits, x, z).label()
        lines.append(f"{c.real:.17g} {c.imag:.17g} {label}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> PauliSum:
    """Parse the text format; see the module docstring for the grammar."""
    n_header: int | None = None
    rows: list[tuple[complex, str]] = []
    max_q = -1
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("qubits:"):
                try:
                    n_header = int(body.split(":", 1)[1])
                except ValueError as exc:
                    raise ParseError(f"line {lineno}: bad qubits header") from exc
            continue
        if "#" in line:
            line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 2)
        if len(parts) < 3:
            raise ParseError(f"line {lineno}: expected 're im factors', got {rawline!r}")
        try:
            coeff = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad coefficient in {rawline!r}") from exc
        label = parts[2].strip()
        if label != "I":
            for factor in label.split():
                if len(factor) < 2 or factor[0] not in "XYZ" or not factor[1:].isdigit():
                    raise ParseError(f"line {lineno}: bad factor {factor!r}")
                max_q = max(max_q, int(factor[1:]))
        rows.append((coeff, label))
    if n_header is not None and max_q >= n_header:
        raise ParseError(
            f"term touches qubit {max_q} but header declares {n_header} qubits"
        )
    n = n_header if n_header is not None else max_q + 1
    if n < 1:
        raise ParseError("no terms and no qubits header: register width unknown")
    return PauliSum.from_label_coeffs(n, ((lbl, c) for c, lbl in rows))


def load(path) -> PauliSum:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump(h: PauliSum, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(h))
