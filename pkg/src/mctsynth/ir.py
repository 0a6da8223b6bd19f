"""Circuit intermediate representation.

Circuits are flat, immutable gate lists over an integer-indexed qubit
register.  Every qubit carries a role tag so downstream passes (cost
accounting, verification, serialization) can tell controls from the
target from scratch space without re-deriving structure from the gate
stream.

Single-qubit unitaries are stored as explicit 2x2 matrices in tuple
form.  Tuples keep Gate hashable; anything that needs numerics converts
on the way in via ``as_array``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional

import numpy as np

# Absolute tolerance when deciding whether a supplied 2x2 is unitary.
TOL_UNITARY = 1e-10

Matrix2 = tuple[tuple[complex, complex], tuple[complex, complex]]


class QubitRole(Enum):
    """What a wire is for.  The letter is the serialized form."""

    CONTROL = "c"
    TARGET = "t"
    CYCLE_ANCILLA = "y"
    PROCESS_ANCILLA = "p"
    WORKSPACE = "w"


ROLE_BY_LETTER = {r.value: r for r in QubitRole}


@dataclass(frozen=True)
class QubitId:
    index: int
    role: QubitRole

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"qubit index must be non-negative, got {self.index}")


class GateKind(Enum):
    """Gate vocabulary.

    X / CNOT / TOFFOLI / MCX are the classical-reversible family, with
    0, 1, 2, and >=3 controls.  CV and CVDG are the controlled square
    root of X and its inverse.  LOCAL is an arbitrary single-qubit
    unitary (matrix attached), CU its singly-controlled version.
    """

    X = "x"
    CNOT = "cx"
    CV = "cv"
    CVDG = "cvdg"
    TOFFOLI = "ccx"
    MCX = "mcx"
    LOCAL = "u"
    CU = "cu"


# How many qubits each kind takes; None means "2 or more" (MCX).
_ARITY: dict[GateKind, Optional[int]] = {
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.CV: 2,
    GateKind.CVDG: 2,
    GateKind.TOFFOLI: 3,
    GateKind.MCX: None,
    GateKind.LOCAL: 1,
    GateKind.CU: 2,
}

_MATRIX_KINDS = {GateKind.LOCAL, GateKind.CU}

# Kinds whose action on their last operand is a plain bit flip when the
# controls are satisfied.  Used by the cancellation pass.
X_LIKE_KINDS = {GateKind.X, GateKind.CNOT, GateKind.TOFFOLI, GateKind.MCX}


@dataclass(frozen=True)
class Gate:
    """One gate application.

    ``qubits`` lists controls first, acted-on qubit last.  ``matrix``
    is present exactly for LOCAL and CU.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    matrix: Optional[Matrix2] = None

    def __post_init__(self) -> None:
        arity = _ARITY[self.kind]
        if arity is None:
            if len(self.qubits) < 4:
                raise ValueError(
                    f"mcx needs at least 3 controls, got {len(self.qubits) - 1}"
                )
        elif len(self.qubits) != arity:
            raise ValueError(
                f"{self.kind.value} takes {arity} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate operand in {self.kind.value}{self.qubits}")
        if self.kind in _MATRIX_KINDS:
            if self.matrix is None:
                raise ValueError(f"{self.kind.value} requires a matrix")
            _check_unitary(self.matrix)
        elif self.matrix is not None:
            raise ValueError(f"{self.kind.value} does not carry a matrix")

    @property
    def target(self) -> int:
        return self.qubits[-1]

    @property
    def controls(self) -> tuple[int, ...]:
        return self.qubits[:-1]

    def inverse(self) -> "Gate":
        if self.kind is GateKind.CV:
            return replace(self, kind=GateKind.CVDG)
        if self.kind is GateKind.CVDG:
            return replace(self, kind=GateKind.CV)
        if self.kind in _MATRIX_KINDS:
            return replace(self, matrix=dagger(self.matrix))
        # the classical-reversible kinds are involutions
        return self


def _check_unitary(m: Matrix2) -> None:
    a = as_array(m)
    if not np.allclose(a @ a.conj().T, np.eye(2), atol=TOL_UNITARY):
        raise ValueError("matrix is not unitary")


def as_array(m: Matrix2) -> np.ndarray:
    return np.array(m, dtype=complex)


def as_matrix2(a: np.ndarray) -> Matrix2:
    return (
        (complex(a[0, 0]), complex(a[0, 1])),
        (complex(a[1, 0]), complex(a[1, 1])),
    )


def dagger(m: Matrix2) -> Matrix2:
    return as_matrix2(as_array(m).conj().T)


@dataclass(frozen=True)
class CircuitMeta:
    """Provenance of a circuit within this library: which builder made
    it and with what parameters.  ``basis`` names the gate set it was
    lowered into, if any (stored as a string to keep this module free of
    the lowering vocabulary)."""

    scheme: Optional[str] = None
    n: Optional[int] = None
    c: Optional[int] = None
    basis: Optional[str] = None


@dataclass(frozen=True)
class Circuit:
    qubits: tuple[QubitId, ...]
    gates: tuple[Gate, ...] = ()
    meta: CircuitMeta = field(default_factory=CircuitMeta)

    def __post_init__(self) -> None:
        indices = [q.index for q in self.qubits]
        if indices != list(range(len(indices))):
            raise ValueError("qubit indices must be 0..width-1 in order")
        width = len(indices)
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < width:
                    raise ValueError(
                        f"gate {g.kind.value}{g.qubits} references qubit {q} "
                        f"outside width {width}"
                    )

    @property
    def width(self) -> int:
        return len(self.qubits)

    def role_of(self, index: int) -> QubitRole:
        return self.qubits[index].role

    def indices_with_role(self, role: QubitRole) -> tuple[int, ...]:
        return tuple(q.index for q in self.qubits if q.role is role)


def new_circuit(roles: Iterable[QubitRole], meta: CircuitMeta = CircuitMeta()) -> Circuit:
    qubits = tuple(QubitId(i, r) for i, r in enumerate(roles))
    return Circuit(qubits=qubits, meta=meta)


def append(circuit: Circuit, *gates: Gate) -> Circuit:
    return replace(circuit, gates=circuit.gates + gates)


def concat(first: Circuit, second: Circuit) -> Circuit:
    if first.qubits != second.qubits:
        raise ValueError("cannot concat circuits over different registers")
    return replace(first, gates=first.gates + second.gates)


def inverse(circuit: Circuit) -> Circuit:
    return replace(circuit, gates=tuple(g.inverse() for g in reversed(circuit.gates)))


def count_gates(circuit: Circuit, kind: GateKind) -> int:
    return sum(1 for g in circuit.gates if g.kind is kind)


def gate_histogram(circuit: Circuit) -> dict[GateKind, int]:
    out: dict[GateKind, int] = {}
    for g in circuit.gates:
        out[g.kind] = out.get(g.kind, 0) + 1
    return out


# ---------------------------------------------------------------------------
# matrix constants

MAT_X: Matrix2 = ((0 + 0j, 1 + 0j), (1 + 0j, 0 + 0j))
MAT_Z: Matrix2 = ((1 + 0j, 0 + 0j), (0 + 0j, -1 + 0j))
MAT_H: Matrix2 = (
    (1 / math.sqrt(2) + 0j, 1 / math.sqrt(2) + 0j),
    (1 / math.sqrt(2) + 0j, -1 / math.sqrt(2) + 0j),
)
MAT_S: Matrix2 = ((1 + 0j, 0j), (0j, 1j))
MAT_SDG: Matrix2 = ((1 + 0j, 0j), (0j, -1j))
MAT_T: Matrix2 = ((1 + 0j, 0j), (0j, cmath.exp(1j * math.pi / 4)))
MAT_TDG: Matrix2 = ((1 + 0j, 0j), (0j, cmath.exp(-1j * math.pi / 4)))

# V is the square root of X: V @ V == X exactly.
MAT_V: Matrix2 = (
    ((1 + 1j) / 2, (1 - 1j) / 2),
    ((1 - 1j) / 2, (1 + 1j) / 2),
)
MAT_VDG: Matrix2 = dagger(MAT_V)


def ry_matrix(theta: float) -> Matrix2:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return ((c + 0j, -s + 0j), (s + 0j, c + 0j))


def rz_matrix(theta: float) -> Matrix2:
    return (
        (cmath.exp(-1j * theta / 2), 0j),
        (0j, cmath.exp(1j * theta / 2)),
    )


def phase_matrix(alpha: float) -> Matrix2:
    return ((1 + 0j, 0j), (0j, cmath.exp(1j * alpha)))


NAMED_UNITARIES: dict[str, Matrix2] = {
    "x": MAT_X,
    "z": MAT_Z,
    "h": MAT_H,
    "s": MAT_S,
    "sdg": MAT_SDG,
    "t": MAT_T,
    "tdg": MAT_TDG,
    "v": MAT_V,
    "vdg": MAT_VDG,
}


# ---------------------------------------------------------------------------
# gate constructors, saves call sites from spelling out GateKind

def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def cnot(ctrl: int, tgt: int) -> Gate:
    return Gate(GateKind.CNOT, (ctrl, tgt))


def cv(ctrl: int, tgt: int) -> Gate:
    return Gate(GateKind.CV, (ctrl, tgt))


def cvdg(ctrl: int, tgt: int) -> Gate:
    return Gate(GateKind.CVDG, (ctrl, tgt))


def toffoli(c1: int, c2: int, tgt: int) -> Gate:
    return Gate(GateKind.TOFFOLI, (c1, c2, tgt))


def mcx(controls: Iterable[int], tgt: int) -> Gate:
    return Gate(GateKind.MCX, tuple(controls) + (tgt,))


def local(q: int, matrix: Matrix2) -> Gate:
    return Gate(GateKind.LOCAL, (q,), matrix=matrix)


def cu(ctrl: int, tgt: int, matrix: Matrix2) -> Gate:
    return Gate(GateKind.CU, (ctrl, tgt), matrix=matrix)
