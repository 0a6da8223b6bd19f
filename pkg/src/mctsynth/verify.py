"""Brute-force functional verification.

A circuit is checked against an oracle: a function from an input
assignment of the computational qubits to the exact output superposition
over those qubits.  Every computational basis input is enumerated with
all ancillas at |0>, the circuit is simulated, ancilla restoration is
checked, and the output is compared amplitude by amplitude.

Verdicts distinguish exact agreement, agreement up to one global phase,
agreement up to a per-basis-state (diagonal) phase, and mismatch.

Simulation convention is big-endian: qubit 0 is the most significant
bit of the basis index.

Two engines are used.  Circuits built purely from X-like gates map
basis states to basis states, so they are propagated as bit vectors at
negligible cost even at large widths.  Anything containing CV, CU, or
local rotations falls back to a dense statevector, which is where the
width cap matters.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .ir import (
    Circuit,
    Gate,
    GateKind,
    Matrix2,
    QubitRole,
    X_LIKE_KINDS,
    as_array,
    MAT_X,
    MAT_V,
    MAT_VDG,
)

DEFAULT_MAX_WIDTH = 24
DEFAULT_TOL = 1e-9

# dict from output bit tuple to amplitude
Superposition = dict[tuple[int, ...], complex]
Oracle = Callable[[tuple[int, ...]], Superposition]


class WidthLimitError(ValueError):
    """Raised when a simulation would exceed the allowed qubit count."""


def resolve_max_width(requested: Optional[int] = None) -> int:
    if requested is not None:
        return requested
    env = os.environ.get("MCT_MAX_WIDTH")
    if env:
        return int(env)
    return DEFAULT_MAX_WIDTH


# ---------------------------------------------------------------------------
# statevector engine

def _gate_action(gate: Gate) -> tuple[tuple[int, ...], int, np.ndarray]:
    """Controls, target, and the 2x2 applied on the target when all
    controls are 1."""
    kind = gate.kind
    if kind in X_LIKE_KINDS:
        mat: Matrix2 = MAT_X
    elif kind is GateKind.CV:
        mat = MAT_V
    elif kind is GateKind.CVDG:
        mat = MAT_VDG
    else:
        assert gate.matrix is not None
        mat = gate.matrix
    return gate.controls, gate.target, as_array(mat)


def apply(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Apply the whole circuit to a statevector of length 2**width."""
    width = circuit.width
    if state.shape != (2**width,):
        raise ValueError(f"state length {state.shape} does not match width {width}")
    psi = state.astype(complex).reshape((2,) * width)
    for gate in circuit.gates:
        controls, target, mat = _gate_action(gate)
        sel: list = [slice(None)] * width
        for c in controls:
            sel[c] = 1
        sub = psi[tuple(sel)]
        # position of the target axis after the control axes are fixed
        tpos = target - sum(1 for c in controls if c < target)
        view = np.moveaxis(sub, tpos, 0)
        updated = np.tensordot(mat, view, axes=([1], [0]))
        view[...] = updated
    return psi.reshape(-1)


def basis_state(width: int, bits: Sequence[int]) -> np.ndarray:
    if len(bits) != width:
        raise ValueError("bit count does not match width")
    state = np.zeros(2**width, dtype=complex)
    state[_bits_to_index(bits)] = 1.0
    return state


def _bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | (b & 1)
    return idx


def _index_to_bits(index: int, width: int) -> tuple[int, ...]:
    return tuple((index >> (width - 1 - q)) & 1 for q in range(width))


def full_unitary(circuit: Circuit, max_width: int = 10) -> np.ndarray:
    """Dense unitary of the circuit, column by column.  Only sensible
    for small widths; the cap is deliberate."""
    width = circuit.width
    if width > max_width:
        raise WidthLimitError(f"width {width} exceeds unitary cap {max_width}")
    dim = 2**width
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[col] = 1.0
        out[:, col] = apply(circuit, e)
    return out


# ---------------------------------------------------------------------------
# classical engine

def is_classical(circuit: Circuit) -> bool:
    return all(g.kind in X_LIKE_KINDS for g in circuit.gates)


def _propagate_classical(circuit: Circuit, bits: list[int]) -> list[int]:
    vals = list(bits)
    for gate in circuit.gates:
        if all(vals[c] for c in gate.controls):
            vals[gate.target] ^= 1
    return vals


# ---------------------------------------------------------------------------
# sparse engine

# give up on the dict representation once this many basis states carry
# amplitude; the dense engine takes over
_SPARSE_SUPPORT_CAP = 4096

# amplitudes this small are float dust from cancellations; dropping
# them keeps the support tight and perturbs the state far below any
# verification tolerance
_SPARSE_PRUNE = 1e-14


def _propagate_sparse(
    circuit: Circuit, full_bits: Sequence[int]
) -> Optional[dict[int, complex]]:
    """Evolve one basis input as a basis-index -> amplitude dict.

    Exact (up to pruning of sub-1e-14 dust) whenever it returns a
    dict; returns None if the superposition outgrows the support cap,
    signalling the caller to fall back to the dense engine.
    """
    width = circuit.width
    state: dict[int, complex] = {_bits_to_index(full_bits): 1.0 + 0j}
    for gate in circuit.gates:
        controls, target, mat = _gate_action(gate)
        a00, a10 = complex(mat[0, 0]), complex(mat[1, 0])
        a01, a11 = complex(mat[0, 1]), complex(mat[1, 1])
        tbit = 1 << (width - 1 - target)
        cmask = 0
        for c in controls:
            cmask |= 1 << (width - 1 - c)
        new: dict[int, complex] = {}
        for idx, amp in state.items():
            if (idx & cmask) != cmask:
                new[idx] = new.get(idx, 0j) + amp
                continue
            z0, z1 = (a01, a11) if idx & tbit else (a00, a10)
            if z0 != 0:
                k = idx & ~tbit
                new[k] = new.get(k, 0j) + amp * z0
            if z1 != 0:
                k = idx | tbit
                new[k] = new.get(k, 0j) + amp * z1
        state = {k: v for k, v in new.items() if abs(v) > _SPARSE_PRUNE}
        if len(state) > _SPARSE_SUPPORT_CAP:
            return None
    return state


# ---------------------------------------------------------------------------
# oracles

def oracle_cnx(n: int) -> Oracle:
    """n controls and a target: flip the target iff all controls are 1."""

    def oracle(bits: tuple[int, ...]) -> Superposition:
        if len(bits) != n + 1:
            raise ValueError(f"expected {n + 1} bits, got {len(bits)}")
        controls, t = bits[:-1], bits[-1]
        if all(controls):
            t ^= 1
        return {controls + (t,): 1.0 + 0j}

    return oracle


def oracle_cnu(n: int, matrix: Matrix2) -> Oracle:
    """n controls and a target: apply the given 2x2 iff all controls
    are 1."""
    a = as_array(matrix)

    def oracle(bits: tuple[int, ...]) -> Superposition:
        if len(bits) != n + 1:
            raise ValueError(f"expected {n + 1} bits, got {len(bits)}")
        controls, t = bits[:-1], bits[-1]
        if not all(controls):
            return {bits: 1.0 + 0j}
        out: Superposition = {}
        for row in (0, 1):
            amp = complex(a[row, t])
            if amp != 0:
                out[controls + (row,)] = amp
        return out

    return oracle


# ---------------------------------------------------------------------------
# equivalence checking

class EquivalenceClass(Enum):
    EXACT = "exact"
    GLOBAL_PHASE = "global_phase"
    DIAGONAL_PHASE = "diagonal_phase"
    MISMATCH = "mismatch"


@dataclass(frozen=True)
class Mismatch:
    input_bits: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class EquivalenceVerdict:
    klass: EquivalenceClass
    max_deviation: float
    witness: Optional[Mismatch] = None

    @property
    def equivalent(self) -> bool:
        return self.klass is not EquivalenceClass.MISMATCH


def default_computational_qubits(circuit: Circuit) -> tuple[int, ...]:
    """Controls in index order, then the target.  Requires role tags."""
    controls = circuit.indices_with_role(QubitRole.CONTROL)
    targets = circuit.indices_with_role(QubitRole.TARGET)
    if len(targets) != 1:
        raise ValueError(f"expected exactly one target qubit, found {len(targets)}")
    return controls + targets


def check_equivalence(
    circuit: Circuit,
    oracle: Oracle,
    computational_qubits: Optional[Sequence[int]] = None,
    tol: float = DEFAULT_TOL,
    max_width: Optional[int] = None,
) -> EquivalenceVerdict:
    """Compare the circuit against the oracle on every computational
    basis input, ancillas held at |0> and required to return to |0>.

    The bit order handed to the oracle is the order of
    ``computational_qubits``.
    """
    width = circuit.width
    limit = resolve_max_width(max_width)
    comp = tuple(
        computational_qubits
        if computational_qubits is not None
        else default_computational_qubits(circuit)
    )
    ancillas = tuple(q for q in range(width) if q not in comp)
    classical = is_classical(circuit)
    if not classical and width > limit:
        raise WidthLimitError(f"width {width} exceeds simulation cap {limit}")

    observed: list[tuple[tuple[int, ...], Superposition, Superposition]] = []
    for mask in range(2 ** len(comp)):
        in_bits = tuple((mask >> (len(comp) - 1 - i)) & 1 for i in range(len(comp)))
        expected = oracle(in_bits)
        if classical:
            full_in = [0] * width
            for q, b in zip(comp, in_bits):
                full_in[q] = b
            full_out = _propagate_classical(circuit, full_in)
            if any(full_out[a] for a in ancillas):
                return EquivalenceVerdict(
                    EquivalenceClass.MISMATCH,
                    1.0,
                    Mismatch(in_bits, "ancilla not restored to |0>"),
                )
            got: Superposition = {
                tuple(full_out[q] for q in comp): 1.0 + 0j
            }
        else:
            full_bits = [0] * width
            for q, b in zip(comp, in_bits):
                full_bits[q] = b
            sparse = _propagate_sparse(circuit, full_bits)
            if sparse is not None:
                entries = [
                    (idx, amp) for idx, amp in sparse.items() if abs(amp) > tol
                ]
            else:
                out_state = apply(circuit, basis_state(width, full_bits))
                entries = [
                    (int(idx), complex(out_state[idx]))
                    for idx in np.flatnonzero(np.abs(out_state) > tol)
                ]
            got = {}
            bad = 0.0
            for idx, amp in entries:
                bits = _index_to_bits(idx, width)
                if any(bits[a] for a in ancillas):
                    bad = max(bad, abs(amp))
                else:
                    got[tuple(bits[q] for q in comp)] = amp
            if bad > tol:
                return EquivalenceVerdict(
                    EquivalenceClass.MISMATCH,
                    bad,
                    Mismatch(in_bits, "ancilla not restored to |0>"),
                )
        observed.append((in_bits, expected, got))

    # Fit one phase per input, then classify by how the phases behave.
    phases: list[complex] = []
    residual = 0.0
    for in_bits, expected, got in observed:
        anchor = max(expected, key=lambda k: abs(expected[k]))
        got_amp = got.get(anchor, 0j)
        want_amp = expected[anchor]
        if abs(got_amp) < tol:
            return EquivalenceVerdict(
                EquivalenceClass.MISMATCH,
                abs(want_amp),
                Mismatch(in_bits, f"no amplitude on expected output {anchor}"),
            )
        phase = got_amp / want_amp
        if abs(abs(phase) - 1.0) > tol:
            return EquivalenceVerdict(
                EquivalenceClass.MISMATCH,
                abs(abs(phase) - 1.0),
                Mismatch(in_bits, "amplitude magnitude differs from oracle"),
            )
        phase /= abs(phase)
        dev = _superposition_deviation(got, expected, phase)
        if dev > tol:
            return EquivalenceVerdict(
                EquivalenceClass.MISMATCH,
                dev,
                Mismatch(in_bits, "output superposition differs from oracle"),
            )
        phases.append(phase)
        residual = max(residual, dev)

    exact_dev = max(
        _superposition_deviation(got, expected, 1.0 + 0j)
        for _, expected, got in observed
    )
    if exact_dev <= tol:
        return EquivalenceVerdict(EquivalenceClass.EXACT, exact_dev)

    ref = phases[0]
    global_dev = max(
        _superposition_deviation(got, expected, ref)
        for (_, expected, got) in observed
    )
    if global_dev <= tol:
        return EquivalenceVerdict(EquivalenceClass.GLOBAL_PHASE, global_dev)

    return EquivalenceVerdict(EquivalenceClass.DIAGONAL_PHASE, residual)


def _superposition_deviation(
    got: Superposition, expected: Superposition, phase: complex
) -> float:
    keys = set(got) | set(expected)
    return max(
        abs(got.get(k, 0j) - phase * expected.get(k, 0j)) for k in keys
    )
