"""Lowering circuits into two-qubit gate bases.

Three target bases are supported:

* NATIVE_TOFFOLI keeps Toffolis as primitives (and CNOT, X, locals,
  controlled locals).
* CNOT_LOCAL allows only CNOT plus arbitrary single-qubit gates.
* CV_BASIS allows CNOT, the controlled square root of X and its
  inverse, plus single-qubit gates.

The interesting part is what happens to Toffolis.  A lone Toffoli costs
6 CNOTs (with locals, 15 gates total) or 5 two-qubit gates in the CV
basis.  But the circuits built here are compute/uncompute mirrors, and
a mirrored pair of Toffolis can be replaced by two cheaper gates that
are individually wrong in compensating ways:

* a 7-gate RY/CNOT network equal to Toffoli times a diagonal D
  (-1 on exactly one basis state of its three qubits), used for both
  members: the sandwich M S M equals T S T whenever D commutes with
  everything in between, which the validity check guarantees;
* a 4-gate CV network equal to CNOT(y,x) composed with the Toffoli,
  used with its inverse as the mirror member: the stray CNOT must
  commute past everything in between, which again the validity check
  guarantees.

A pair is accepted only when both replacements are sound, so one
pairing plan serves every basis.  The conditions are conservative,
gate-structural, and checked per pair: between the members, the pair's
qubits may be touched only as controls; additionally one control (x)
may instead be touched only as the target of X-like gates while the
other (y) stays control-only, which orients the CV member's CNOT as
y -> x.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .ir import (
    Circuit,
    Gate,
    GateKind,
    Matrix2,
    X_LIKE_KINDS,
    as_array,
    as_matrix2,
    cnot,
    cv,
    cvdg,
    local,
    ry_matrix,
    rz_matrix,
    phase_matrix,
    MAT_H,
    MAT_T,
    MAT_TDG,
    MAT_X,
)


class GateBasis(Enum):
    NATIVE_TOFFOLI = "toffoli"
    CNOT_LOCAL = "cnot"
    CV_BASIS = "cv"


class ToffoliRule(Enum):
    SIX_CNOT = "six-cnot"          # 15 gates, exact
    RELATIVE_PHASE = "relative-phase"  # 7 gates, exact up to a diagonal
    FIVE_CV = "five-cv"            # 5 gates, exact
    FOUR_CV = "four-cv"            # 4 gates, Toffoli then CNOT between controls


ALLOWED_KINDS: dict[GateBasis, frozenset[GateKind]] = {
    GateBasis.NATIVE_TOFFOLI: frozenset(
        {GateKind.TOFFOLI, GateKind.CNOT, GateKind.X, GateKind.LOCAL, GateKind.CU}
    ),
    GateBasis.CNOT_LOCAL: frozenset({GateKind.CNOT, GateKind.LOCAL}),
    GateBasis.CV_BASIS: frozenset(
        {GateKind.CNOT, GateKind.CV, GateKind.CVDG, GateKind.LOCAL}
    ),
}


class LoweringError(Exception):
    pass


class NoMirrorStructureError(LoweringError):
    """The Toffoli operand sequence is not a palindrome, so the
    mirrored-pair analysis does not apply."""


# ---------------------------------------------------------------------------
# single-Toffoli rules

def lower_toffoli(c1: int, c2: int, t: int, rule: ToffoliRule) -> tuple[Gate, ...]:
    """Replacement gate list for a Toffoli on (c1, c2, t).

    FOUR_CV does not implement the Toffoli alone: it appends a CNOT
    c2 -> c1.  It is meant for mirrored pairs, where the second member
    is the inverse list and the stray CNOTs cancel through the middle.
    RELATIVE_PHASE implements the Toffoli times a diagonal; standalone
    it is only correct up to that diagonal.
    """
    if rule is ToffoliRule.SIX_CNOT:
        return (
            local(t, MAT_H),
            cnot(c2, t),
            local(t, MAT_TDG),
            cnot(c1, t),
            local(t, MAT_T),
            cnot(c2, t),
            local(t, MAT_TDG),
            cnot(c1, t),
            local(c2, MAT_T),
            local(t, MAT_T),
            local(t, MAT_H),
            cnot(c1, c2),
            local(c1, MAT_T),
            local(c2, MAT_TDG),
            cnot(c1, c2),
        )
    if rule is ToffoliRule.RELATIVE_PHASE:
        return _relative_phase_member(c1, c2, t)
    if rule is ToffoliRule.FIVE_CV:
        return (
            cv(c2, t),
            cnot(c1, c2),
            cvdg(c2, t),
            cnot(c1, c2),
            cv(c1, t),
        )
    if rule is ToffoliRule.FOUR_CV:
        return _four_cv_member(c1, c2, t, cnot_control=c2, cnot_target=c1)
    raise LoweringError(f"unknown rule {rule}")


def _relative_phase_member(u: int, v: int, t: int) -> tuple[Gate, ...]:
    # equals Toffoli(u,v,t) times diag with -1 at |u=0, v=1, t=0>
    neg = ry_matrix(-math.pi / 4)
    pos = ry_matrix(math.pi / 4)
    return (
        local(t, neg),
        cnot(u, t),
        local(t, neg),
        cnot(v, t),
        local(t, pos),
        cnot(u, t),
        local(t, pos),
    )


def _four_cv_member(
    u: int, v: int, t: int, cnot_control: int, cnot_target: int
) -> tuple[Gate, ...]:
    # equals Toffoli(u,v,t) followed by CNOT(cnot_control, cnot_target)
    y, x = cnot_control, cnot_target
    assert {y, x} == {u, v}
    return (
        cv(x, t),
        cnot(y, x),
        cvdg(x, t),
        cv(y, t),
    )


def _inverse_list(gates: tuple[Gate, ...]) -> tuple[Gate, ...]:
    return tuple(g.inverse() for g in reversed(gates))


# ---------------------------------------------------------------------------
# controlled single-qubit unitaries

def zyz_angles(matrix: Matrix2) -> tuple[float, float, float, float]:
    """(alpha, beta, gamma, delta) with
    U = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    a = as_array(matrix)
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    alpha = cmath.phase(det) / 2
    su = a * cmath.exp(-1j * alpha)
    gamma = 2 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    plus = cmath.phase(su[1, 1]) if abs(su[1, 1]) > 1e-12 else 0.0
    minus = cmath.phase(su[1, 0]) if abs(su[1, 0]) > 1e-12 else 0.0
    beta = plus + minus
    delta = plus - minus
    return alpha, beta, gamma, delta


def expand_controlled_unitary(
    ctrl: int, tgt: int, matrix: Matrix2
) -> tuple[Gate, ...]:
    """Controlled-U as two CNOTs, three locals on the target, and a
    phase shift on the control.

    With U = e^{i a} Rz(b) Ry(g) Rz(d), the locals are C, B, A with
    A B C = I and A X B X C = e^{-i a} U; the shift on the control
    restores the phase exactly on the controlled branch.
    """
    alpha, beta, gamma, delta = zyz_angles(matrix)
    mat_a = _mat_mul(rz_matrix(beta), ry_matrix(gamma / 2))
    mat_b = _mat_mul(ry_matrix(-gamma / 2), rz_matrix(-(delta + beta) / 2))
    mat_c = rz_matrix((delta - beta) / 2)
    return (
        local(tgt, mat_c),
        cnot(ctrl, tgt),
        local(tgt, mat_b),
        cnot(ctrl, tgt),
        local(tgt, mat_a),
        local(ctrl, phase_matrix(alpha)),
    )


def _mat_mul(m1: Matrix2, m2: Matrix2) -> Matrix2:
    return as_matrix2(as_array(m1) @ as_array(m2))


# ---------------------------------------------------------------------------
# pairing

@dataclass(frozen=True)
class ToffoliPair:
    compute: int        # gate position of the earlier member
    uncompute: int      # gate position of the mirror member
    cnot_control: int   # y: stays a control between the members
    cnot_target: int    # x: absorbs the member CNOT


@dataclass(frozen=True)
class PairingPlan:
    pairs: tuple[ToffoliPair, ...]
    unpaired: tuple[int, ...]


def _touches_only_as_control(gate: Gate, q: int) -> bool:
    return q not in gate.qubits or q in gate.controls


def _touches_only_as_x_target(gate: Gate, q: int) -> bool:
    if q not in gate.qubits:
        return True
    return q == gate.target and gate.kind in X_LIKE_KINDS


def _try_cnot_orientation(
    between: tuple[Gate, ...], u: int, v: int
) -> Optional[tuple[int, int]]:
    for y, x in ((v, u), (u, v)):
        if all(
            _touches_only_as_control(g, y) and _touches_only_as_x_target(g, x)
            for g in between
        ):
            return (y, x)
    return None


def _pair_valid(
    gates: tuple[Gate, ...], i: int, j: int
) -> Optional[tuple[int, int]]:
    """Both replacement conditions must hold: the diagonal condition on
    all three operands, and a CNOT orientation on the controls."""
    u, v, w = gates[i].qubits
    between = gates[i + 1 : j]
    for g in between:
        for q in (u, v, w):
            if not _touches_only_as_control(g, q):
                return None
    return _try_cnot_orientation(between, u, v)


def peres_pairing(circuit: Circuit) -> PairingPlan:
    """Match mirrored Toffoli pairs greedily.

    Requires the Toffoli operand sequence to read the same forwards and
    backwards; the compute/uncompute builders all guarantee that.  Each
    new Toffoli scans earlier unmatched ones nearest-first for an
    identical operand triple whose in-between gates pass the validity
    conditions; crossing an already-formed pair is not allowed, since
    replacement members inside the span would break the commutation
    argument.
    """
    gates = circuit.gates
    positions = [i for i, g in enumerate(gates) if g.kind is GateKind.TOFFOLI]
    operand_seq = [gates[i].qubits for i in positions]
    if operand_seq != operand_seq[::-1]:
        raise NoMirrorStructureError(
            "toffoli operand sequence is not mirror-symmetric"
        )
    pairs: list[ToffoliPair] = []
    unmatched: list[int] = []
    for pos in positions:
        chosen: Optional[tuple[int, tuple[int, int]]] = None
        for k in range(len(unmatched) - 1, -1, -1):
            cand = unmatched[k]
            if gates[cand].qubits != gates[pos].qubits:
                continue
            if any(p.compute < cand < p.uncompute for p in pairs):
                continue  # would cross an existing pair
            orientation = _pair_valid(gates, cand, pos)
            if orientation is not None:
                chosen = (k, orientation)
                break
        if chosen is None:
            unmatched.append(pos)
        else:
            k, (y, x) = chosen
            pairs.append(
                ToffoliPair(
                    compute=unmatched[k],
                    uncompute=pos,
                    cnot_control=y,
                    cnot_target=x,
                )
            )
            unmatched.pop(k)
    return PairingPlan(pairs=tuple(pairs), unpaired=tuple(unmatched))


# ---------------------------------------------------------------------------
# whole-circuit lowering

def lower_circuit(circuit: Circuit, basis: GateBasis) -> Circuit:
    """Rewrite a circuit into the given basis.

    Mirrored Toffoli pairs take the cheap replacements; everything else
    takes the exact single-gate rules, so the lowered circuit equals
    the original as a unitary.  Circuits without mirror structure are
    lowered with every Toffoli standalone.

    MCX gates are not accepted: synthesize them into Toffolis first.
    """
    allowed = ALLOWED_KINDS[basis]
    for g in circuit.gates:
        if g.kind is GateKind.MCX:
            raise LoweringError(
                "mcx has no direct lowering; synthesize it into toffolis first"
            )

    if basis is GateBasis.NATIVE_TOFFOLI:
        out_gates: list[Gate] = []
        for g in circuit.gates:
            if g.kind in allowed:
                out_gates.append(g)
            elif g.kind is GateKind.CV:
                out_gates.append(Gate(GateKind.CU, g.qubits, matrix=_V_MATRIX))
            elif g.kind is GateKind.CVDG:
                out_gates.append(Gate(GateKind.CU, g.qubits, matrix=_VDG_MATRIX))
            else:
                raise LoweringError(f"cannot lower {g.kind.value} to {basis.value}")
        return _with_basis(circuit, out_gates, basis)

    try:
        plan = peres_pairing(circuit)
    except NoMirrorStructureError:
        plan = PairingPlan(
            pairs=(),
            unpaired=tuple(
                i for i, g in enumerate(circuit.gates)
                if g.kind is GateKind.TOFFOLI
            ),
        )
    compute_of: dict[int, ToffoliPair] = {p.compute: p for p in plan.pairs}
    uncompute_of: dict[int, ToffoliPair] = {p.uncompute: p for p in plan.pairs}

    out_gates = []
    for i, g in enumerate(circuit.gates):
        out_gates.extend(
            _lower_gate(g, i, basis, compute_of, uncompute_of)
        )
    return _with_basis(circuit, out_gates, basis)


_V_MATRIX: Matrix2 = (
    ((1 + 1j) / 2, (1 - 1j) / 2),
    ((1 - 1j) / 2, (1 + 1j) / 2),
)
_VDG_MATRIX: Matrix2 = (
    ((1 - 1j) / 2, (1 + 1j) / 2),
    ((1 + 1j) / 2, (1 - 1j) / 2),
)


def _lower_gate(
    g: Gate,
    position: int,
    basis: GateBasis,
    compute_of: dict[int, ToffoliPair],
    uncompute_of: dict[int, ToffoliPair],
) -> tuple[Gate, ...]:
    allowed = ALLOWED_KINDS[basis]
    if g.kind is GateKind.TOFFOLI:
        u, v, t = g.qubits
        pair = compute_of.get(position) or uncompute_of.get(position)
        if pair is None:
            if basis is GateBasis.CV_BASIS:
                return lower_toffoli(u, v, t, ToffoliRule.FIVE_CV)
            return lower_toffoli(u, v, t, ToffoliRule.SIX_CNOT)
        if basis is GateBasis.CV_BASIS:
            member = _four_cv_member(
                u, v, t,
                cnot_control=pair.cnot_control,
                cnot_target=pair.cnot_target,
            )
            if position == pair.uncompute:
                member = _inverse_list(member)
            return member
        # same relative-phase list for both members
        return _relative_phase_member(u, v, t)
    if g.kind in allowed:
        return (g,)
    if g.kind is GateKind.X:
        return (local(g.qubits[0], MAT_X),)
    if g.kind is GateKind.CU:
        return expand_controlled_unitary(g.qubits[0], g.qubits[1], g.matrix)
    if g.kind is GateKind.CV:
        return expand_controlled_unitary(g.qubits[0], g.qubits[1], _V_MATRIX)
    if g.kind is GateKind.CVDG:
        return expand_controlled_unitary(g.qubits[0], g.qubits[1], _VDG_MATRIX)
    raise LoweringError(f"cannot lower {g.kind.value} to {basis.value}")


def _with_basis(circuit: Circuit, gates: list[Gate], basis: GateBasis) -> Circuit:
    meta = replace(circuit.meta, basis=basis.value)
    return replace(circuit, gates=tuple(gates), meta=meta)
