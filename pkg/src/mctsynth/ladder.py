"""Ladder-style multi-controlled gate construction.

The ladder computes the AND of the controls into a chain of process
ancillas with Toffolis, applies the payload, and uncomputes the chain
in mirror order.  Every ancilla starts and ends at |0>.

Register layout for n controls: controls are qubits 0..n-1, the target
is qubit n, process ancillas follow.

Also included here are two fixed small networks that realize a Toffoli
and a triply-controlled NOT with a single workspace qubit, by routing
the computation through joint states of the workspace and the last
control.  They are structural set pieces: the workspace temporarily
"parks" population conditioned on a control, the inner Toffolis act on
the combined pair, and the dressing is mirrored so the workspace comes
back clean.
"""

from __future__ import annotations

from .ir import (
    Circuit,
    CircuitMeta,
    Matrix2,
    QubitRole,
    append,
    cnot,
    cu,
    new_circuit,
    toffoli,
    x,
)


def ladder_roles(n: int, ancillas: int) -> list[QubitRole]:
    return (
        [QubitRole.CONTROL] * n
        + [QubitRole.TARGET]
        + [QubitRole.PROCESS_ANCILLA] * ancillas
    )


def build_cnx(n: int) -> Circuit:
    """n-controlled NOT via the Toffoli ladder.

    Uses n-2 process ancillas and 2n-3 Toffolis for n >= 2: the chain
    joins controls pairwise until one Toffoli short of the full AND,
    then the last Toffoli fires the target off the deepest ancilla and
    the remaining control, and the chain unwinds.
    """
    if n < 1:
        raise ValueError("need at least one control")
    if n == 1:
        circ = new_circuit(ladder_roles(1, 0), CircuitMeta(scheme="ladder", n=1))
        return append(circ, cnot(0, 1))
    if n == 2:
        circ = new_circuit(ladder_roles(2, 0), CircuitMeta(scheme="ladder", n=2))
        return append(circ, toffoli(0, 1, 2))

    target = n
    anc = lambda j: n + 1 + j  # noqa: E731
    circ = new_circuit(ladder_roles(n, n - 2), CircuitMeta(scheme="ladder", n=n))

    compute = [toffoli(0, 1, anc(0))]
    for j in range(1, n - 2):
        compute.append(toffoli(anc(j - 1), j + 1, anc(j)))
    fire = toffoli(anc(n - 3), n - 1, target)
    uncompute = [g for g in reversed(compute)]
    return append(circ, *compute, fire, *uncompute)


def build_cnu(n: int, matrix: Matrix2) -> Circuit:
    """n-controlled single-qubit unitary via the ladder.

    The chain here runs all the way: the AND of all n controls lands in
    the last process ancilla, the payload is applied to the target
    controlled on that ancilla, and the chain unwinds.  Costs one more
    Toffoli and one more ancilla than the NOT ladder (2n-2 and n-1),
    because the payload is not self-inverse and cannot ride on the
    final chain link the way a plain flip can.
    """
    if n < 1:
        raise ValueError("need at least one control")
    if n == 1:
        circ = new_circuit(ladder_roles(1, 0), CircuitMeta(scheme="ladder", n=1))
        return append(circ, cu(0, 1, matrix))

    target = n
    anc = lambda j: n + 1 + j  # noqa: E731
    circ = new_circuit(ladder_roles(n, n - 1), CircuitMeta(scheme="ladder", n=n))

    compute = [toffoli(0, 1, anc(0))]
    for j in range(1, n - 1):
        compute.append(toffoli(anc(j - 1), j + 1, anc(j)))
    payload = cu(anc(n - 2), target, matrix)
    uncompute = [g for g in reversed(compute)]
    return append(circ, *compute, payload, *uncompute)


def build_workspace_toffoli() -> Circuit:
    """Toffoli on (c1, c2, t) = qubits (0, 1, 2) with workspace qubit 3.

    The workspace and c2 act as one four-state carrier.  The opening
    block moves the carrier out of the way when c2 is 0; the dressed
    inner Toffolis then single out the one case where both controls
    were 1 and flip the target; everything else mirrors back.
    """
    roles = [
        QubitRole.CONTROL,
        QubitRole.CONTROL,
        QubitRole.TARGET,
        QubitRole.WORKSPACE,
    ]
    circ = new_circuit(roles, CircuitMeta(scheme="workspace-ccx", n=2))
    gates = [
        x(1), cnot(1, 3), x(1),       # workspace <- NOT c2
        x(0), x(3),                    # dress: test for c1=0 / workspace=0
        toffoli(0, 3, 1),
        toffoli(3, 1, 2),              # fire
        toffoli(0, 3, 1),
        x(3), x(0),                    # undress
        x(1), cnot(1, 3), x(1),        # restore workspace
    ]
    return append(circ, *gates)


def build_workspace_c3x() -> Circuit:
    """Triply-controlled NOT on (c1, c2, c3, t) = qubits (0..3) with
    workspace qubit 4.

    Same parking idea one size up: workspace and c3 form the carrier,
    the opening block parks the carrier when c3 is 0, and five dressed
    Toffolis (each acting on both carrier qubits) route the single
    all-controls-on case to the target.
    """
    roles = [
        QubitRole.CONTROL,
        QubitRole.CONTROL,
        QubitRole.CONTROL,
        QubitRole.TARGET,
        QubitRole.WORKSPACE,
    ]
    circ = new_circuit(roles, CircuitMeta(scheme="workspace-c3x", n=3))
    gates = [
        x(2), cnot(2, 4), x(2),        # park: workspace <- NOT c3
        x(0), x(1), x(4),              # dress
        toffoli(0, 4, 2),
        toffoli(1, 2, 4),
        toffoli(4, 2, 3),              # fire
        toffoli(1, 2, 4),
        toffoli(0, 4, 2),
        x(4), x(1), x(0),              # undress
        x(2), cnot(2, 4), x(2),        # unpark
    ]
    return append(circ, *gates)
