"""Cycle-based construction of multi-controlled NOTs.

The ladder spends one process ancilla per joined control.  The cycle
scheme trades Toffolis for ancillas: the controls beyond the first are
split into groups, each group (plus the running partial product) is
ANDed into a fresh cycle ancilla by a short ladder over a shared
process pool, and only the final group fires the target.  Re-running
the group blocks in reverse order clears the cycle ancillas, since each
block XORs its AND onto its output.

Register layout for n controls and c groups: controls 0..n-1, target n,
cycle ancillas next (c-1 of them), then the shared process pool sized
by the widest block.

All ancillas are clean: they start at |0> and are restored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ir import (
    Circuit,
    CircuitMeta,
    Gate,
    QubitRole,
    append,
    cnot,
    new_circuit,
    toffoli,
)


def group_sizes(n: int, c: int) -> list[int]:
    """Sizes of the c control groups, ascending, as even as possible.

    The n-1 controls beyond the first are divided; remainders go to the
    later groups so the final (firing) group is never the small one.
    """
    if not 1 <= c <= n - 1:
        raise ValueError(f"group count must be in 1..{n - 1}, got {c}")
    q, r = divmod(n - 1, c)
    return [q] * (c - r) + [q + 1] * r


@dataclass(frozen=True)
class CyclePlan:
    """Layout decisions for a cycle-scheme build, before any gate is
    emitted.

    ``group_sizes`` is ascending; ``repeated_cycles`` are the indices of
    the blocks run twice (compute and uncompute), which are exactly the
    non-final ones and, the sizes being ascending, the cheapest ones
    with ties broken toward the lowest index.  ``toffoli_total`` is what
    the builder will actually emit, not a floored average.
    """

    n: int
    c: int
    group_sizes: tuple[int, ...]
    repeated_cycles: tuple[int, ...]
    cycle_ancillas: int
    process_ancillas: int
    ancilla_budget: int
    toffoli_total: int


def _block_toffolis(m: int) -> int:
    # cost of one AND block over m inputs: a copy, one Toffoli, or a
    # ladder of 2m-3
    if m <= 1:
        return 0
    if m == 2:
        return 1
    return 2 * m - 3


def plan_cycles(n: int, c: int) -> CyclePlan:
    """Predict the exact shape of build_cycle_cnx(n, c)."""
    if n < 2:
        raise ValueError("need at least two controls")
    sizes = group_sizes(n, c)
    # block input widths: non-final blocks add the running product,
    # the final block adds it plus the first control
    widths = [
        sizes[k] + (1 if k > 0 else 0) for k in range(c - 1)
    ]
    widths.append(sizes[c - 1] + (1 if c > 1 else 0) + 1)
    pool = max(max(w - 2 for w in widths), 0)
    total = sum(2 * _block_toffolis(w) for w in widths[:-1])
    total += _block_toffolis(widths[-1])
    return CyclePlan(
        n=n,
        c=c,
        group_sizes=tuple(sizes),
        repeated_cycles=tuple(range(c - 1)),
        cycle_ancillas=c - 1,
        process_ancillas=pool,
        ancilla_budget=c - 1 + pool,
        toffoli_total=total,
    )


def build_cycle_cnx_auto(n: int) -> Circuit:
    """Cycle build at the ancilla-minimizing cycle count, the integer
    square root of n-1."""
    if n < 3:
        raise ValueError("automatic cycle choice needs n >= 3")
    return build_cycle_cnx(n, max(math.isqrt(n - 1), 1))


def _and_block(inputs: list[int], out: int, pool: list[int]) -> list[Gate]:
    """XOR the AND of ``inputs`` onto ``out``.

    Ladder over the process pool; the pool is used and fully restored
    within the block.  A single input degenerates to a copy.
    """
    m = len(inputs)
    if m == 1:
        return [cnot(inputs[0], out)]
    if m == 2:
        return [toffoli(inputs[0], inputs[1], out)]
    chain = [toffoli(inputs[0], inputs[1], pool[0])]
    for j in range(1, m - 2):
        chain.append(toffoli(pool[j - 1], inputs[j + 1], pool[j]))
    out_gate = toffoli(pool[m - 3], inputs[m - 1], out)
    return chain + [out_gate] + chain[::-1]


def build_cycle_cnx(n: int, c: int) -> Circuit:
    """n-controlled NOT with c cycles.

    c=1 degenerates to a single ladder over all controls.  Larger c
    shrinks the process pool (the widest block shortens) at the price
    of extra Toffolis for the repeated blocks.
    """
    if n < 2:
        raise ValueError("need at least two controls")
    sizes = group_sizes(n, c)

    groups: list[list[int]] = []
    next_control = 1
    for s in sizes:
        groups.append(list(range(next_control, next_control + s)))
        next_control += s

    target = n
    cycle_anc = [n + 1 + k for k in range(c - 1)]

    # block inputs: each non-final block ANDs its group with the running
    # product; the final block also takes the first control, which rides
    # the firing Toffoli.
    block_inputs: list[list[int]] = []
    for k in range(c - 1):
        inputs = list(groups[k])
        if k > 0:
            inputs.append(cycle_anc[k - 1])
        block_inputs.append(inputs)
    final_inputs = list(groups[c - 1])
    if c > 1:
        final_inputs.append(cycle_anc[c - 2])
    final_inputs.append(0)

    pool_size = max(
        max(len(b) - 2 for b in block_inputs + [final_inputs]), 0
    )
    pool = [n + c + j for j in range(pool_size)]

    roles = (
        [QubitRole.CONTROL] * n
        + [QubitRole.TARGET]
        + [QubitRole.CYCLE_ANCILLA] * (c - 1)
        + [QubitRole.PROCESS_ANCILLA] * pool_size
    )
    circ = new_circuit(roles, CircuitMeta(scheme="cycle", n=n, c=c))

    forward: list[Gate] = []
    for k in range(c - 1):
        forward.extend(_and_block(block_inputs[k], cycle_anc[k], pool))
    fire = _and_block(final_inputs, target, pool)
    backward: list[Gate] = []
    for k in range(c - 2, -1, -1):
        backward.extend(_and_block(block_inputs[k], cycle_anc[k], pool))
    return append(circ, *forward, *fire, *backward)


def build_two_cycle_cnx(n: int) -> Circuit:
    """n-controlled NOT from two half-size blocks and one joining
    ancilla.

    The first half of the controls is ANDed into the joining ancilla,
    the second half plus the ancilla fires the target, and the first
    block repeats to clean up.  The half split keeps both blocks as
    short as possible.
    """
    if n < 3:
        raise ValueError("the two-cycle split needs at least three controls")
    f = (n + 1) // 2
    m = n - f
    target = n
    join = n + 1
    pool_size = max(f - 2, m - 1, 0)
    pool = [n + 2 + j for j in range(pool_size)]

    roles = (
        [QubitRole.CONTROL] * n
        + [QubitRole.TARGET]
        + [QubitRole.CYCLE_ANCILLA]
        + [QubitRole.PROCESS_ANCILLA] * pool_size
    )
    circ = new_circuit(roles, CircuitMeta(scheme="two-cycle", n=n))

    first = _and_block(list(range(f)), join, pool)
    second = _and_block(list(range(f, n)) + [join], target, pool)
    return append(circ, *first, *second, *first)
