"""Cost accounting: closed-form predictions, built counts, and the
comparison table.

Two kinds of numbers appear here and they are kept strictly apart.

Closed forms are analytic predictions for the constructions: Toffoli
count, ancilla count, and lowered two-qubit operation count as
functions of n (controls) and c (cycles).  Built counts are what the
builders actually produce, measured by counting gates.  They usually
agree; where they provably cannot (the cycle Toffoli form is a floored
average with the wrong parity for some (n, c)), both numbers are
reported and the gap is flagged rather than papered over.

The module also carries fixed reference values for small n: the
per-n operation and ancilla counts the cycle scheme is expected to hit
at the best cycle count, and the corresponding counts of an established
alternative construction used for comparison.  The alternative's own
closed form disagrees with its fixed values by a known per-n offset;
accessors surface both numbers, and the table prefers the fixed values
where they exist.

All count arithmetic is exact (int / Fraction); floats appear only in
the explicitly asymptotic estimate.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cycle import build_cycle_cnx, build_two_cycle_cnx
from .decomp import (
    GateBasis,
    NoMirrorStructureError,
    lower_circuit,
    peres_pairing,
)
from .ir import Circuit, GateKind, QubitRole, count_gates
from .ladder import build_cnx, build_workspace_c3x, build_workspace_toffoli


# ---------------------------------------------------------------------------
# closed forms for the ladder

def ladder_toffoli_form(n: int) -> int:
    return 2 * n - 3


def ladder_ancilla_form(n: int) -> int:
    return n - 2


def ladder_ops_form(n: int, basis: GateBasis) -> int:
    """Lowered operation count of the n-control ladder.

    One Toffoli stays exact (15 gates in CNOT_LOCAL, 5 in the CV basis)
    and the 2n-4 mirrored ones take the cheap members (7 and 4)."""
    if basis is GateBasis.CNOT_LOCAL:
        return 14 * n - 13
    if basis is GateBasis.CV_BASIS:
        return 8 * n - 11
    return ladder_toffoli_form(n)


# ---------------------------------------------------------------------------
# closed forms for the cycle scheme

def avg_toffolis_per_cycle(n: int, c: int) -> Fraction:
    """Average Toffoli cost of one cycle when the n-1 grouped controls
    are divided evenly across c cycles.  Exact rational."""
    _require_c(n, c)
    return Fraction(2 * (n - 1) - c, c)


def toffoli_count_form(n: int, c: int) -> int:
    """Predicted cycle-scheme Toffoli total: 2c-1 cycle runs at the
    average cycle cost, floored.

    The floor of an average is not always realizable by any actual
    grouping (every ladder block has odd cost, so totals of the built
    circuits are always odd); compare with built counts and see the
    discrepancy notes in cost reports.
    """
    _require_c(n, c)
    return (2 * n * (2 * c - 1) - c * (3 + 2 * c) + 2) // c


def ancilla_split_form(n: int, c: int) -> int:
    """Process pool plus cycle ancillas, counted separately."""
    _require_c(n, c)
    return math.ceil((n - 1) / c) + c - 2


def ancilla_min_form(n: int, c: int) -> int:
    """Ancilla total used by the scheme summaries: one more than the
    split form (the firing block's extra slot)."""
    _require_c(n, c)
    return math.ceil((n - 1) / c) + c - 1


def best_cycle_count(n: int) -> int:
    """Cycle count minimizing the ancilla total: floor of sqrt(n-1),
    computed with the exact integer square root."""
    if n < 2:
        raise ValueError("need at least two controls")
    return max(math.isqrt(n - 1), 1)


def best_ancilla_form(n: int) -> int:
    return ancilla_min_form(n, best_cycle_count(n))


def asymptotic_toffolis(n: int) -> float:
    """Large-n Toffoli estimate for the cycle scheme at the best cycle
    count: 4(n - sqrt(n)), roughly double the ladder's 2n-3."""
    return 4.0 * (n - math.sqrt(n))


def cv_ops_form(n: int, c: Optional[int] = None) -> int:
    """Predicted two-qubit operation count of the cycle scheme in the
    CV basis: paired Toffolis at 4 operations, the 2c-1 cycle-closing
    ones at 5."""
    if n < 3:
        raise ValueError("cv op form needs n >= 3")
    if c is None:
        c = best_cycle_count(n)
    _require_c(n, c)
    return 4 * (4 * n - (2 * (n - 1)) // c - 2 * c - 3) + 2 * c - 1


def two_cycle_toffoli_form(n: int) -> int:
    """Toffoli total of the two-block split: 3(n-2) for odd n, 3n-7
    for even n (the even case is one short of 3(n-2) because the halves
    tie)."""
    if n < 3:
        raise ValueError("two-cycle split needs n >= 3")
    f = (n + 1) // 2
    return 2 * n + 2 * f - 7


def two_cycle_comparison_form(n: int) -> int:
    """Toffoli count of the older borrowed-ancilla network the
    two-cycle split is usually compared against: 8(n-5)."""
    return 8 * (n - 5)


def _require_c(n: int, c: int) -> None:
    if not 1 <= c <= n - 1:
        raise ValueError(f"cycle count must be in 1..{n - 1}, got {c}")


# ---------------------------------------------------------------------------
# comparison construction

def baseline_cv_ops_form(n: int) -> int:
    """Closed form for the comparison construction's two-qubit count.

    Known to undershoot the fixed reference values below; see
    baseline_cv_ops for the reconciled accessor and
    REFERENCE_BASELINE_CV_OPS for the numbers themselves.
    """
    if n < 3:
        raise ValueError("baseline form needs n >= 3")
    s = best_cycle_count(n)
    return 24 * n - 64 - 12 * math.ceil((n - 1) / s) - 12 * s


def baseline_form_applicable(n: int) -> bool:
    """The comparison form assumes enough spare qubits; below this
    margin it is outside its stated domain."""
    return n - best_ancilla_form(n) > 5


# Fixed reference values for small n.  REFERENCE_CV_OPS and
# REFERENCE_ANCILLA are what the cycle scheme should report at the best
# cycle count; REFERENCE_BASELINE_CV_OPS is the comparison construction.
REFERENCE_CV_OPS: dict[int, int] = {
    3: 13, 4: 21, 5: 39, 6: 51, 7: 63, 8: 75, 9: 87,
    10: 105, 11: 121, 12: 133, 13: 145, 14: 161, 15: 173,
}

REFERENCE_ANCILLA: dict[int, int] = {
    3: 2, 4: 3, 5: 3, 6: 4, 7: 4, 8: 5, 9: 5,
    10: 5, 11: 6, 12: 6, 13: 6, 14: 7, 15: 7,
}

REFERENCE_BASELINE_CV_OPS: dict[int, int] = {
    3: 14, 4: 26, 5: 38, 6: 50, 7: 64, 8: 76, 9: 96,
    10: 116, 11: 128, 12: 152, 13: 176, 14: 188, 15: 212,
}


def baseline_cv_ops(n: int) -> int:
    """Reference value where one exists, closed form otherwise."""
    if n in REFERENCE_BASELINE_CV_OPS:
        return REFERENCE_BASELINE_CV_OPS[n]
    return baseline_cv_ops_form(n)


def beats_baseline(n: int) -> Optional[bool]:
    """Whether the cycle scheme's predicted CV count undercuts the
    comparison form.  None when the comparison form is outside its
    stated domain of validity."""
    if not baseline_form_applicable(n):
        return None
    return cv_ops_form(n) < baseline_cv_ops_form(n)


# ---------------------------------------------------------------------------
# built-vs-form report

@dataclass(frozen=True)
class CostReport:
    """Closed forms next to measured counts for one built circuit.

    Any disagreement between a form and its built counterpart is spelled
    out in ``discrepancies``; an empty tuple means full agreement.
    """

    scheme: str
    n: int
    c: Optional[int]
    basis: str
    toffoli_form: Optional[int]
    toffoli_built: int
    ancilla_form: Optional[int]
    ancilla_split: Optional[int]
    ancilla_built: int
    ops_form: Optional[int]
    ops_built: int
    baseline_ops: Optional[int]
    discrepancies: tuple[str, ...] = field(default_factory=tuple)


def report_json(report: CostReport) -> str:
    return json.dumps(dataclasses.asdict(report), indent=2, sort_keys=True)


def report_text(report: CostReport) -> str:
    def fmt(v: Optional[int]) -> str:
        return "-" if v is None else str(v)

    lines = [
        f"scheme   {report.scheme}  n={report.n}"
        + (f"  c={report.c}" if report.c is not None else ""),
        f"basis    {report.basis}",
        f"toffoli  form {fmt(report.toffoli_form)}  built {report.toffoli_built}",
        f"ancilla  form {fmt(report.ancilla_form)}  built {report.ancilla_built}"
        + (
            f"  (split form {report.ancilla_split})"
            if report.ancilla_split is not None
            else ""
        ),
        f"ops      form {fmt(report.ops_form)}  built {report.ops_built}",
    ]
    if report.baseline_ops is not None:
        lines.append(f"baseline ops {report.baseline_ops}")
    for note in report.discrepancies:
        lines.append(f"note     {note}")
    return "\n".join(lines)


def _ancilla_count(circuit: Circuit) -> int:
    return sum(
        1
        for q in circuit.qubits
        if q.role
        in (QubitRole.CYCLE_ANCILLA, QubitRole.PROCESS_ANCILLA, QubitRole.WORKSPACE)
    )


def cost_report(
    scheme: str,
    n: int,
    c: Optional[int] = None,
    basis: GateBasis = GateBasis.CV_BASIS,
) -> CostReport:
    """Build the requested circuit, lower it, and report built counts
    next to the closed forms."""
    toffoli_form: Optional[int] = None
    ancilla_form: Optional[int] = None
    ancilla_split: Optional[int] = None
    ops_form: Optional[int] = None
    baseline: Optional[int] = None
    used_c: Optional[int] = None

    if scheme == "ladder":
        circuit = build_cnx(n)
        if n >= 2:
            toffoli_form = ladder_toffoli_form(n)
            ancilla_form = ladder_ancilla_form(n)
            ops_form = ladder_ops_form(n, basis)
    elif scheme == "cycle":
        used_c = c if c is not None else best_cycle_count(n)
        circuit = build_cycle_cnx(n, used_c)
        toffoli_form = toffoli_count_form(n, used_c)
        ancilla_form = ancilla_min_form(n, used_c)
        ancilla_split = ancilla_split_form(n, used_c)
        if basis is GateBasis.CV_BASIS and n >= 3:
            ops_form = cv_ops_form(n, used_c)
            if used_c == best_cycle_count(n):
                baseline = baseline_cv_ops(n)
    elif scheme == "two-cycle":
        circuit = build_two_cycle_cnx(n)
        toffoli_form = two_cycle_toffoli_form(n)
        used_c = 2
    elif scheme == "workspace-ccx":
        circuit = build_workspace_toffoli()
    elif scheme == "workspace-c3x":
        circuit = build_workspace_c3x()
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    lowered = lower_circuit(circuit, basis)
    toffoli_built = count_gates(circuit, GateKind.TOFFOLI)
    ancilla_built = _ancilla_count(circuit)
    ops_built = len(lowered.gates)

    notes: list[str] = []
    if toffoli_form is not None and toffoli_form != toffoli_built:
        notes.append(f"toffoli form {toffoli_form} != built {toffoli_built}")
    if ancilla_form is not None and ancilla_form != ancilla_built:
        notes.append(f"ancilla form {ancilla_form} != built {ancilla_built}")
    if ops_form is not None and ops_form != ops_built:
        notes.append(f"ops form {ops_form} != built {ops_built}")
    if basis is GateBasis.CNOT_LOCAL:
        # the 7-gate mirrored member has a widely quoted 11-gate variant
        # (3 CNOTs + 8 locals); surface what the count would be under
        # that reading so the two are never conflated
        try:
            pairs = len(peres_pairing(circuit).pairs)
        except NoMirrorStructureError:
            pairs = 0
        if pairs:
            notes.append(
                f"paired members counted at 7 gates; the 11-gate reading "
                f"would give {ops_built + 8 * pairs} ops"
            )
    return CostReport(
        scheme=scheme,
        n=n,
        c=used_c,
        basis=basis.value,
        toffoli_form=toffoli_form,
        toffoli_built=toffoli_built,
        ancilla_form=ancilla_form,
        ancilla_split=ancilla_split,
        ancilla_built=ancilla_built,
        ops_form=ops_form,
        ops_built=ops_built,
        baseline_ops=baseline,
        discrepancies=tuple(notes),
    )


# ---------------------------------------------------------------------------
# the comparison table

@dataclass(frozen=True)
class TableRow:
    n: int
    cycles: int
    ancilla: int
    ours: int
    baseline: int
    ours_built: int
    baseline_form: int
    baseline_delta: int


def make_table(lo: int = 3, hi: int = 64) -> list[TableRow]:
    """Per-n comparison rows: predicted and built counts for the cycle
    scheme at the best cycle count, next to the comparison
    construction's reference value and closed form."""
    if not (3 <= lo <= hi <= 64):
        raise ValueError("table range must satisfy 3 <= lo <= hi <= 64")
    rows = []
    for n in range(lo, hi + 1):
        s = best_cycle_count(n)
        built = lower_circuit(build_cycle_cnx(n, s), GateBasis.CV_BASIS)
        baseline = baseline_cv_ops(n)
        form = baseline_cv_ops_form(n)
        rows.append(
            TableRow(
                n=n,
                cycles=s,
                ancilla=ancilla_min_form(n, s),
                ours=cv_ops_form(n, s),
                baseline=baseline,
                ours_built=len(built.gates),
                baseline_form=form,
                baseline_delta=baseline - form,
            )
        )
    return rows


def render_table_text(rows: list[TableRow]) -> str:
    header = (
        f"{'n':>4} {'ancilla':>7} {'ours':>6} {'baseline':>8} "
        f"{'ours_built':>10} {'baseline_form':>13} {'delta':>6}"
    )
    lines = [header]
    for r in rows:
        lines.append(
            f"{r.n:>4} {r.ancilla:>7} {r.ours:>6} {r.baseline:>8} "
            f"{r.ours_built:>10} {r.baseline_form:>13} {r.baseline_delta:>6}"
        )
    return "\n".join(lines)


def render_table_csv(rows: list[TableRow]) -> str:
    lines = ["n,ancilla,ours,baseline,ours_built,baseline_form,baseline_delta"]
    for r in rows:
        lines.append(
            f"{r.n},{r.ancilla},{r.ours},{r.baseline},"
            f"{r.ours_built},{r.baseline_form},{r.baseline_delta}"
        )
    return "\n".join(lines)
