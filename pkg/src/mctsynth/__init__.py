"""Explicit synthesis of multi-controlled NOT and unitary gates.

Builders produce circuits over an intermediate representation whose
gates carry qubit roles (control, target, ancilla flavors); lowering
rewrites Toffolis into two-qubit bases, exploiting mirror structure to
use cheap relative-phase members in compute/uncompute pairs; a
brute-force statevector oracle checks every construction on all
computational inputs.
"""

from .ir import (
    Circuit,
    CircuitMeta,
    Gate,
    GateKind,
    QubitId,
    QubitRole,
    NAMED_UNITARIES,
    append,
    concat,
    count_gates,
    gate_histogram,
    inverse,
    new_circuit,
)
from .ladder import (
    build_cnu,
    build_cnx,
    build_workspace_c3x,
    build_workspace_toffoli,
)
from .cycle import (
    CyclePlan,
    build_cycle_cnx,
    build_cycle_cnx_auto,
    build_two_cycle_cnx,
    group_sizes,
    plan_cycles,
)
from .decomp import (
    GateBasis,
    LoweringError,
    NoMirrorStructureError,
    PairingPlan,
    ToffoliPair,
    ToffoliRule,
    expand_controlled_unitary,
    lower_circuit,
    lower_toffoli,
    peres_pairing,
    zyz_angles,
)
from .costs import (
    CostReport,
    TableRow,
    asymptotic_toffolis,
    avg_toffolis_per_cycle,
    ancilla_min_form,
    ancilla_split_form,
    baseline_cv_ops,
    baseline_cv_ops_form,
    baseline_form_applicable,
    beats_baseline,
    best_ancilla_form,
    best_cycle_count,
    cost_report,
    cv_ops_form,
    ladder_ancilla_form,
    ladder_ops_form,
    ladder_toffoli_form,
    make_table,
    render_table_csv,
    render_table_text,
    report_json,
    report_text,
    toffoli_count_form,
    two_cycle_toffoli_form,
)
from .verify import (
    EquivalenceClass,
    EquivalenceVerdict,
    Mismatch,
    WidthLimitError,
    apply,
    basis_state,
    check_equivalence,
    full_unitary,
    oracle_cnu,
    oracle_cnx,
)
from .qasmio import CircuitFileError, dumps, load, loads, save

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "CircuitMeta",
    "Gate",
    "GateKind",
    "QubitId",
    "QubitRole",
    "NAMED_UNITARIES",
    "append",
    "concat",
    "count_gates",
    "gate_histogram",
    "inverse",
    "new_circuit",
    "build_cnu",
    "build_cnx",
    "build_workspace_c3x",
    "build_workspace_toffoli",
    "CyclePlan",
    "build_cycle_cnx",
    "build_cycle_cnx_auto",
    "build_two_cycle_cnx",
    "group_sizes",
    "plan_cycles",
    "GateBasis",
    "LoweringError",
    "NoMirrorStructureError",
    "PairingPlan",
    "ToffoliPair",
    "ToffoliRule",
    "expand_controlled_unitary",
    "lower_circuit",
    "lower_toffoli",
    "peres_pairing",
    "zyz_angles",
    "CostReport",
    "TableRow",
    "asymptotic_toffolis",
    "avg_toffolis_per_cycle",
    "ancilla_min_form",
    "ancilla_split_form",
    "baseline_cv_ops",
    "baseline_cv_ops_form",
    "baseline_form_applicable",
    "beats_baseline",
    "best_ancilla_form",
    "best_cycle_count",
    "cost_report",
    "cv_ops_form",
    "ladder_ancilla_form",
    "ladder_ops_form",
    "ladder_toffoli_form",
    "make_table",
    "render_table_csv",
    "render_table_text",
    "report_json",
    "report_text",
    "toffoli_count_form",
    "two_cycle_toffoli_form",
    "EquivalenceClass",
    "EquivalenceVerdict",
    "Mismatch",
    "WidthLimitError",
    "apply",
    "basis_state",
    "check_equivalence",
    "full_unitary",
    "oracle_cnu",
    "oracle_cnx",
    "CircuitFileError",
    "dumps",
    "load",
    "loads",
    "save",
]
