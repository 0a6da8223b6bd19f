"""Toffoli lowering rules, mirror pairing, and circuit lowering."""

import numpy as np
import pytest

from mctsynth.cycle import build_cycle_cnx, build_two_cycle_cnx
from mctsynth.decomp import (
    ALLOWED_KINDS,
    GateBasis,
    LoweringError,
    NoMirrorStructureError,
    ToffoliRule,
    expand_controlled_unitary,
    lower_circuit,
    lower_toffoli,
    peres_pairing,
    zyz_angles,
)
from mctsynth.ir import (
    Circuit,
    GateKind,
    MAT_H,
    MAT_T,
    MAT_V,
    MAT_X,
    MAT_Z,
    QubitRole,
    append,
    as_array,
    cnot,
    cv,
    local,
    mcx,
    new_circuit,
    toffoli,
    x,
)
from mctsynth.ladder import build_cnx, build_workspace_c3x, build_workspace_toffoli
from mctsynth.verify import EquivalenceClass, check_equivalence, full_unitary, oracle_cnx

C, T, P = QubitRole.CONTROL, QubitRole.TARGET, QubitRole.PROCESS_ANCILLA

DECOMP_TOL = 1e-10


def _circ(roles, gates):
    base = new_circuit(roles)
    return Circuit(base.qubits, tuple(gates), base.meta)


def _perm(width, f):
    """Permutation matrix from a bit map, big-endian like the engine."""
    dim = 2 ** width
    u = np.zeros((dim, dim), complex)
    for i in range(dim):
        bits = [(i >> (width - 1 - k)) & 1 for k in range(width)]
        j = 0
        for b in f(bits):
            j = (j << 1) | b
        u[j, i] = 1
    return u


# independent references built straight from truth tables
TOF = _perm(3, lambda b: [b[0], b[1], b[2] ^ (b[0] & b[1])])
CX_FROM_Q1_TO_Q0 = _perm(3, lambda b: [b[0] ^ b[1], b[1], b[2]])


class TestLowerToffoli:
    def test_six_cnot_exact(self):
        u = full_unitary(_circ([C, C, T], lower_toffoli(0, 1, 2, ToffoliRule.SIX_CNOT)))
        assert np.abs(u - TOF).max() < DECOMP_TOL

    def test_five_cv_exact(self):
        u = full_unitary(_circ([C, C, T], lower_toffoli(0, 1, 2, ToffoliRule.FIVE_CV)))
        assert np.abs(u - TOF).max() < DECOMP_TOL

    def test_four_cv_composes_with_cnot(self):
        # the 4-op member equals a Toffoli followed by a CNOT from the
        # second control onto the first
        u = full_unitary(_circ([C, C, T], lower_toffoli(0, 1, 2, ToffoliRule.FOUR_CV)))
        assert np.abs(u - CX_FROM_Q1_TO_Q0 @ TOF).max() < DECOMP_TOL

    def test_relative_phase_diagonal(self):
        u = full_unitary(
            _circ([C, C, T], lower_toffoli(0, 1, 2, ToffoliRule.RELATIVE_PHASE))
        )
        d = TOF.conj().T @ u
        off = d - np.diag(np.diag(d))
        assert np.abs(off).max() < DECOMP_TOL
        diag = np.diag(d)
        assert np.abs(np.imag(diag)).max() < DECOMP_TOL
        assert np.real(diag).round(6).tolist() == [1, 1, -1, 1, 1, 1, 1, 1]

    def test_gate_budgets(self):
        budgets = {
            ToffoliRule.SIX_CNOT: (15, {GateKind.CNOT: 6, GateKind.LOCAL: 9}),
            ToffoliRule.RELATIVE_PHASE: (7, {GateKind.CNOT: 3, GateKind.LOCAL: 4}),
            ToffoliRule.FIVE_CV: (5, {GateKind.CNOT: 2}),
            ToffoliRule.FOUR_CV: (4, {GateKind.CNOT: 1}),
        }
        for rule, (total, wanted) in budgets.items():
            gates = lower_toffoli(0, 1, 2, rule)
            assert len(gates) == total, rule
            for kind, count in wanted.items():
                assert sum(g.kind is kind for g in gates) == count, rule

    def test_operands_respected(self):
        for rule in ToffoliRule:
            gates = lower_toffoli(2, 0, 1, rule)
            assert set().union(*(g.qubits for g in gates)) <= {0, 1, 2}


class TestZyz:
    @pytest.mark.parametrize("m", [MAT_X, MAT_Z, MAT_H, MAT_T, MAT_V])
    def test_named_round_trip(self, m):
        alpha, beta, gamma, delta = zyz_angles(m)
        rebuilt = _rebuild(alpha, beta, gamma, delta)
        assert np.abs(rebuilt - as_array(m)).max() < DECOMP_TOL

    def test_random_round_trip(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
            m = ((complex(q[0, 0]), complex(q[0, 1])), (complex(q[1, 0]), complex(q[1, 1])))
            rebuilt = _rebuild(*zyz_angles(m))
            assert np.abs(rebuilt - q).max() < DECOMP_TOL


def _rebuild(alpha, beta, gamma, delta):
    rz = lambda t: np.array(
        [[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]]
    )
    ry = lambda t: np.array(
        [[np.cos(t / 2), -np.sin(t / 2)], [np.sin(t / 2), np.cos(t / 2)]]
    )
    return np.exp(1j * alpha) * rz(beta) @ ry(gamma) @ rz(delta)


class TestExpandControlledUnitary:
    @pytest.mark.parametrize("m", [MAT_X, MAT_Z, MAT_V, MAT_T])
    def test_expansion_matches_controlled_matrix(self, m):
        gates = expand_controlled_unitary(0, 1, m)
        assert all(g.kind in (GateKind.CNOT, GateKind.LOCAL) for g in gates)
        u = full_unitary(_circ([C, T], gates))
        want = np.eye(4, dtype=complex)
        want[2:, 2:] = as_array(m)
        assert np.abs(u - want).max() < DECOMP_TOL

    def test_expansion_is_six_gates(self):
        assert len(expand_controlled_unitary(0, 1, MAT_V)) == 6


class TestPairing:
    def test_ladder_pairs_all_but_middle(self):
        for n in range(3, 9):
            plan = peres_pairing(build_cnx(n))
            assert len(plan.pairs) == n - 2
            assert len(plan.unpaired) == 1
            assert plan.unpaired[0] == n - 2  # the firing Toffoli

    def test_single_toffoli_unpaired(self):
        plan = peres_pairing(build_cnx(2))
        assert plan.pairs == ()
        assert plan.unpaired == (0,)

    def test_cycle_pairing_counts(self):
        # the 2c-1 cycle-closing Toffolis stay unpaired; pool sharing
        # blocks any cross-block match
        cases = {(5, 2): (3, 1), (9, 3): (8, 3), (11, 3): (10, 5)}
        for (n, c), (pairs, unpaired) in cases.items():
            plan = peres_pairing(build_cycle_cnx(n, c))
            assert (len(plan.pairs), len(plan.unpaired)) == (pairs, unpaired), (n, c)

    def test_two_cycle_pairing_counts(self):
        expected = {3: (1, 1), 4: (2, 1), 5: (3, 3), 8: (7, 3)}
        for n, (pairs, unpaired) in expected.items():
            plan = peres_pairing(build_two_cycle_cnx(n))
            assert (len(plan.pairs), len(plan.unpaired)) == (pairs, unpaired), n

    def test_workspace_pairing_counts(self):
        plan = peres_pairing(build_workspace_toffoli())
        assert (len(plan.pairs), len(plan.unpaired)) == (1, 1)
        plan = peres_pairing(build_workspace_c3x())
        assert (len(plan.pairs), len(plan.unpaired)) == (1, 3)

    def test_members_cover_all_toffolis_once(self):
        for circ in [build_cnx(6), build_cycle_cnx(9, 2), build_two_cycle_cnx(7)]:
            plan = peres_pairing(circ)
            covered = sorted(
                [p.compute for p in plan.pairs]
                + [p.uncompute for p in plan.pairs]
                + list(plan.unpaired)
            )
            tof_positions = [
                i for i, g in enumerate(circ.gates) if g.kind is GateKind.TOFFOLI
            ]
            assert covered == tof_positions

    def test_no_crossing_pairs(self):
        # nested or disjoint spans only; a crossing pair would break the
        # sandwich argument that makes the cheap members sound
        for circ in [build_cnx(8), build_cycle_cnx(11, 3), build_two_cycle_cnx(8)]:
            plan = peres_pairing(circ)
            spans = [(p.compute, p.uncompute) for p in plan.pairs]
            for a, b in spans:
                for c_, d in spans:
                    if (a, b) == (c_, d):
                        continue
                    crossing = a < c_ < b < d or c_ < a < d < b
                    assert not crossing, (a, b, c_, d)

    def test_non_palindrome_rejected(self):
        circ = append(
            new_circuit([C, C, T, P]), toffoli(0, 1, 2), toffoli(0, 1, 3)
        )
        with pytest.raises(NoMirrorStructureError):
            peres_pairing(circ)

    def test_write_between_members_blocks_pair(self):
        # X on an operand between the two members violates the
        # control-only condition, so both fall back to unpaired
        circ = append(
            new_circuit([C, C, T]), toffoli(0, 1, 2), x(0), toffoli(0, 1, 2)
        )
        plan = peres_pairing(circ)
        assert plan.pairs == ()
        assert plan.unpaired == (0, 2)

    def test_control_only_touches_allow_pair(self):
        circ = append(
            new_circuit([C, C, T, P]), toffoli(0, 1, 3), cv(3, 2), toffoli(0, 1, 3)
        )
        plan = peres_pairing(circ)
        assert len(plan.pairs) == 1
        assert plan.unpaired == ()

    def test_pair_records_cnot_orientation(self):
        plan = peres_pairing(build_cnx(3))
        (pair,) = plan.pairs
        assert {pair.cnot_control, pair.cnot_target} <= {0, 1, 2, 3, 4}
        assert pair.cnot_control != pair.cnot_target


class TestLowerCircuit:
    @pytest.mark.parametrize("basis", list(GateBasis))
    def test_mcx_rejected(self, basis):
        circ = append(new_circuit([C, C, C, T]), mcx([0, 1, 2], 3))
        with pytest.raises(LoweringError):
            lower_circuit(circ, basis)

    @pytest.mark.parametrize("basis", list(GateBasis))
    def test_only_allowed_kinds_emitted(self, basis):
        for circ in [
            build_cnx(5),
            build_cycle_cnx(7, 2),
            build_two_cycle_cnx(6),
            build_workspace_c3x(),
        ]:
            lowered = lower_circuit(circ, basis)
            kinds = {g.kind for g in lowered.gates}
            assert kinds <= ALLOWED_KINDS[basis], (circ.meta.scheme, basis)

    def test_native_keeps_toffolis_converts_cv(self):
        circ = append(new_circuit([C, C, T]), toffoli(0, 1, 2), cv(0, 2))
        lowered = lower_circuit(circ, GateBasis.NATIVE_TOFFOLI)
        assert [g.kind for g in lowered.gates] == [GateKind.TOFFOLI, GateKind.CU]
        assert np.allclose(
            as_array(lowered.gates[1].matrix), as_array(MAT_V), atol=1e-12
        )

    def test_ladder_lowered_op_counts(self):
        for n in range(2, 9):
            cl = lower_circuit(build_cnx(n), GateBasis.CNOT_LOCAL)
            cvb = lower_circuit(build_cnx(n), GateBasis.CV_BASIS)
            assert len(cl.gates) == 14 * n - 13
            assert len(cvb.gates) == 8 * n - 11

    def test_lowered_meta_records_basis(self):
        lowered = lower_circuit(build_cnx(3), GateBasis.CV_BASIS)
        assert lowered.meta.basis == GateBasis.CV_BASIS.value

    def test_no_mirror_falls_back_to_exact_rules(self):
        # two different Toffolis have no mirror structure; both must be
        # lowered with the exact rule and stay correct
        base = new_circuit([C, C, C, T])
        circ = append(base, toffoli(0, 1, 3), toffoli(0, 2, 3))
        with pytest.raises(NoMirrorStructureError):
            peres_pairing(circ)
        cl = lower_circuit(circ, GateBasis.CNOT_LOCAL)
        assert len(cl.gates) == 2 * 15
        cvb = lower_circuit(circ, GateBasis.CV_BASIS)
        assert len(cvb.gates) == 2 * 5
        want = full_unitary(circ)
        assert np.abs(full_unitary(cl) - want).max() < 1e-9
        assert np.abs(full_unitary(cvb) - want).max() < 1e-9

    def test_paired_lowering_stays_exact(self):
        for basis in (GateBasis.CNOT_LOCAL, GateBasis.CV_BASIS):
            lowered = lower_circuit(build_cnx(4), basis)
            v = check_equivalence(lowered, oracle_cnx(4))
            assert v.klass is EquivalenceClass.EXACT, basis

    def test_x_becomes_local_outside_native(self):
        circ = append(new_circuit([C, T]), x(0), cnot(0, 1))
        lowered = lower_circuit(circ, GateBasis.CV_BASIS)
        assert lowered.gates[0].kind is GateKind.LOCAL
        assert np.allclose(as_array(lowered.gates[0].matrix), as_array(MAT_X))

    def test_cu_expanded_outside_native(self):
        from mctsynth.ir import cu

        circ = append(new_circuit([C, T]), cu(0, 1, MAT_Z))
        lowered = lower_circuit(circ, GateBasis.CNOT_LOCAL)
        assert all(
            g.kind in (GateKind.CNOT, GateKind.LOCAL) for g in lowered.gates
        )
        u = full_unitary(lowered)
        want = np.diag([1, 1, 1, -1]).astype(complex)
        assert np.abs(u - want).max() < 1e-9
