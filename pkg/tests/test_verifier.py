import itertools

import numpy as np
import pytest

from cscgates.circuit import GATE_MATRICES, CodeblockLayout
from cscgates.errors import BudgetExceeded, PreconditionFailed
from cscgates.logical import LogicalAction, z_algebra_conjugation_check
from cscgates.verifier import (
    EnumerationSpec,
    brute_force_theorem,
    circuit_count,
    composition_closure_probe,
    enumerate_circuits,
    random_monomial_action,
)

SWAP = GATE_MATRICES["SWAP"]


def two_qubit_moves_oracle(names):
    """Full 4x4 unitaries of every placement of the named gates on two qubits."""
    out = []
    for name in names:
        m = GATE_MATRICES[name]
        if m.shape[0] == 2:
            out += [np.kron(m, np.eye(2)), np.kron(np.eye(2), m)]
        else:
            out += [m, SWAP @ m @ SWAP]
    return out


def distinct_up_to_phase(unitaries):
    classes = []
    for u in unitaries:
        if not any(abs(abs(np.trace(c.conj().T @ u)) - u.shape[0]) < 1e-8 for c in classes):
            classes.append(u)
    return len(classes)


class TestEnumeration:
    def test_single_gate_counts(self):
        assert len(list(enumerate_circuits(EnumerationSpec(("X",), 2, 1)))) == 2
        assert len(list(enumerate_circuits(EnumerationSpec(("CNOT",), 2, 1)))) == 2

    def test_dedup_matches_naive(self):
        moves = two_qubit_moves_oracle(["H", "CNOT"])
        words = [m for m in moves] + [b @ a for a, b in itertools.product(moves, repeat=2)]
        expected = distinct_up_to_phase(words)
        got = list(enumerate_circuits(EnumerationSpec(("H", "CNOT"), 2, 2)))
        assert len(got) == expected
        raw = list(enumerate_circuits(EnumerationSpec(("H", "CNOT"), 2, 2, dedup=False)))
        assert len(raw) == len(words) == circuit_count(EnumerationSpec(("H", "CNOT"), 2, 2))

    def test_deterministic(self):
        spec = EnumerationSpec(("H", "S", "CZ"), 2, 2)
        a = [[(g.kind, g.qubits) for g in c.gates] for c in enumerate_circuits(spec)]
        b = [[(g.kind, g.qubits) for g in c.gates] for c in enumerate_circuits(spec)]
        assert a == b

    def test_zero_gates(self):
        circuits = list(enumerate_circuits(EnumerationSpec(("X",), 3, 0)))
        assert len(circuits) == 1 and circuits[0].num_gates == 0

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            list(enumerate_circuits(EnumerationSpec(("H", "CNOT"), 3, 4, budget=1000)))

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            EnumerationSpec(("FOO",), 2, 1)
        with pytest.raises(ValueError):
            EnumerationSpec(("X",), 2, -1)

    def test_templates(self, two_rep3):
        spec = EnumerationSpec(("CNOT",), 6, 1, max_support_per_gate=1, transversal_templates=True)
        circuits = list(enumerate_circuits(spec, two_rep3))
        assert len(circuits) == 2
        assert all(c.num_layers == 1 and c.num_gates == 3 for c in circuits)


class TestBruteForce:
    def test_rep3_single_gates(self, rep3_layout):
        summary = brute_force_theorem(EnumerationSpec(("X", "Z", "S", "H", "CNOT", "CZ"), 3, 1),
                                      rep3_layout)
        assert summary.ok and summary.z_algebra_violations_below_bound == 0

    def test_z_strings_only(self, rep3_layout):
        summary = brute_force_theorem(EnumerationSpec(("Z",), 3, 2), rep3_layout)
        assert summary.preserving_count == summary.circuits_examined
        assert summary.z_algebra_violations == 0
        assert set(summary.labels()) == {"I", "Z"}

    def test_dedup_soundness(self, rep3_layout):
        gates = ("X", "H", "CNOT")
        on = brute_force_theorem(EnumerationSpec(gates, 3, 2), rep3_layout)
        off = brute_force_theorem(EnumerationSpec(gates, 3, 2, dedup=False), rep3_layout)
        assert off.circuits_examined >= on.circuits_examined
        assert off.preserving_count >= on.preserving_count
        assert on.z_algebra_violations_below_bound == off.z_algebra_violations_below_bound == 0
        assert set(on.catalogue) == set(off.catalogue)

    def test_parallel_matches_serial(self, rep3_layout):
        spec = EnumerationSpec(("X", "S", "CZ"), 3, 2)
        one = brute_force_theorem(spec, rep3_layout, jobs=1)
        two = brute_force_theorem(spec, rep3_layout, jobs=2)
        assert one == two

    def test_catalogue_rep3_transversal_x(self, rep3):
        layout = CodeblockLayout.single(rep3)
        spec = EnumerationSpec(("X", "Z"), 3, 1, max_support_per_gate=1, transversal_templates=True)
        summary = brute_force_theorem(spec, layout)
        entry = summary.labels()["X"]
        assert entry.min_layered == (1, 1, 1)
        assert entry.z_algebra_ok

    def test_two_block_cnot(self, two_rep3):
        spec = EnumerationSpec(("X", "CNOT"), 6, 2, max_support_per_gate=1,
                               transversal_templates=True)
        summary = brute_force_theorem(spec, two_rep3)
        assert summary.ok
        labels = summary.labels()
        assert labels["CNOT[0, 1]"].min_layered == (1, 1, 1)
        assert labels["CNOT[1, 0]"].z_algebra_ok

    def test_layout_mismatch(self, rep3_layout):
        with pytest.raises(ValueError):
            brute_force_theorem(EnumerationSpec(("X",), 2, 1), rep3_layout)


class TestComposition:
    def test_paulis(self):
        acts = [LogicalAction(GATE_MATRICES["Z"]), LogicalAction(GATE_MATRICES["X"])]
        assert composition_closure_probe(acts, trials=20)

    def test_phase_gates(self):
        acts = [LogicalAction(np.diag([1, np.exp(1j * t)])) for t in (0.1, 0.7, 2.0)]
        assert composition_closure_probe(acts, trials=50)

    def test_rejects_hadamard(self):
        acts = [LogicalAction(GATE_MATRICES["Z"]), LogicalAction(GATE_MATRICES["H"])]
        with pytest.raises(PreconditionFailed):
            composition_closure_probe(acts)

    def test_monomials_preserve(self):
        rng = np.random.default_rng(2)
        for k in (1, 2, 3):
            act = random_monomial_action(k, rng)
            assert all(z_algebra_conjugation_check(act))
            assert act.unitary_defect <= 1e-12 or np.allclose(act.u_l @ act.u_l.conj().T, np.eye(2**k))

    def test_empty(self):
        assert composition_closure_probe([])
