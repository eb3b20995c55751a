"""Acceptance gate: nine end-to-end criteria, each reported as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py``; the lines are printed in the
terminal summary (or directly when the module is executed as a script).
"""

import time

import numpy as np
import pytest
from conftest import random_full_rank

from cscgates.circuit import (
    GATE_MATRICES,
    Circuit,
    CodeblockLayout,
    Gate,
    biased_bound_ok,
    conjugate_through,
    consecutive_bound,
    layered_bound,
    minimal_r,
    per_gate_block_support,
)
from cscgates.code import StabilizerCode
from cscgates.documents import bundled_path, load_code
from cscgates.logical import (
    LogicalAction,
    canonical_phase,
    logical_action,
    theorem_witness,
    x_rule_check,
    x_string_logical,
    z_algebra_conjugation_check,
)
from cscgates.pauli import PauliString, decompose, dense_matrix, is_z_type
from cscgates.verifier import (
    EnumerationSpec,
    composition_closure_probe,
    enumerate_circuits,
    random_gate_sequence,
    random_layered_circuit,
    random_monomial_action,
)

pytestmark = pytest.mark.acceptance

BUNDLED = ("rep3", "rep5", "code422")
RESULTS: dict[int, str] = {}


def record(number, name, ok, detail):
    RESULTS[number] = f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}"
    print(RESULTS[number])
    assert ok, RESULTS[number]


def bundled_codes():
    return {name: load_code(bundled_path(name)) for name in BUNDLED}


def random_layout(rng, c_max=2, size_max=5):
    c = int(rng.integers(1, c_max + 1))
    return CodeblockLayout.contiguous(
        [StabilizerCode.repetition(int(rng.integers(2, size_max + 1))) for _ in range(c)]
    )


def test_1_isometry_identities():
    start = time.perf_counter()
    codes = list(bundled_codes().values())
    rng = np.random.default_rng(20240101)
    while len(codes) < len(BUNDLED) + 20:
        n = int(rng.integers(2, 9))
        m = int(rng.integers(1, n))
        codes.append(StabilizerCode.from_parity(random_full_rank(rng, m, n)))
    worst = 0.0
    for code in codes:
        s = code.isometry_matrix()
        worst = max(worst, np.abs(s.conj().T @ s - np.eye(2**code.k)).max())
        for stab in code.stabilizers:
            worst = max(worst, np.abs(dense_matrix(stab) @ s - s).max())
    elapsed = time.perf_counter() - start
    record(1, "isometry identities", worst <= 1e-9 and elapsed < 10,
           f"{len(codes)} codes, max deviation {worst:.2e}, {elapsed:.2f}s")


def test_2_x_rule():
    start = time.perf_counter()
    codes = bundled_codes()
    r3, r5 = x_rule_check(codes["rep3"]), x_rule_check(codes["rep5"])
    s = codes["rep5"].isometry_matrix()
    full = x_string_logical(s, 5, range(5))
    full_norm = float(np.linalg.norm(full, 2))
    is_x = np.abs(full - GATE_MATRICES["X"]).max() <= 1e-9
    elapsed = time.perf_counter() - start
    ok = (r3.ok and r5.ok and r5.subsets_checked == 30 and r5.exhaustive
          and max(r3.max_norm, r5.max_norm) <= 1e-9 and is_x and abs(full_norm - 1) <= 1e-9
          and elapsed < 5)
    record(2, "X-rule", ok,
           f"rep-3 {r3.subsets_checked} subsets, rep-5 {r5.subsets_checked} subsets, "
           f"max norm {max(r3.max_norm, r5.max_norm):.1e}, XXXXX -> X with norm {full_norm:.6f}, "
           f"{elapsed:.2f}s")


def test_3_logical_paulis():
    worst, checked = 0.0, 0
    for code in bundled_codes().values():
        layout = CodeblockLayout.single(code)
        for j in range(code.k):
            for phys, letter in ((code.logical_z_physical(j), "Z"), (code.logical_x_physical(j), "X")):
                circ = Circuit.packed(code.n, [Gate(phys.letter(q), (q,)) for q in sorted(phys.support)])
                u_l = logical_action(circ, layout).u_l
                target = dense_matrix(PauliString.single(code.k, j, letter))
                worst = max(worst, np.abs(canonical_phase(u_l) - canonical_phase(target)).max())
                checked += 1
    record(3, "logical Pauli correctness", worst <= 1e-9,
           f"{checked} operators, max deviation {worst:.2e}")


def _spread_check(make, bound_of, trials, seed):
    rng = np.random.default_rng(seed)
    exceptions, worst_ratio = 0, 0.0
    for _ in range(trials):
        layout = random_layout(rng)
        circ = make(layout, rng)
        bound = bound_of(layout, circ)
        for q in range(layout.n_total):
            spread = conjugate_through(circ, PauliString.single(layout.n_total, q, "Z"), layout)
            largest = max(spread.sizes)
            worst_ratio = max(worst_ratio, largest / bound)
            exceptions += largest > bound
    return exceptions, worst_ratio


def test_4_layered_soundness():
    start = time.perf_counter()

    def make(layout, rng):
        h, r = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        circ = random_layered_circuit(layout, h, r, rng)
        assert all(minimal_r(layer, layout) <= r for layer in circ.layers)
        make.shape = (h, r)
        return circ

    def bound(layout, _circ):
        h, r = make.shape
        return layered_bound(layout.c, r, h)

    exceptions, ratio = _spread_check(make, bound, 1000, 4)
    elapsed = time.perf_counter() - start
    record(4, "layered bound soundness", exceptions == 0 and elapsed < 60,
           f"1000 circuits, {exceptions} exceptions, max |delta|/bound {ratio:.2f}, {elapsed:.1f}s")


def test_5_consecutive_soundness():
    start = time.perf_counter()

    def make(layout, rng):
        h, r = int(rng.integers(1, 6)), int(rng.integers(1, 3))
        make.shape = (h, r)
        return random_gate_sequence(layout, h, r, rng)

    def bound(layout, circ):
        h, r = make.shape
        assert per_gate_block_support(circ, layout) <= r
        return consecutive_bound(h, r)

    exceptions, ratio = _spread_check(make, bound, 1000, 5)
    elapsed = time.perf_counter() - start
    record(5, "consecutive bound soundness", exceptions == 0 and elapsed < 60,
           f"1000 sequences, {exceptions} exceptions, max |delta|/bound {ratio:.2f}, {elapsed:.1f}s")


def test_6_exhaustive_rep3():
    start = time.perf_counter()
    layout = CodeblockLayout.single(bundled_codes()["rep3"])
    spec = EnumerationSpec(("X", "Z", "S", "H", "CNOT", "CZ"), 3, 2, dedup=False)
    examined = preserving = forbidden = counterexamples = 0
    for circ in enumerate_circuits(spec, layout):
        examined += 1
        v = theorem_witness(circ, layout)
        if not v.preserves:
            continue
        preserving += 1
        if v.consecutive_bound_value < v.d:
            forbidden += 1
            counterexamples += not all(v.z_algebra_ok)
    elapsed = time.perf_counter() - start
    record(6, "exhaustive rep-3 theorem check", counterexamples == 0 and forbidden > 0
           and elapsed < 600,
           f"{examined} circuits, {preserving} preserving, {forbidden} with h*r < 3, "
           f"{counterexamples} counterexamples, {elapsed:.1f}s")


def test_7_violating_gates():
    z = GATE_MATRICES["Z"]

    def conj(name):
        u = GATE_MATRICES[name]
        return decompose(u @ z @ u.conj().T).as_labels()

    h, sx, ssx = conj("H"), conj("SX"), conj("SSX")
    ok = (h.keys() == {"X"} and abs(h["X"] - 1) <= 1e-9
          and sx.keys() == {"Y"} and abs(sx["Y"] + 1) <= 1e-9
          and not is_z_type(decompose(GATE_MATRICES["SSX"] @ z @ GATE_MATRICES["SSX"].conj().T)))
    shown = ", ".join(f"{k}: {v:+.6f}" for k, v in sorted(ssx.items()))
    record(7, "violating gates", ok,
           f"HZH^dg = {{X: {h.get('X', 0):+.6f}}}, SX Z SX^dg = {{Y: {sx.get('Y', 0):+.6f}}}, "
           f"SSX Z SSX^dg = {{{shown}}} (not z-type)")


def test_8_biased_arithmetic():
    balanced = [
        biased_bound_ok(d, d, mode, c, r, h)
        for d in range(1, 16) for c in range(1, 4) for r in range(1, 4) for h in range(1, 5)
        for mode in ("layered", "consecutive")
    ]
    example = biased_bound_ok(1, 5, "consecutive", r=1, h=2)
    record(8, "biased-noise arithmetic", not any(balanced) and example is True,
           f"{len(balanced)} balanced shapes all false, (1, 5, consecutive, h=2, r=1) -> {example}")


def test_9_composition_closure():
    rng = np.random.default_rng(9)
    failures = 0
    for _ in range(200):
        k = int(rng.integers(1, 4))
        a, b = random_monomial_action(k, rng), random_monomial_action(k, rng)
        assert all(z_algebra_conjugation_check(a)) and all(z_algebra_conjugation_check(b))
        failures += not all(z_algebra_conjugation_check(a.compose(b)))
    named = [LogicalAction(GATE_MATRICES[g]) for g in ("CNOT", "CZ", "SWAP")]
    probe = composition_closure_probe(named, trials=200, seed=9)
    record(9, "composition closure", failures == 0 and probe,
           f"200 random pairs, {failures} failures; named two-qubit probe {probe}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
