"""Exhaustive search for circuits contradicting the low-complexity no-go bound."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from cscgates.circuit import GATE_ARITY, Circuit, CodeblockLayout, Gate
from cscgates.errors import BudgetExceeded, CounterexampleFound, PreconditionFailed
from cscgates.logical import (
    LogicalAction,
    TheoremVerdict,
    fingerprint,
    theorem_witness,
    z_algebra_conjugation_check,
)
from cscgates.pauli import DEFAULT_TOL

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class EnumerationSpec:
    """Templated search space: gate set x supports x depth.

    With ``transversal_templates`` each gate kind is also offered as a whole
    transversal layer across equally sized codeblocks (a single move).
    """

    gate_set: tuple[str, ...]
    n_total: int
    max_gates: int
    max_support_per_gate: int = 3
    dedup: bool = True
    transversal_templates: bool = False
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "gate_set", tuple(self.gate_set))
        unknown = [g for g in self.gate_set if g not in GATE_ARITY]
        if unknown:
            raise ValueError(f"unknown gates in gate set: {unknown}")
        if self.max_gates < 0:
            raise ValueError("max_gates must be >= 0")


def _moves(spec: EnumerationSpec, layout: CodeblockLayout | None) -> list[tuple[Gate, ...]]:
    moves: list[tuple[Gate, ...]] = []
    for kind in spec.gate_set:
        arity = GATE_ARITY[kind]
        if arity > spec.max_support_per_gate:
            continue
        for qubits in itertools.permutations(range(spec.n_total), arity):
            moves.append((Gate(kind, qubits),))
    if spec.transversal_templates:
        if layout is None:
            raise ValueError("transversal templates need a codeblock layout")
        sizes = {b.code.n for b in layout.blocks}
        if len(sizes) != 1:
            raise ValueError("transversal templates need equally sized codeblocks")
        size = sizes.pop()
        for kind in spec.gate_set:
            arity = GATE_ARITY[kind]
            for blocks in itertools.permutations(range(layout.c), arity):
                moves.append(tuple(
                    Gate(kind, [layout.blocks[b].qubits[i] for b in blocks]) for i in range(size)
                ))
    return moves


def circuit_count(spec: EnumerationSpec, layout: CodeblockLayout | None = None) -> int:
    """Number of move sequences the search visits before deduplication."""
    if spec.max_gates == 0:
        return 1
    m = len(_moves(spec, layout))
    return sum(m**length for length in range(1, spec.max_gates + 1))


def _check_budget(spec: EnumerationSpec, layout: CodeblockLayout | None) -> None:
    total = circuit_count(spec, layout)
    if total > spec.budget:
        raise BudgetExceeded(f"{total} circuits exceed the budget of {spec.budget}")


def _move_unitaries(moves, n_total: int) -> list[np.ndarray]:
    return [Circuit.packed(n_total, move).unitary() for move in moves]


def _sequences(
    spec: EnumerationSpec,
    layout: CodeblockLayout | None,
    shard: int = 0,
    shards: int = 1,
) -> Iterator[tuple[tuple[int, ...], Circuit, np.ndarray]]:
    """Every move sequence in (length, lexicographic) order with its unitary.

    ``max_gates == 0`` yields only the empty circuit; otherwise lengths run
    from 1 to ``max_gates``. Sharding splits by the first move index.
    """
    moves = _moves(spec, layout)
    n = spec.n_total
    if spec.max_gates == 0:
        if shard == 0:
            yield (), Circuit(n), np.eye(1 << n, dtype=complex)
        return
    unitaries = _move_unitaries(moves, n)
    prefixes: dict[tuple[int, ...], np.ndarray] = {(): np.eye(1 << n, dtype=complex)}
    for _length in range(1, spec.max_gates + 1):
        grown: dict[tuple[int, ...], np.ndarray] = {}
        for prefix, u_prefix in prefixes.items():
            if prefix and prefix[0] % shards != shard:
                continue
            for i, u_move in enumerate(unitaries):
                seq = prefix + (i,)
                if len(seq) == 1 and i % shards != shard:
                    continue
                u = u_move @ u_prefix
                grown[seq] = u
                gates = [g for idx in seq for g in moves[idx]]
                yield seq, Circuit.packed(n, gates), u
        prefixes = grown


def enumerate_circuits(
    spec: EnumerationSpec, layout: CodeblockLayout | None = None
) -> Iterator[Circuit]:
    """Deterministic stream of circuits, deduplicated by unitary up to phase when asked."""
    _check_budget(spec, layout)
    seen: set[str] = set()
    for _seq, circ, u in _sequences(spec, layout):
        if spec.dedup:
            key = fingerprint(u)
            if key in seen:
                continue
            seen.add(key)
        yield circ


@dataclass
class CatalogueEntry:
    """A distinct logical action and the cheapest circuit shapes seen for it."""

    label: str | None
    z_algebra_ok: bool
    z_span_ok: bool | None
    count: int = 0
    min_layered: tuple[int, int, int] | None = None  # (bound, h_layers, r_layered)
    min_consecutive: tuple[int, int, int] | None = None  # (bound, h_gates, r_consecutive)
    example: list[dict] = field(default_factory=list)

    def absorb(self, v: TheoremVerdict, example: list[dict]) -> None:
        self.count += 1
        layered = (v.layered_bound_value, v.h_layers, v.r_layered)
        consecutive = (v.consecutive_bound_value, v.h_gates, v.r_consecutive)
        if self.min_layered is None or layered < self.min_layered:
            self.min_layered = layered
            self.example = example
        if self.min_consecutive is None or consecutive < self.min_consecutive:
            self.min_consecutive = consecutive


@dataclass
class SearchSummary:
    circuits_examined: int = 0
    preserving_count: int = 0
    forbidden_regime_count: int = 0
    z_algebra_violations: int = 0
    z_algebra_violations_below_bound: int = 0
    z_span_violations_below_bound: int = 0
    catalogue: dict[str, CatalogueEntry] = field(default_factory=dict)
    counterexamples: list[list[dict]] = field(default_factory=list)
    tol: float = DEFAULT_TOL

    @property
    def ok(self) -> bool:
        return self.z_algebra_violations_below_bound == 0 and self.z_span_violations_below_bound == 0

    def labels(self) -> dict[str, CatalogueEntry]:
        return {e.label: e for e in self.catalogue.values() if e.label is not None}


def _gate_records(circ: Circuit) -> list[dict]:
    records = []
    for layer_index, layer in enumerate(circ.layers):
        for g in layer:
            records.append({"kind": g.kind, "qubits": list(g.qubits), "layer": layer_index})
    return records


def _search_shard(args):
    spec, layout, dst, tol, shard, shards = args
    found: dict[str, tuple[tuple[int, int], list[dict], TheoremVerdict]] = {}
    for seq, circ, u in _sequences(spec, layout, shard, shards):
        key = fingerprint(u) if spec.dedup else f"seq:{seq}"
        order_key = (len(seq), seq)
        if key in found and found[key][0] <= order_key:
            continue
        verdict = theorem_witness(circ, layout, dst, tol, unitary=u)
        found[key] = (order_key, _gate_records(circ), verdict)
    return found


def brute_force_theorem(
    spec: EnumerationSpec,
    layout: CodeblockLayout,
    dst: CodeblockLayout | None = None,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
    raise_on_counterexample: bool = True,
) -> SearchSummary:
    """Run the theorem predicate on every enumerated circuit and tally the verdicts.

    Shards are merged by keeping, per unitary fingerprint, the circuit that
    comes first in enumeration order, so the summary does not depend on
    ``jobs``.
    """
    if spec.n_total != layout.n_total:
        raise ValueError("spec and layout disagree on the number of qubits")
    _check_budget(spec, layout)
    shards = max(1, jobs)
    tasks = [(spec, layout, dst, tol, s, shards) for s in range(shards)]
    if shards == 1:
        results = [_search_shard(tasks[0])]
    else:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            results = list(pool.map(_search_shard, tasks))
    merged: dict[str, tuple[tuple[int, int], list[dict], TheoremVerdict]] = {}
    for result in results:
        for key, item in result.items():
            if key not in merged or item[0] < merged[key][0]:
                merged[key] = item

    summary = SearchSummary(tol=tol)
    for key in sorted(merged, key=lambda k: merged[k][0]):
        _order, records, v = merged[key]
        summary.circuits_examined += 1
        if not v.preserves:
            continue
        summary.preserving_count += 1
        if v.in_forbidden_regime:
            summary.forbidden_regime_count += 1
        if v.violates_z_algebra:
            summary.z_algebra_violations += 1
        if not v.consistent:
            summary.z_algebra_violations_below_bound += 1
        if not v.span_consistent:
            summary.z_span_violations_below_bound += 1
        if not (v.consistent and v.span_consistent):
            summary.counterexamples.append(records)
        entry = summary.catalogue.setdefault(
            v.logical_fingerprint,
            CatalogueEntry(v.logical_label, all(v.z_algebra_ok), v.z_span_ok),
        )
        entry.absorb(v, records)
    if summary.counterexamples and raise_on_counterexample:
        raise CounterexampleFound(
            f"{len(summary.counterexamples)} circuit(s) contradict the no-go bound",
            circuit=summary.counterexamples[0],
            verdict=summary,
        )
    return summary


def composition_closure_probe(
    actions: Sequence[LogicalAction],
    trials: int = 200,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Compose random pairs of Z-algebra-preserving actions and re-check the property."""
    for i, act in enumerate(actions):
        if not all(z_algebra_conjugation_check(act, tol)):
            raise PreconditionFailed(f"action {i} does not preserve the Z algebra")
    if not actions:
        return True
    rng = random.Random(seed)
    for _ in range(trials):
        a, b = rng.choice(actions), rng.choice(actions)
        if not all(z_algebra_conjugation_check(a.compose(b), tol)):
            return False
    return True


def random_monomial_action(k: int, rng: np.random.Generator) -> LogicalAction:
    """Random permutation-times-phases unitary; these normalize the diagonal Z algebra."""
    dim = 1 << k
    u = np.zeros((dim, dim), dtype=complex)
    u[rng.permutation(dim), np.arange(dim)] = np.exp(2j * np.pi * rng.random(dim))
    return LogicalAction(u)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_r_transversal_layer(
    layout: CodeblockLayout, r: int, rng: np.random.Generator, idle: float = 0.2
) -> list[Gate]:
    """Random partition meeting every block in at most ``r`` qubits, one Haar gate per set."""
    qubits = list(rng.permutation(layout.n_total))
    groups: list[list[int]] = []
    for q in qubits:
        block = layout.block_of(int(q))
        options = [g for g in groups
                   if sum(layout.block_of(x) == block for x in g) < r]
        if options and rng.random() < 0.7:
            options[rng.integers(len(options))].append(int(q))
        else:
            groups.append([int(q)])
    gates = []
    for g in groups:
        if rng.random() < idle:
            continue
        gates.append(Gate("U", tuple(g), haar_unitary(1 << len(g), rng)))
    return gates


def random_layered_circuit(
    layout: CodeblockLayout, h: int, r: int, rng: np.random.Generator
) -> Circuit:
    return Circuit(
        layout.n_total, tuple(tuple(random_r_transversal_layer(layout, r, rng)) for _ in range(h))
    )


def random_gate_sequence(
    layout: CodeblockLayout, h: int, r: int, rng: np.random.Generator
) -> Circuit:
    """``h`` Haar gates, each touching at most ``r`` qubits of every block."""
    gates = []
    for _ in range(h):
        support: list[int] = []
        for b in layout.blocks:
            take = int(rng.integers(0, min(r, len(b.qubits)) + 1))
            support.extend(int(q) for q in rng.choice(b.qubits, size=take, replace=False))
        if not support:
            b = layout.blocks[rng.integers(layout.c)]
            support = [int(rng.choice(b.qubits))]
        rng.shuffle(support)
        gates.append(Gate("U", tuple(support), haar_unitary(1 << len(support), rng)))
    return Circuit.sequential(layout.n_total, gates)
