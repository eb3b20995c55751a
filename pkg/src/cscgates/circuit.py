"""Circuits, codeblock layouts, r-transversality and Pauli support spreading."""

from __future__ import annotations

import functools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from cscgates.code import StabilizerCode
from cscgates.errors import (
    DimensionMismatch,
    LightConeTooLarge,
    NonUnitaryGate,
    OverlappingSupports,
    TooLarge,
)
from cscgates.pauli import (
    DEFAULT_TOL,
    SINGLE_QUBIT_PAULIS,
    DenseOperator,
    PauliString,
    PauliSum,
    decompose,
)

MAX_LIGHT_CONE = 12
MAX_UNITARY_QUBITS = 12


def _controlled(u: np.ndarray, controls: int) -> np.ndarray:
    dim = u.shape[0] << controls
    out = np.eye(dim, dtype=complex)
    out[-u.shape[0]:, -u.shape[0]:] = u
    return out


def _rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


# SX = e^{i pi/4} RX(pi/2) squares to X and sends Z to -Y; SSX is its principal square root.
GATE_MATRICES: dict[str, np.ndarray] = {
    "I": SINGLE_QUBIT_PAULIS["I"],
    "X": SINGLE_QUBIT_PAULIS["X"],
    "Y": SINGLE_QUBIT_PAULIS["Y"],
    "Z": SINGLE_QUBIT_PAULIS["Z"],
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    "SX": np.exp(1j * np.pi / 4) * _rx(np.pi / 2),
    "SSX": np.exp(1j * np.pi / 8) * _rx(np.pi / 4),
    "CNOT": _controlled(SINGLE_QUBIT_PAULIS["X"], 1),
    "CZ": _controlled(SINGLE_QUBIT_PAULIS["Z"], 1),
    "SWAP": np.eye(4, dtype=complex)[[0, 2, 1, 3]],
    "CCZ": _controlled(SINGLE_QUBIT_PAULIS["Z"], 2),
    "TOFFOLI": _controlled(SINGLE_QUBIT_PAULIS["X"], 2),
}
GATE_ARITY = {name: m.shape[0].bit_length() - 1 for name, m in GATE_MATRICES.items()}


@dataclass(frozen=True, eq=False)
class Gate:
    """A named gate or explicit unitary on an ordered list of physical qubits."""

    kind: str
    qubits: tuple[int, ...]
    matrix: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in gate support {self.qubits}")
        if self.matrix is None:
            if self.kind not in GATE_MATRICES:
                raise ValueError(f"unknown gate {self.kind!r}")
            expected = GATE_ARITY[self.kind]
        else:
            m = np.asarray(self.matrix, dtype=complex)
            object.__setattr__(self, "matrix", m)
            expected = m.shape[0].bit_length() - 1
            if m.shape != (1 << expected, 1 << expected):
                raise DimensionMismatch(f"gate matrix shape {m.shape} is not 2^m square")
            if np.abs(m @ m.conj().T - np.eye(m.shape[0])).max() > 1e-9:
                raise NonUnitaryGate(f"matrix for {self.kind!r} is not unitary")
        if len(self.qubits) != expected:
            raise DimensionMismatch(
                f"{self.kind} acts on {expected} qubits, support has {len(self.qubits)}"
            )

    @property
    def unitary(self) -> np.ndarray:
        return GATE_MATRICES[self.kind] if self.matrix is None else self.matrix

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.qubits)

    def inverse(self) -> Gate:
        if self.matrix is None and self.kind in ("I", "X", "Y", "Z", "H", "CNOT", "CZ", "SWAP",
                                                 "CCZ", "TOFFOLI"):
            return self
        return Gate(self.kind + "^dg", self.qubits, self.unitary.conj().T)

    def __repr__(self) -> str:
        return f"Gate({self.kind!r}, {self.qubits})"


@dataclass(frozen=True, eq=False)
class Circuit:
    """Gates grouped in layers; layers act left to right, gates in a layer are disjoint."""

    n_total: int
    layers: tuple[tuple[Gate, ...], ...] = ()

    def __post_init__(self):
        layers = tuple(tuple(layer) for layer in self.layers)
        object.__setattr__(self, "layers", layers)
        for idx, layer in enumerate(layers):
            _check_disjoint(layer, f"layer {idx}")
            for gate in layer:
                if any(not 0 <= q < self.n_total for q in gate.qubits):
                    raise ValueError(f"{gate!r} exceeds {self.n_total} qubits")

    @classmethod
    def sequential(cls, n_total: int, gates: Iterable[Gate]) -> Circuit:
        """One gate per layer."""
        return cls(n_total, tuple((g,) for g in gates))

    @classmethod
    def packed(cls, n_total: int, gates: Iterable[Gate]) -> Circuit:
        """Greedily append each gate to the last layer when supports stay disjoint."""
        layers: list[list[Gate]] = []
        used: set[int] = set()
        for g in gates:
            if layers and used.isdisjoint(g.qubits):
                layers[-1].append(g)
            else:
                layers.append([g])
                used = set()
            used.update(g.qubits)
        return cls(n_total, tuple(tuple(layer) for layer in layers))

    @property
    def gates(self) -> tuple[Gate, ...]:
        return tuple(g for layer in self.layers for g in layer)

    @property
    def layer_bounds(self) -> tuple[int, ...]:
        bounds, total = [0], 0
        for layer in self.layers:
            total += len(layer)
            bounds.append(total)
        return tuple(bounds)

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    @property
    def num_gates(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def inverse(self) -> Circuit:
        return Circuit(
            self.n_total,
            tuple(tuple(g.inverse() for g in reversed(layer)) for layer in reversed(self.layers)),
        )

    def then(self, other: Circuit) -> Circuit:
        if other.n_total != self.n_total:
            raise DimensionMismatch("circuits act on different qubit counts")
        return Circuit(self.n_total, self.layers + other.layers)

    def unitary(self, max_qubits: int = MAX_UNITARY_QUBITS) -> np.ndarray:
        """Dense ``2^n`` unitary with qubit 0 as the most significant bit."""
        n = self.n_total
        if n > max_qubits:
            raise TooLarge(f"dense unitary on {n} > {max_qubits} qubits", "n_total")
        t = np.eye(1 << n, dtype=complex).reshape((2,) * (2 * n))
        for gate in self.gates:
            t = _apply(t, gate.unitary, [q for q in gate.qubits])
        return t.reshape(1 << n, 1 << n)


def _check_disjoint(gates: Sequence[Gate], where: str = "layer") -> None:
    seen: set[int] = set()
    for g in gates:
        if not seen.isdisjoint(g.qubits):
            raise OverlappingSupports(f"{where}: {g!r} overlaps an earlier gate")
        seen.update(g.qubits)


def _apply(t: np.ndarray, u: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Contract a gate into the given tensor axes (left multiplication)."""
    a = len(axes)
    g = u.reshape((2,) * (2 * a))
    out = np.tensordot(g, t, axes=(list(range(a, 2 * a)), list(axes)))
    return np.moveaxis(out, list(range(a)), list(axes))


@dataclass(frozen=True)
class Block:
    code: StabilizerCode
    qubits: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CodeblockLayout:
    """Assignment of physical qubits to codeblocks; blocks cover ``range(n_total)``."""

    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(
            b if isinstance(b, Block) else Block(b[0], tuple(b[1])) for b in self.blocks
        )
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValueError("layout needs at least one block")
        owner: dict[int, int] = {}
        for m, b in enumerate(blocks):
            if len(b.qubits) != b.code.n:
                raise DimensionMismatch(f"block {m} lists {len(b.qubits)} qubits for n={b.code.n}")
            for q in b.qubits:
                if q in owner:
                    raise OverlappingSupports(f"qubit {q} in blocks {owner[q]} and {m}")
                owner[q] = m
        if sorted(owner) != list(range(len(owner))):
            raise ValueError("blocks must cover qubits 0..n_total-1 exactly")
        object.__setattr__(self, "_owner", owner)

    @classmethod
    def contiguous(cls, codes: Sequence[StabilizerCode]) -> CodeblockLayout:
        blocks, start = [], 0
        for code in codes:
            blocks.append(Block(code, tuple(range(start, start + code.n))))
            start += code.n
        return cls(tuple(blocks))

    @classmethod
    def single(cls, code: StabilizerCode) -> CodeblockLayout:
        return cls.contiguous([code])

    @property
    def c(self) -> int:
        return len(self.blocks)

    @property
    def n_total(self) -> int:
        return sum(b.code.n for b in self.blocks)

    @property
    def k_total(self) -> int:
        return sum(b.code.k for b in self.blocks)

    @property
    def d(self) -> int:
        return min(b.code.d for b in self.blocks)

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.n_total, self.k_total, self.d)

    def block_of(self, qubit: int) -> int:
        return self._owner[qubit]

    def split(self, qubits: Iterable[int]) -> tuple[frozenset[int], ...]:
        per = [set() for _ in self.blocks]
        for q in qubits:
            per[self._owner[q]].add(q)
        return tuple(frozenset(s) for s in per)

    @functools.cached_property
    def codeword_indices(self) -> np.ndarray:
        """Physical basis index of each total logical basis state.

        Logical qubits are ordered block by block, each block in its own
        logical order.
        """
        n = self.n_total
        index = np.zeros(1, dtype=np.int64)
        for b in self.blocks:
            local = b.code.codeword_indices
            placed = np.zeros_like(local)
            for pos, q in enumerate(b.qubits):
                bit = (local >> (b.code.n - 1 - pos)) & 1
                placed |= bit << (n - 1 - q)
            index = (index[:, None] | placed[None, :]).reshape(-1)
        return index

    def isometry_matrix(self) -> np.ndarray:
        n, k = self.n_total, self.k_total
        if n > MAX_UNITARY_QUBITS:
            raise TooLarge(f"dense layout isometry on {n} > {MAX_UNITARY_QUBITS} qubits", "n_total")
        s = np.zeros((1 << n, 1 << k), dtype=complex)
        s[self.codeword_indices, np.arange(1 << k)] = 1.0
        return s

    def logical_z_physical(self, j: int) -> PauliString:
        """Physical weight-one Z implementing logical Z on total logical qubit ``j``."""
        for b in self.blocks:
            if j < b.code.k:
                return PauliString.single(self.n_total, b.qubits[b.code.perm[j]], "Z")
            j -= b.code.k
        raise IndexError("logical index out of range")


def minimal_r(layer: Sequence[Gate], layout: CodeblockLayout) -> int:
    """Smallest r for which the per-gate partition of ``layer`` is r-transversal."""
    _check_disjoint(layer)
    best = 1
    for gate in layer:
        best = max(best, max(len(s) for s in layout.split(gate.qubits)))
    return best


def is_r_transversal_layer(layer: Sequence[Gate], layout: CodeblockLayout, r: int) -> bool:
    return minimal_r(layer, layout) <= r


def per_gate_block_support(circ: Circuit, layout: CodeblockLayout) -> int:
    """Largest number of qubits any single gate touches within one block."""
    best = 1
    for gate in circ.gates:
        best = max(best, max(len(s) for s in layout.split(gate.qubits)))
    return best


@dataclass
class SpreadResult:
    support: frozenset[int]
    operator: DenseOperator
    blocks: tuple[frozenset[int], ...] = ()
    tol: float = DEFAULT_TOL

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @functools.cached_property
    def pauli_sum(self) -> PauliSum:
        return decompose(self.operator, tol=self.tol)


class _LightCone:
    """Dense operator on a growing ordered set of qubits."""

    def __init__(self, pauli: PauliString):
        self.qubits: list[int] = sorted(pauli.support)
        m = len(self.qubits)
        local = PauliString.from_label("".join(pauli.letter(q) for q in self.qubits) or "I")
        mat = local.to_matrix() if m else np.ones((1, 1), dtype=complex)
        mat = mat * (1j ** pauli.sign_phase)
        self.tensor = mat.reshape((2,) * (2 * m))

    @property
    def m(self) -> int:
        return len(self.qubits)

    def enlarge(self, extra: Sequence[int]) -> None:
        for q in extra:
            # tensor with identity on the new qubit, appended as the last row/col axes
            m = self.m
            t = np.multiply.outer(self.tensor, np.eye(2, dtype=complex))
            order = list(range(m)) + [2 * m] + list(range(m, 2 * m)) + [2 * m + 1]
            self.tensor = t.transpose(order)
            self.qubits.append(q)

    def conjugate(self, u: np.ndarray, qubits: Sequence[int]) -> None:
        pos = [self.qubits.index(q) for q in qubits]
        m = self.m
        t = _apply(self.tensor, u, pos)
        self.tensor = _apply(t, u.conj(), [m + p for p in pos])

    def prune(self, candidates: Iterable[int], tol: float) -> None:
        for q in list(candidates):
            i = self.qubits.index(q)
            m = self.m
            t = np.moveaxis(self.tensor, (i, m + i), (0, 1))
            if (
                np.abs(t[0, 1]).max(initial=0.0) <= tol
                and np.abs(t[1, 0]).max(initial=0.0) <= tol
                and np.abs(t[0, 0] - t[1, 1]).max(initial=0.0) <= tol
            ):
                self.tensor = (t[0, 0] + t[1, 1]) / 2
                self.qubits.pop(i)

    def operator(self) -> DenseOperator:
        dim = 1 << self.m
        return DenseOperator(self.tensor.reshape(dim, dim), tuple(self.qubits))


def conjugate_through(
    circ: Circuit,
    p: PauliString,
    layout: CodeblockLayout | None = None,
    tol: float = DEFAULT_TOL,
    max_support: int = MAX_LIGHT_CONE,
) -> SpreadResult:
    """Heisenberg-evolve ``p`` to ``U p U^dagger`` and report its support per block.

    Only gates meeting the current support are applied; after each one, qubits
    on which the operator has become the identity are dropped.
    """
    if p.n != circ.n_total:
        raise DimensionMismatch(f"Pauli on {p.n} qubits, circuit on {circ.n_total}")
    cone = _LightCone(p)
    for gate in circ.gates:
        touched = set(gate.qubits)
        if touched.isdisjoint(cone.qubits):
            continue
        extra = [q for q in gate.qubits if q not in cone.qubits]
        if cone.m + len(extra) > max_support:
            raise LightConeTooLarge(
                f"light cone would reach {cone.m + len(extra)} > {max_support} qubits",
                "light_cone",
            )
        cone.enlarge(extra)
        cone.conjugate(gate.unitary, gate.qubits)
        cone.prune(gate.qubits, tol)
    support = frozenset(cone.qubits)
    blocks = layout.split(support) if layout is not None else ()
    return SpreadResult(support, cone.operator(), blocks, tol)


def layered_bound(c: int, r: int, h: int) -> int:
    """Support bound ``c^(h-1) r^h`` after h layers of r-transversal operations."""
    if min(c, r, h) < 1:
        raise ValueError("c, r and h must be >= 1")
    return c ** (h - 1) * r**h


def consecutive_bound(h: int, r: int) -> int:
    """Support bound ``h r`` after h gates of per-block support at most r."""
    if min(h, r) < 1:
        raise ValueError("h and r must be >= 1")
    return h * r


def biased_bound_ok(
    d_z: int,
    d_x: int,
    mode: Literal["layered", "consecutive"],
    c: int = 1,
    r: int = 1,
    h: int = 1,
) -> bool:
    """Whether a circuit shape stays in the forbidden regime of a biased-noise code."""
    if min(d_z, d_x, c, r, h) < 1:
        raise ValueError("all arguments must be >= 1")
    if mode == "layered":
        return d_z * layered_bound(c, r, h) < d_x
    if mode == "consecutive":
        return (d_z - 1) + consecutive_bound(h, r) < d_x
    raise ValueError(f"unknown mode {mode!r}")
