"""Logical actions of physical circuits and the Z-algebra no-go predicate."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from cscgates.circuit import (
    GATE_MATRICES,
    Circuit,
    CodeblockLayout,
    _apply,
    consecutive_bound,
    layered_bound,
    minimal_r,
    per_gate_block_support,
)
from cscgates.code import StabilizerCode
from cscgates.errors import DimensionMismatch, NotPreserving, TooLarge
from cscgates.pauli import DEFAULT_TOL, Z2, decompose, is_z_type, pauli_coefficients

MAX_DENSE_QUBITS = 12
MAX_XRULE_EXHAUSTIVE_N = 10


@dataclass
class LogicalAction:
    u_l: np.ndarray
    residual: float = 0.0
    unitary_defect: float = 0.0

    @property
    def k(self) -> int:
        return self.u_l.shape[0].bit_length() - 1

    def compose(self, other: LogicalAction) -> LogicalAction:
        """``self`` applied after ``other``."""
        u = self.u_l @ other.u_l
        return LogicalAction(u, max(self.residual, other.residual), _unitary_defect(u))


def _unitary_defect(u: np.ndarray) -> float:
    return float(np.abs(u @ u.conj().T - np.eye(u.shape[0])).max(initial=0.0))


def canonical_phase(u: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rescale so the first entry of magnitude above ``tol`` is real positive."""
    flat = u.reshape(-1)
    nz = np.flatnonzero(np.abs(flat) > tol)
    if nz.size == 0:
        return u.copy()
    z = flat[nz[0]]
    return u * (abs(z) / z)


def fingerprint(u: np.ndarray, decimals: int = 6) -> str:
    """Hashable key of a matrix up to global phase."""
    v = np.round(canonical_phase(u), decimals) + 0.0  # + 0.0 folds -0.0 into 0.0
    data = np.concatenate([v.real.reshape(-1), v.imag.reshape(-1)])
    data = np.round(data, decimals) + 0.0
    return f"{u.shape[0]}:" + data.tobytes().hex()


def _check_layouts(circ: Circuit, src: CodeblockLayout, dst: CodeblockLayout) -> None:
    if not src.n_total == dst.n_total == circ.n_total:
        raise DimensionMismatch("circuit and layouts act on different qubit counts")
    if circ.n_total > MAX_DENSE_QUBITS:
        raise TooLarge(f"{circ.n_total} > {MAX_DENSE_QUBITS} physical qubits", "n_total")


def preservation_residual(u: np.ndarray, src: CodeblockLayout, dst: CodeblockLayout) -> float:
    """Largest singular value of ``(1 - S_dst S_dst^dagger) U S_src``."""
    us = u[:, src.codeword_indices]
    outside = np.ones(u.shape[0], dtype=bool)
    outside[dst.codeword_indices] = False
    leak = us[outside]
    if leak.size == 0:
        return 0.0
    return float(np.linalg.norm(leak, 2))


def preserves_codespace(
    circ: Circuit,
    src: CodeblockLayout,
    dst: CodeblockLayout | None = None,
    tol: float = DEFAULT_TOL,
) -> tuple[bool, float]:
    dst = src if dst is None else dst
    _check_layouts(circ, src, dst)
    residual = preservation_residual(circ.unitary(), src, dst)
    return residual <= tol, residual


def logical_action_of_unitary(
    u: np.ndarray, src: CodeblockLayout, dst: CodeblockLayout | None = None,
    tol: float = DEFAULT_TOL,
) -> LogicalAction:
    dst = src if dst is None else dst
    if src.k_total != dst.k_total:
        raise DimensionMismatch("source and target codes encode different logical counts")
    residual = preservation_residual(u, src, dst)
    if residual > tol:
        raise NotPreserving(f"codespace leakage {residual:.3g} exceeds {tol:g}")
    u_l = u[np.ix_(dst.codeword_indices, src.codeword_indices)]
    return LogicalAction(u_l, residual, _unitary_defect(u_l))


def logical_action(
    circ: Circuit,
    src: CodeblockLayout,
    dst: CodeblockLayout | None = None,
    tol: float = DEFAULT_TOL,
) -> LogicalAction:
    """``S_dst^dagger U S_src`` for a codespace-preserving circuit."""
    dst = src if dst is None else dst
    _check_layouts(circ, src, dst)
    return logical_action_of_unitary(circ.unitary(), src, dst, tol)


def logical_z(k: int, j: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for q in range(k):
        out = np.kron(out, Z2 if q == j else np.eye(2))
    return out


def z_algebra_conjugation_check(act: LogicalAction, tol: float = DEFAULT_TOL) -> tuple[bool, ...]:
    """For each logical qubit, is ``U_L Z_j U_L^dagger`` a real combination of Z products?"""
    u = act.u_l
    flags = []
    for j in range(act.k):
        conj = u @ logical_z(act.k, j) @ u.conj().T
        flags.append(is_z_type(decompose(conj, tol=tol), tol))
    return tuple(flags)


def z_span_check(act: LogicalAction, tol: float = DEFAULT_TOL) -> bool:
    """Is ``U_L`` itself in the span of logical Z products and the identity?"""
    u = act.u_l
    hermitian = (u + u.conj().T) / 2
    anti = (u - u.conj().T) / 2j
    return is_z_type(decompose(hermitian, tol=tol), tol) and is_z_type(decompose(anti, tol=tol), tol)


def identify_logical(u_l: np.ndarray, tol: float = 1e-7) -> str | None:
    """Name a logical action if it is a Pauli word or a named gate, up to phase."""
    k = u_l.shape[0].bit_length() - 1
    coeffs = pauli_coefficients(u_l)
    big = np.argwhere(np.abs(coeffs) > tol)
    if len(big) == 1 and abs(abs(coeffs[tuple(big[0])]) - 1) <= tol:
        return "".join("IXYZ"[a] for a in big[0])
    target = canonical_phase(u_l, tol)
    for name, m in _NAMED.items():
        arity = m.shape[0].bit_length() - 1
        if arity > k:
            continue
        for qubits in itertools.permutations(range(k), arity):
            full = _embed(m, qubits, k)
            if np.abs(canonical_phase(full, tol) - target).max() <= tol:
                return f"{name}{list(qubits)}" if k > 1 else name
    return None


_NAMED = dict(GATE_MATRICES)
_NAMED.update({
    name + "DG": GATE_MATRICES[name].conj().T for name in ("S", "T", "SX", "SSX")
})


def _embed(m: np.ndarray, qubits, k: int) -> np.ndarray:
    t = np.eye(1 << k, dtype=complex).reshape((2,) * (2 * k))
    return _apply(t, m, list(qubits)).reshape(1 << k, 1 << k)


@dataclass
class XRuleReport:
    code_params: tuple[int, int, int]
    exhaustive: bool
    subsets_checked: int
    max_norm: float
    violations: list[tuple[int, ...]] = field(default_factory=list)
    tol: float = DEFAULT_TOL

    @property
    def ok(self) -> bool:
        return not self.violations


def x_string_logical(s: np.ndarray, n: int, qubits) -> np.ndarray:
    """``S^dagger X_I S`` computed from a dense isometry by row permutation."""
    mask = 0
    for q in qubits:
        mask |= 1 << (n - 1 - q)
    rows = np.arange(1 << n) ^ mask
    return s.conj().T @ s[rows]


def x_rule_check(
    code: StabilizerCode,
    tol: float = DEFAULT_TOL,
    basis_change: np.ndarray | None = None,
    max_exhaustive_n: int = MAX_XRULE_EXHAUSTIVE_N,
    samples: int = 2000,
    seed: int = 0,
) -> XRuleReport:
    """Every X string of weight below ``d`` must have zero logical action.

    Subsets are enumerated exhaustively for ``n <= max_exhaustive_n``; larger
    codes fall back to ``samples`` random subsets.
    """
    s = code.isometry_matrix(basis_change)
    n, d = code.n, code.d
    exhaustive = n <= max_exhaustive_n
    if exhaustive:
        subsets = (
            c for w in range(1, d) for c in itertools.combinations(range(n), w)
        )
    else:
        rng = random.Random(seed)
        subsets = (
            tuple(sorted(rng.sample(range(n), rng.randint(1, d - 1)))) for _ in range(samples)
        ) if d > 1 else iter(())
    report = XRuleReport(code.params, exhaustive, 0, 0.0, tol=tol)
    for subset in subsets:
        norm = float(np.linalg.norm(x_string_logical(s, n, subset), 2))
        report.subsets_checked += 1
        report.max_norm = max(report.max_norm, norm)
        if norm > tol:
            report.violations.append(subset)
    return report


@dataclass
class TheoremVerdict:
    preserves: bool
    residual: float
    z_algebra_ok: tuple[bool, ...]
    z_span_ok: bool | None
    h_layers: int
    h_gates: int
    r_layered: int
    r_consecutive: int
    c: int
    layered_bound_value: int
    consecutive_bound_value: int
    d: int
    consistent: bool
    span_consistent: bool
    logical_label: str | None = None
    logical_fingerprint: str | None = None
    tol: float = DEFAULT_TOL

    @property
    def violates_z_algebra(self) -> bool:
        return self.preserves and not all(self.z_algebra_ok)

    @property
    def in_forbidden_regime(self) -> bool:
        return self.layered_bound_value < self.d or self.consecutive_bound_value < self.d

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["z_algebra_ok"] = list(self.z_algebra_ok)
        return out


def theorem_witness(
    circ: Circuit,
    layout: CodeblockLayout,
    dst: CodeblockLayout | None = None,
    tol: float = DEFAULT_TOL,
    unitary: np.ndarray | None = None,
) -> TheoremVerdict:
    """Assemble circuit shape, bounds and the Z-algebra status of its logical action.

    An empty circuit is read as one identity layer, so ``h`` and ``r`` are at
    least 1. For maps between two layouts the shape is measured against both
    and the target distance is used.
    """
    dst = layout if dst is None else dst
    _check_layouts(circ, layout, dst)
    u = circ.unitary() if unitary is None else unitary
    residual = preservation_residual(u, layout, dst)
    preserves = residual <= tol

    h_layers = max(circ.num_layers, 1)
    h_gates = max(circ.num_gates, 1)
    r_layered = max(
        [max(minimal_r(layer, layout), minimal_r(layer, dst)) for layer in circ.layers],
        default=1,
    )
    r_consecutive = max(per_gate_block_support(circ, layout), per_gate_block_support(circ, dst))
    c = max(layout.c, dst.c)
    d = dst.d
    lb = layered_bound(c, r_layered, h_layers)
    cb = consecutive_bound(h_gates, r_consecutive)

    z_ok: tuple[bool, ...] = ()
    span_ok = None
    label = fp = None
    if preserves:
        act = logical_action_of_unitary(u, layout, dst, tol)
        z_ok = z_algebra_conjugation_check(act, tol)
        span_ok = z_span_check(act, tol)
        label = identify_logical(act.u_l)
        fp = fingerprint(act.u_l)
    violates = preserves and not all(z_ok)
    consistent = not (violates and (lb < d or cb < d))
    span_consistent = not (preserves and span_ok is False and cb < d)
    return TheoremVerdict(
        preserves=preserves, residual=residual, z_algebra_ok=z_ok, z_span_ok=span_ok,
        h_layers=h_layers, h_gates=h_gates, r_layered=r_layered, r_consecutive=r_consecutive,
        c=c, layered_bound_value=lb, consecutive_bound_value=cb, d=d,
        consistent=consistent, span_consistent=span_consistent,
        logical_label=label, logical_fingerprint=fp, tol=tol,
    )
