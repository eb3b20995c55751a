"""Classical stabilizer codes with Z-type stabilizers and their canonical isometry."""

from __future__ import annotations

import functools
import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from cscgates import f2linalg
from cscgates.errors import DimensionMismatch, IndexOutOfRange, NotZType, TooLarge
from cscgates.f2linalg import BitVector, F2Matrix
from cscgates.pauli import DEFAULT_TOL, PauliString, dense_matrix

MAX_DENSE_QUBITS = 14


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """An ``[n, k, d]`` code whose stabilizers are products of Pauli Z.

    ``g`` is kept in the caller's qubit labels. ``perm`` maps standard-form
    columns back to those labels: logical qubit ``j`` is read off physical
    qubit ``perm[j]``.
    """

    n: int
    k: int
    d: int
    stabilizers: tuple[PauliString, ...]
    h: F2Matrix
    h_std: F2Matrix
    p: F2Matrix
    g: F2Matrix
    perm: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    @classmethod
    def from_stabilizers(
        cls,
        strings: Sequence[str | PauliString],
        n: int | None = None,
        labels: Sequence[str] | None = None,
    ) -> StabilizerCode:
        paulis = [s if isinstance(s, PauliString) else PauliString.from_label(s) for s in strings]
        if not paulis and n is None:
            raise ValueError("n is required when no stabilizers are given")
        if n is None:
            n = paulis[0].n
        for s in paulis:
            if s.n != n:
                raise DimensionMismatch(f"stabilizer {s.label} does not act on {n} qubits")
            if not s.is_z_type or s.sign_phase != 0:
                raise NotZType(f"stabilizer {s.label} is not a +1-signed product of Z")
        if labels is not None and len(labels) != n:
            raise DimensionMismatch(f"{len(labels)} qubit labels for {n} qubits")
        h = F2Matrix(tuple(s.z for s in paulis), n)
        return cls._from_parity(h, tuple(paulis), labels)

    @classmethod
    def from_parity(cls, h: F2Matrix | Sequence[Sequence[int]]) -> StabilizerCode:
        if not isinstance(h, F2Matrix):
            h = F2Matrix.from_array(np.asarray(h))
        stabilizers = tuple(PauliString(h.ncols, 0, r) for r in h.rows)
        return cls._from_parity(h, stabilizers, None)

    @classmethod
    def trivial(cls, n: int) -> StabilizerCode:
        """The unencoded ``[n, n, 1]`` code."""
        return cls.from_stabilizers([], n=n)

    @classmethod
    def repetition(cls, n: int) -> StabilizerCode:
        checks = ["I" * i + "ZZ" + "I" * (n - i - 2) for i in range(n - 1)]
        return cls.from_stabilizers(checks, n=n)

    @classmethod
    def _from_parity(cls, h, stabilizers, labels) -> StabilizerCode:
        n = h.ncols
        k = n - h.nrows
        if h.nrows:
            h_std, perm, p = f2linalg.standard_form(h)
            g, _ = f2linalg.generator_from_parity(h)
        else:
            h_std, perm, p = h, tuple(range(n)), F2Matrix.zeros(k, 0)
            g = F2Matrix.identity(n)
        if k == 0:
            raise ValueError("code encodes no logical qubit")
        d = f2linalg.min_distance(g)
        return cls(
            n=n, k=k, d=d, stabilizers=stabilizers, h=h, h_std=h_std, p=p, g=g, perm=perm,
            labels=tuple(labels) if labels is not None else None,
        )

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.n, self.k, self.d)

    @property
    def logical_qubits(self) -> tuple[int, ...]:
        """Physical qubits that carry the logical bits unencoded."""
        return self.perm[: self.k]

    def encode(self, eps: BitVector | Sequence[int]) -> BitVector:
        return f2linalg.encode_word(self.g, eps)

    @functools.cached_property
    def codeword_indices(self) -> np.ndarray:
        """Basis index of ``|G_eps>`` for every ``eps`` in lexicographic order."""
        # eps_1 is the most significant message bit, so it must be doubled last
        index = np.zeros(1, dtype=np.int64)
        for row in reversed(self.g.rows):
            index = np.concatenate([index, index ^ row])
        return index

    def codeword_index(self, eps: BitVector | Sequence[int]) -> int:
        return self.encode(eps).value

    def isometry_matrix(self, basis_change: np.ndarray | None = None) -> np.ndarray:
        """Canonical isometry ``S``, or ``S W^dagger`` for a logical basis change ``W``."""
        s = self._canonical_isometry
        if basis_change is None:
            return s.copy()
        w = np.asarray(basis_change, dtype=complex)
        if w.shape != (1 << self.k, 1 << self.k):
            raise DimensionMismatch(f"basis change must be {1 << self.k} square")
        return s @ w.conj().T

    @functools.cached_property
    def _canonical_isometry(self) -> np.ndarray:
        if self.n > MAX_DENSE_QUBITS:
            raise TooLarge(f"dense isometry on {self.n} > {MAX_DENSE_QUBITS} qubits", "n")
        s = np.zeros((1 << self.n, 1 << self.k), dtype=complex)
        s[self.codeword_indices, np.arange(1 << self.k)] = 1.0
        return s

    def projector(self) -> np.ndarray:
        s = self._canonical_isometry
        return s @ s.conj().T

    def _check_logical(self, j: int) -> None:
        if not 0 <= j < self.k:
            raise IndexOutOfRange(f"logical index {j} not in [0, {self.k})")

    def logical_z_physical(self, j: int) -> PauliString:
        """Weight-one Z implementing logical Z on qubit ``j``."""
        self._check_logical(j)
        return PauliString.single(self.n, self.perm[j], "Z")

    def logical_x_physical(self, j: int) -> PauliString:
        """X on the support of generator row ``j``."""
        self._check_logical(j)
        return PauliString(self.n, self.g.rows[j], 0)

    def physical_z_logical(self, i: int) -> frozenset[int]:
        """Logical qubits whose Z is implemented by a physical Z on qubit ``i``."""
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"physical index {i} not in [0, {self.n})")
        return frozenset(j for j in range(self.k) if self.g.row(j)[i])

    def summary(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "stabilizers": [s.label for s in self.stabilizers],
            "h": self.h.to_lists(),
            "h_std": self.h_std.to_lists(),
            "p": self.p.to_lists(),
            "g": self.g.to_lists(),
            "perm": list(self.perm),
            "logical_z": [self.logical_z_physical(j).label for j in range(self.k)],
            "logical_x": [self.logical_x_physical(j).label for j in range(self.k)],
        }


@dataclass
class CodeReport:
    ok: bool
    max_isometry_defect: float = 0.0
    max_stabilizer_defect: float = 0.0
    brute_force_distance: int | None = None
    violations: list[str] = field(default_factory=list)


def brute_force_distance(g: F2Matrix) -> int:
    """Naive enumeration over messages, independent of the packed kernel."""
    arr = g.to_array().astype(int)
    best = None
    for eps in itertools.product((0, 1), repeat=arr.shape[0]):
        if not any(eps):
            continue
        weight = int((np.asarray(eps) @ arr % 2).sum())
        best = weight if best is None else min(best, weight)
    return best


def verify_code(
    code: StabilizerCode, isometry: np.ndarray | None = None, tol: float = DEFAULT_TOL
) -> CodeReport:
    """Check orthonormality, stabilizer eigenvalues and the distance of ``code``.

    ``isometry`` overrides the canonical one, which lets callers feed a
    deliberately corrupted encoding.
    """
    s = code.isometry_matrix() if isometry is None else np.asarray(isometry, dtype=complex)
    report = CodeReport(ok=True)
    gram = s.conj().T @ s
    report.max_isometry_defect = float(np.abs(gram - np.eye(gram.shape[0])).max(initial=0.0))
    if report.max_isometry_defect > tol:
        report.violations.append(f"columns not orthonormal (defect {report.max_isometry_defect:.3g})")
    for stab in code.stabilizers:
        defect = float(np.abs(dense_matrix(stab) @ s - s).max(initial=0.0))
        report.max_stabilizer_defect = max(report.max_stabilizer_defect, defect)
        if defect > tol:
            report.violations.append(f"codewords not +1 eigenvectors of {stab.label}")
    report.brute_force_distance = brute_force_distance(code.g)
    if report.brute_force_distance != code.d:
        report.violations.append(
            f"distance {code.d} disagrees with brute force {report.brute_force_distance}"
        )
    report.ok = not report.violations
    return report
