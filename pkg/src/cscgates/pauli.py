"""Phased Pauli words, real Pauli sums and Pauli-basis decomposition.

A :class:`PauliString` on ``n`` qubits is ``i**phase * X^x Z^z`` with ``x`` and
``z`` packed like :mod:`cscgates.f2linalg` rows (qubit 0 is the most
significant bit). With this convention ``Y = i X Z`` carries one unit of phase
per ``Y`` factor.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from cscgates.errors import DimensionMismatch, NotHermitian, TooLarge

DEFAULT_TOL = 1e-9
MAX_DENSE_QUBITS = 14
MAX_DECOMPOSE_QUBITS = 10

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE_QUBIT_PAULIS = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
_SIGN_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def _qubit_bit(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"x/z bits do not fit on {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse literals such as ``"ZZI"``, ``"-YZI"`` or ``"+iX"``."""
        text = label.strip()
        phase = 0
        for prefix, value in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if text.startswith(prefix):
                phase, text = value, text[len(prefix):]
                break
        text = text.upper()
        if not text or any(ch not in _LETTER_BITS for ch in text):
            raise ValueError(f"invalid Pauli literal: {label!r}")
        n = len(text)
        x = z = 0
        for q, ch in enumerate(text):
            xb, zb = _LETTER_BITS[ch]
            x |= xb * _qubit_bit(n, q)
            z |= zb * _qubit_bit(n, q)
            if ch == "Y":
                phase += 1
        return cls(n, x, z, phase)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        if not 0 <= qubit < n:
            raise IndexError(f"qubit {qubit} out of range for {n} qubits")
        return cls.from_label("".join(letter if q == qubit else "I" for q in range(n)))

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def z_on(cls, n: int, qubits: Iterable[int]) -> PauliString:
        z = 0
        for q in qubits:
            z |= _qubit_bit(n, q)
        return cls(n, 0, z)

    @classmethod
    def x_on(cls, n: int, qubits: Iterable[int]) -> PauliString:
        x = 0
        for q in qubits:
            x |= _qubit_bit(n, q)
        return cls(n, x, 0)

    def letter(self, q: int) -> str:
        b = _qubit_bit(self.n, q)
        return _BITS_LETTER[(int(bool(self.x & b)), int(bool(self.z & b)))]

    @property
    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    @property
    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    @property
    def sign_phase(self) -> int:
        """Exponent of ``i`` in front of the {I,X,Y,Z} letter form."""
        return (self.phase - self.y_count) % 4

    @property
    def label(self) -> str:
        prefix = _SIGN_PREFIX[self.sign_phase]
        return ("" if prefix == "+" else prefix) + self.letters

    @property
    def support(self) -> frozenset[int]:
        bits = self.x | self.z
        return frozenset(q for q in range(self.n) if bits & _qubit_bit(self.n, q))

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_hermitian(self) -> bool:
        return self.sign_phase % 2 == 0

    @property
    def is_z_type(self) -> bool:
        return self.x == 0

    def unphased(self) -> PauliString:
        """The same letters with a ``+1`` sign."""
        return PauliString(self.n, self.x, self.z, self.y_count)

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def commutes(self, other: PauliString) -> bool:
        if self.n != other.n:
            raise DimensionMismatch("qubit counts differ")
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def to_matrix(self) -> np.ndarray:
        return dense_matrix(self)

    def __str__(self) -> str:
        return self.label


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Phased product ``a * b``."""
    if a.n != b.n:
        raise DimensionMismatch(f"qubit counts {a.n} and {b.n} differ")
    # Z^z1 X^x2 = (-1)^{z1.x2} X^x2 Z^z1
    phase = a.phase + b.phase + 2 * (a.z & b.x).bit_count()
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z, phase)


def dense_matrix(p: PauliString, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
    if p.n > max_qubits:
        raise TooLarge(f"dense Pauli on {p.n} > {max_qubits} qubits", "n")
    out = np.ones((1, 1), dtype=complex)
    for q in range(p.n):
        out = np.kron(out, SINGLE_QUBIT_PAULIS[p.letter(q)])
    return (1j ** p.sign_phase) * out


@dataclass(frozen=True)
class DenseOperator:
    """A ``2^m x 2^m`` matrix acting on an ordered tuple of physical qubits."""

    matrix: np.ndarray
    qubits: tuple[int, ...]

    def __post_init__(self):
        dim = 1 << len(self.qubits)
        if self.matrix.shape != (dim, dim):
            raise DimensionMismatch(
                f"matrix shape {self.matrix.shape} does not act on {len(self.qubits)} qubits"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubits in {self.qubits}")

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)


@dataclass
class PauliSum:
    """Real linear combination of unsigned Pauli words.

    Keys are ``(x, z)`` bit pairs in the {I,X,Y,Z} letter convention, so each
    key stands for a Hermitian word with coefficient ``+1``.
    """

    n: int
    terms: dict[tuple[int, int], float] = field(default_factory=dict)
    qubits: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.qubits is None:
            self.qubits = tuple(range(self.n))

    @classmethod
    def from_labels(cls, coefficients: Mapping[str, float]) -> PauliSum:
        n = None
        terms: dict[tuple[int, int], float] = {}
        for label, coeff in coefficients.items():
            p = PauliString.from_label(label)
            if n is None:
                n = p.n
            elif p.n != n:
                raise DimensionMismatch("labels have unequal lengths")
            sign = {0: 1.0, 2: -1.0}.get(p.sign_phase)
            if sign is None:
                raise NotHermitian(f"{label} is not Hermitian")
            key = (p.x, p.z)
            terms[key] = terms.get(key, 0.0) + sign * float(coeff)
        return cls(n or 0, terms)

    def pauli(self, key: tuple[int, int]) -> PauliString:
        x, z = key
        return PauliString(self.n, x, z, (x & z).bit_count())

    def significant(self, tol: float = DEFAULT_TOL) -> dict[tuple[int, int], float]:
        return {k: c for k, c in self.terms.items() if abs(c) > tol}

    def as_labels(self, tol: float = DEFAULT_TOL) -> dict[str, float]:
        return {self.pauli(k).letters: c for k, c in sorted(self.significant(tol).items())}

    def __iter__(self) -> Iterator[tuple[PauliString, float]]:
        for key, coeff in self.terms.items():
            yield self.pauli(key), coeff

    def norm_squared(self) -> float:
        return float(sum(c * c for c in self.terms.values()))

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n
        out = np.zeros((dim, dim), dtype=complex)
        for p, c in self:
            out += c * dense_matrix(p)
        return out


def _pauli_fold_tensor() -> np.ndarray:
    # T[a, r, c] with coefficient_a(B) = sum_{r,c} T[a, r, c] B[r, c] = Tr(P_a B) / 2
    return np.stack([SINGLE_QUBIT_PAULIS[l].T / 2 for l in "IXYZ"])


_FOLD = _pauli_fold_tensor()
_LETTER_ORDER = "IXYZ"


def pauli_coefficients(matrix: np.ndarray) -> np.ndarray:
    """All coefficients ``Tr(P_a M) / 2^m`` as an array of shape ``(4,) * m``.

    Axis ``q`` indexes the letter I, X, Y, Z on qubit ``q``. Each qubit is
    folded in turn, costing ``O(m 4^m)`` rather than ``4^m`` full traces.
    """
    dim = matrix.shape[0]
    m = dim.bit_length() - 1
    if matrix.shape != (dim, dim) or dim != 1 << m:
        raise DimensionMismatch(f"not a square power-of-two matrix: {matrix.shape}")
    t = np.asarray(matrix, dtype=complex).reshape((2,) * (2 * m))
    # interleave (r_q, c_q) pairs so that each qubit owns two adjacent axes
    order = [ax for q in range(m) for ax in (q, m + q)]
    t = t.transpose(order).reshape((4,) * m) if m else t.reshape(())
    fold = _FOLD.reshape(4, 4)
    for q in range(m):
        t = np.moveaxis(np.tensordot(fold, t, axes=([1], [q])), 0, q)
    return t


def decompose(
    k: DenseOperator | np.ndarray,
    tol: float = DEFAULT_TOL,
    max_qubits: int = MAX_DECOMPOSE_QUBITS,
) -> PauliSum:
    """Expand a Hermitian operator in the real orthogonal Pauli basis."""
    if isinstance(k, DenseOperator):
        matrix, qubits = k.matrix, k.qubits
    else:
        matrix = np.asarray(k, dtype=complex)
        m = matrix.shape[0].bit_length() - 1
        qubits = tuple(range(m))
    m = len(qubits)
    if m > max_qubits:
        raise TooLarge(f"decomposition on {m} > {max_qubits} qubits", "m")
    if np.abs(matrix - matrix.conj().T).max(initial=0.0) > tol:
        raise NotHermitian("operator is not Hermitian within tolerance")
    coeffs = pauli_coefficients(matrix)
    if np.abs(coeffs.imag).max(initial=0.0) > tol:  # pragma: no cover - implied by hermiticity
        raise NotHermitian("complex Pauli coefficient")
    terms: dict[tuple[int, int], float] = {}
    for index in zip(*np.nonzero(np.abs(coeffs) > tol)):
        x = z = 0
        for q, a in enumerate(index):
            xb, zb = _LETTER_BITS[_LETTER_ORDER[a]]
            x |= xb * _qubit_bit(m, q)
            z |= zb * _qubit_bit(m, q)
        terms[(x, z)] = float(coeffs[index].real)
    return PauliSum(m, terms, tuple(qubits))


def is_z_type(s: PauliSum, tol: float = DEFAULT_TOL) -> bool:
    """True iff every significant term is a product of Z and identity."""
    return all(x == 0 for (x, _z) in s.significant(tol))


def support_of(s: PauliSum, tol: float = DEFAULT_TOL) -> frozenset[int]:
    """Physical qubits touched by significant terms."""
    local = 0
    for x, z in s.significant(tol):
        local |= x | z
    return frozenset(s.qubits[q] for q in range(s.n) if local & _qubit_bit(s.n, q))


def labels_to_strings(labels: Sequence[str]) -> list[PauliString]:
    strings = [PauliString.from_label(label) for label in labels]
    if len({p.n for p in strings}) > 1:
        raise DimensionMismatch("Pauli literals have unequal lengths")
    return strings
