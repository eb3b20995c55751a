"""Dense linear algebra over F2 on bit-packed rows.

Rows are packed into Python integers with column ``i`` of an ``n``-column
matrix stored at bit ``n - 1 - i``. With this convention a packed codeword is
directly the computational-basis index of the matching product state, qubit 0
being the most significant bit.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from cscgates.errors import DimensionMismatch, RankDeficient, TooLarge

MAX_DISTANCE_K = 24

Permutation = tuple[int, ...]


def _bit(length: int, i: int) -> int:
    return 1 << (length - 1 - i)


@dataclass(frozen=True)
class BitVector:
    """Fixed-length binary vector."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0 or self.value < 0 or self.value >> self.length:
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        bits = [int(b) for b in bits]
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b}")
            value = (value << 1) | b
        return cls(value, len(bits))

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(0, length)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.length - 1 - i)) & 1 for i in range(self.length))

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b)

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, i: int) -> int:
        if not -self.length <= i < self.length:
            raise IndexError(i)
        return (self.value >> (self.length - 1 - (i % self.length))) & 1

    def __xor__(self, other: BitVector) -> BitVector:
        if self.length != other.length:
            raise DimensionMismatch(f"lengths {self.length} and {other.length} differ")
        return BitVector(self.value ^ other.value, self.length)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class F2Matrix:
    """Rectangular binary matrix stored as packed row integers."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        limit = 1 << self.ncols
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError("row does not fit in ncols bits")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> F2Matrix:
        vectors = [BitVector.from_bits(r) for r in rows]
        if ncols is None:
            if not vectors:
                raise ValueError("ncols required for an empty matrix")
            ncols = vectors[0].length
        if any(v.length != ncols for v in vectors):
            raise DimensionMismatch("rows have unequal lengths")
        return cls(tuple(v.value for v in vectors), ncols)

    @classmethod
    def from_array(cls, array) -> F2Matrix:
        a = np.asarray(array) % 2
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows(a.tolist(), ncols=a.shape[1])

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(tuple(_bit(n, i) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> F2Matrix:
        return cls((0,) * nrows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def row(self, i: int) -> BitVector:
        return BitVector(self.rows[i], self.ncols)

    def column(self, j: int) -> BitVector:
        return BitVector.from_bits((r >> (self.ncols - 1 - j)) & 1 for r in self.rows)

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i] = self.row(i).bits
        return out

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i).bits) for i in range(self.nrows)]

    def transpose(self) -> F2Matrix:
        return F2Matrix(tuple(self.column(j).value for j in range(self.ncols)), self.nrows)

    def permute_columns(self, perm: Sequence[int]) -> F2Matrix:
        """Return the matrix whose column ``i`` is column ``perm[i]`` of ``self``."""
        if sorted(perm) != list(range(self.ncols)):
            raise ValueError(f"not a permutation of {self.ncols} columns: {perm}")
        rows = []
        for r in self.rows:
            bits = BitVector(r, self.ncols).bits
            rows.append(BitVector.from_bits(bits[p] for p in perm).value)
        return F2Matrix(tuple(rows), self.ncols)

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            for i in range(self.ncols):
                if (r >> (self.ncols - 1 - i)) & 1:
                    acc ^= other.rows[i]
            out.append(acc)
        return F2Matrix(tuple(out), other.ncols)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __str__(self) -> str:
        return "\n".join(str(self.row(i)) for i in range(self.nrows))


def rank(m: F2Matrix) -> int:
    """Dimension of the row space of ``m`` over F2."""
    basis: dict[int, int] = {}  # leading bit -> reduced row
    for r in m.rows:
        while r:
            lead = r.bit_length() - 1
            if lead not in basis:
                basis[lead] = r
                break
            r ^= basis[lead]
    return len(basis)


def standard_form(h: F2Matrix) -> tuple[F2Matrix, Permutation, F2Matrix]:
    """Reduce a full-rank parity-check matrix to ``[P^T | I]``.

    Pivots are sought right to left in the last ``n - k`` columns. A column is
    swapped in from elsewhere only when the target column has no usable pivot,
    so matrices already in conventional layout keep the identity permutation.

    Returns ``(h_std, perm, p)`` where column ``i`` of ``h_std`` comes from
    column ``perm[i]`` of ``h`` and ``p`` is the ``k x (n - k)`` block.
    """
    m, n = h.shape
    if m > n or rank(h) != m:
        raise RankDeficient(
            f"parity-check rows are not independent (rank {rank(h)} < {m})", rows=h.to_lists()
        )
    k = n - m
    cols = [list(h.column(j).bits) for j in range(n)]
    perm = list(range(n))
    # work on a row-major bit table so column swaps are cheap
    table = [[cols[j][i] for j in range(n)] for i in range(m)]
    pivot_row_of: dict[int, int] = {}
    free_rows = set(range(m))

    def find_row(col: int) -> int | None:
        for i in sorted(free_rows):
            if table[i][col]:
                return i
        return None

    for t in range(m - 1, -1, -1):
        target = k + t
        row = find_row(target)
        if row is None:
            candidates = list(range(k - 1, -1, -1)) + list(range(target - 1, k - 1, -1))
            for col in candidates:
                row = find_row(col)
                if row is not None:
                    for line in table:
                        line[col], line[target] = line[target], line[col]
                    perm[col], perm[target] = perm[target], perm[col]
                    break
            else:  # pragma: no cover - excluded by the rank check above
                raise RankDeficient("no pivot available", rows=h.to_lists())
        free_rows.discard(row)
        pivot_row_of[target] = row
        for i in range(m):
            if i != row and table[i][target]:
                table[i] = [a ^ b for a, b in zip(table[i], table[row])]

    ordered = [table[pivot_row_of[k + t]] for t in range(m)]
    h_std = F2Matrix.from_rows(ordered, ncols=n)
    p = F2Matrix.from_rows([[ordered[t][s] for t in range(m)] for s in range(k)], ncols=m)
    return h_std, tuple(perm), p


def generator_from_parity(h: F2Matrix) -> tuple[F2Matrix, Permutation]:
    """Generator matrix ``[I_k | P]`` for the code with parity checks ``h``.

    The returned generator is expressed in the original column labels of
    ``h``; column ``perm[s]`` of row ``s`` is its unit pivot for ``s < k``.
    """
    h_std, perm, p = standard_form(h)
    n = h.ncols
    k = n - h.nrows
    rows = []
    for s in range(k):
        std_bits = [1 if i == s else 0 for i in range(k)] + list(p.row(s).bits)
        user_bits = [0] * n
        for i, b in enumerate(std_bits):
            user_bits[perm[i]] = b
        rows.append(user_bits)
    return F2Matrix.from_rows(rows, ncols=n), perm


def encode_word(g: F2Matrix, eps: BitVector | Sequence[int]) -> BitVector:
    """XOR of the generator rows selected by ``eps``."""
    if not isinstance(eps, BitVector):
        eps = BitVector.from_bits(eps)
    if eps.length != g.nrows:
        raise DimensionMismatch(f"logical word has length {eps.length}, expected {g.nrows}")
    acc = 0
    for s, bit in enumerate(eps.bits):
        if bit:
            acc ^= g.rows[s]
    return BitVector(acc, g.ncols)


def _span(rows: Sequence[int]) -> np.ndarray:
    words = np.zeros(1, dtype=np.uint64)
    for r in rows:
        words = np.concatenate([words, words ^ np.uint64(r)])
    return words


def min_distance(g: F2Matrix, max_k: int = MAX_DISTANCE_K) -> int:
    """Minimum Hamming weight of a nonzero codeword of the row space of ``g``.

    Exhaustive over all ``2^k - 1`` nonzero messages. The generator rows are
    split in two halves whose spans are tabulated, and every pair is combined
    with a vectorized XOR and popcount.
    """
    k = g.nrows
    if k == 0:
        raise ValueError("generator matrix has no rows")
    if k > max_k:
        raise TooLarge(f"2^{k} codewords exceeds the enumeration limit 2^{max_k}", "k")
    if rank(g) < k:
        return 0
    if g.ncols > 64:
        return _min_distance_gray(g)
    half = k // 2
    low = _span(g.rows[:half])
    high = _span(g.rows[half:])
    best = g.ncols + 1
    for i, word in enumerate(high):
        weights = np.bitwise_count(low ^ word)
        if i == 0:
            weights = weights[1:]
        if weights.size:
            best = min(best, int(weights.min()))
    return best


def _min_distance_gray(g: F2Matrix) -> int:
    best = g.ncols + 1
    acc = 0
    for step in range(1, 1 << g.nrows):
        acc ^= g.rows[(step & -step).bit_length() - 1]
        best = min(best, acc.bit_count())
    return best


def codewords(g: F2Matrix) -> Iterator[BitVector]:
    """All ``2^k`` codewords in lexicographic order of the message."""
    for eps in itertools.product((0, 1), repeat=g.nrows):
        yield encode_word(g, eps)
