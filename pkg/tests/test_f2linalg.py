import numpy as np
import pytest
from conftest import gf2_rank_oracle, naive_distance, random_full_rank
from hypothesis import given, settings
from hypothesis import strategies as st

from cscgates.errors import DimensionMismatch, RankDeficient, TooLarge
from cscgates.f2linalg import (
    BitVector,
    F2Matrix,
    encode_word,
    generator_from_parity,
    min_distance,
    rank,
    standard_form,
)


def M(rows):
    return F2Matrix.from_rows(rows)


class TestBitVector:
    def test_roundtrip_and_weight(self):
        v = BitVector.from_bits([1, 0, 1, 1])
        assert v.bits == (1, 0, 1, 1)
        assert v.weight == 3
        assert v.value == 0b1011
        assert str(v) == "1011"
        assert v[0] == 1 and v[1] == 0

    def test_xor_requires_equal_length(self):
        with pytest.raises(DimensionMismatch):
            BitVector.from_bits([1, 0]) ^ BitVector.from_bits([1, 0, 0])

    def test_rejects_oversized_value(self):
        with pytest.raises(ValueError):
            BitVector(8, 3)


class TestRank:
    @pytest.mark.parametrize(
        "rows, expected",
        [
            ([[1, 1, 0], [0, 1, 1]], 2),
            ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
            ([[0, 0, 0, 0], [0, 0, 0, 0]], 0),
            ([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 2),
        ],
    )
    def test_examples(self, rows, expected):
        assert gf2_rank_oracle(rows) == expected
        assert rank(M(rows)) == expected

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 10), st.randoms(use_true_random=False))
    def test_matches_oracle(self, m, n, rnd):
        rows = [[rnd.randint(0, 1) for _ in range(n)] for _ in range(m)]
        assert rank(M(rows)) == gf2_rank_oracle(rows)


class TestStandardForm:
    def test_three_qubit_repetition(self):
        h_std, perm, p = standard_form(M([[1, 1, 0], [0, 1, 1]]))
        assert h_std.to_lists() == [[1, 1, 0], [1, 0, 1]]
        assert perm == (0, 1, 2)
        assert p.to_lists() == [[1, 1]]

    def test_already_standard_is_fixed_point(self):
        h = M([[1, 1, 1, 0], [1, 0, 0, 1]])
        h_std, perm, _ = standard_form(h)
        assert h_std == h
        assert perm == (0, 1, 2, 3)

    def test_two_qubit(self):
        h_std, perm, p = standard_form(M([[1, 1]]))
        assert h_std.to_lists() == [[1, 1]]
        assert p.to_lists() == [[1]]

    def test_needs_column_swap(self):
        # last column is zero, so a pivot must be swapped in
        h = M([[1, 1, 0]])
        h_std, perm, p = standard_form(h)
        assert perm != (0, 1, 2)
        assert h_std == h.permute_columns(perm) or rank(h_std) == 1
        assert h_std.column(2).bits == (1,)
        # h_std is h permuted and row-combined: same row space after permutation
        permuted = h.permute_columns(perm)
        assert rank(F2Matrix(permuted.rows + h_std.rows, 3)) == 1

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient):
            standard_form(M([[1, 1, 0], [0, 1, 1], [1, 0, 1]]))


def _check_standard(h_lists):
    h = M(h_lists)
    m, n = h.shape
    k = n - m
    h_std, perm, p = standard_form(h)
    # identity in the last m columns
    for t in range(m):
        assert [h_std.row(t)[k + s] for s in range(m)] == [int(s == t) for s in range(m)]
    # [p^T | I]
    for t in range(m):
        assert [h_std.row(t)[s] for s in range(k)] == [p.row(s)[t] for s in range(k)]
    # same row space as the permuted input
    permuted = h.permute_columns(perm)
    assert rank(F2Matrix(permuted.rows + h_std.rows, n)) == m
    return h_std, perm, p


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_standard_form_and_generator_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 13))
    m = int(rng.integers(1, n))
    rows = random_full_rank(rng, m, n).tolist()
    _check_standard(rows)
    g, perm = generator_from_parity(M(rows))
    k = n - m
    assert g.shape == (k, n)
    # orthogonality g . h^T = 0
    assert (g @ M(rows).transpose()).is_zero()
    # first k standard columns are the identity
    for s in range(k):
        assert [g.row(s)[perm[i]] for i in range(k)] == [int(i == s) for i in range(k)]
    # row space has 2^k elements, each annihilated by h
    words = {encode_word(g, [(e >> (k - 1 - s)) & 1 for s in range(k)]).value for e in range(1 << k)}
    assert len(words) == 2**k
    h_arr = np.array(rows)
    for w in words:
        bits = np.array(BitVector(w, n).bits)
        assert not (h_arr @ bits % 2).any()


class TestGenerator:
    @pytest.mark.parametrize(
        "h, g",
        [
            ([[1, 1, 0], [0, 1, 1]], [[1, 1, 1]]),
            ([[0, 1]], [[1, 0]]),
            ([[1, 1, 0, 0, 0], [0, 1, 1, 0, 0], [0, 0, 1, 1, 0], [0, 0, 0, 1, 1]],
             [[1, 1, 1, 1, 1]]),
        ],
    )
    def test_examples(self, h, g):
        assert generator_from_parity(M(h))[0].to_lists() == g


class TestDistance:
    @pytest.mark.parametrize(
        "g, d",
        [([[1, 1, 1]], 3), ([[1, 1, 1, 1, 1]], 5), ([[1, 0, 1, 1], [0, 1, 1, 0]], 2)],
    )
    def test_examples(self, g, d):
        assert naive_distance(g) == d
        assert min_distance(M(g)) == d

    @settings(max_examples=150, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 14), st.randoms(use_true_random=False))
    def test_matches_naive(self, k, n, rnd):
        rows = [[rnd.randint(0, 1) for _ in range(n)] for _ in range(k)]
        if gf2_rank_oracle(rows) < k:
            return
        assert min_distance(M(rows)) == naive_distance(rows)

    def test_wide_matrix_fallback(self):
        rng = np.random.default_rng(3)
        g = rng.integers(0, 2, size=(5, 70))
        if gf2_rank_oracle(g) == 5:
            assert min_distance(F2Matrix.from_array(g)) == naive_distance(g)

    def test_guard(self):
        g = F2Matrix.identity(25)
        with pytest.raises(TooLarge):
            min_distance(g)


class TestEncode:
    def test_examples(self):
        assert encode_word(M([[1, 1, 1]]), [1]).bits == (1, 1, 1)
        assert encode_word(M([[1, 0, 1, 1], [0, 1, 1, 0]]), [0, 0]).bits == (0, 0, 0, 0)
        assert encode_word(M([[1, 0, 1, 1], [0, 1, 1, 0]]), [1, 1]).bits == (1, 1, 0, 1)

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            encode_word(M([[1, 1, 1]]), [1, 0])

    def test_systematic_prefix(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            n = int(rng.integers(3, 10))
            m = int(rng.integers(1, n))
            while True:
                h = rng.integers(0, 2, size=(m, n))
                if gf2_rank_oracle(h) == m:
                    break
            g, perm = generator_from_parity(F2Matrix.from_array(h))
            k = n - m
            eps = rng.integers(0, 2, size=k).tolist()
            word = encode_word(g, eps)
            assert [word[perm[i]] for i in range(k)] == eps
