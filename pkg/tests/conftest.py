import itertools
import sys

import numpy as np
import pytest

from cscgates.circuit import CodeblockLayout
from cscgates.code import StabilizerCode


@pytest.fixture
def rep3():
    return StabilizerCode.from_stabilizers(["ZZI", "IZZ"])


@pytest.fixture
def rep5():
    return StabilizerCode.repetition(5)


@pytest.fixture
def code42():
    # generator [[1,0,1,1],[0,1,1,0]] in standard form
    return StabilizerCode.from_stabilizers(["ZZZI", "ZIIZ"])


@pytest.fixture
def rep3_layout(rep3):
    return CodeblockLayout.single(rep3)


@pytest.fixture
def two_rep3(rep3):
    return CodeblockLayout.contiguous([rep3, rep3])


def gf2_rank_oracle(a) -> int:
    """Row reduction on a uint8 array, independent of the packed kernel."""
    a = (np.asarray(a, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        a[[r, p]] = a[[p, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


def naive_distance(g) -> int:
    g = np.asarray(g, dtype=int)
    weights = [
        int((np.array(eps) @ g % 2).sum())
        for eps in itertools.product((0, 1), repeat=g.shape[0])
        if any(eps)
    ]
    return min(weights)


def random_full_rank(rng, m, n):
    while True:
        h = rng.integers(0, 2, size=(m, n))
        if gf2_rank_oracle(h) == m:
            return h


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
