import itertools
from fractions import Fraction

import numpy as np
import pytest

from dwf.groups import cyclic_product, load_cayley_table, permutation_closure

MASK64 = (1 << 64) - 1


def reference_splitmix64(seed):
    """Textbook SplitMix64, written out independently of dwf.pairs."""
    state = seed
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def reference_bernoulli(n, c: Fraction, seed):
    """Row-major bit matrix with (a, b) kept iff output / 2^64 < c, compared exactly."""
    stream = reference_splitmix64(seed)
    bits = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            bits[a, b] = Fraction(next(stream), 1 << 64) < c
    return bits


def s3_permutations():
    return sorted(itertools.permutations(range(3)))


def compose(p, q):
    """(p q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(q)))


def s3_table_text():
    perms = s3_permutations()
    index = {p: i for i, p in enumerate(perms)}
    rows = [" ".join(str(index[compose(p, q)]) for q in perms) for p in perms]
    return "6\n" + "\n".join(rows) + "\n", perms


@pytest.fixture
def s3_table():
    text, perms = s3_table_text()
    return load_cayley_table(text), perms


@pytest.fixture
def s3_perm():
    return permutation_closure(3, [(1, 0, 2), (1, 2, 0)])


@pytest.fixture
def z6():
    return cyclic_product(6)
