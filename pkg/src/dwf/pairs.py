"""Dense pair relations S inside G x G.

A ``PairSet`` is an n x n boolean matrix (row a, column b) plus its
population count. Random sets come from SplitMix64 in row-major order, so a
given (n, c, seed) yields the same set in any implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DuplicatePair, MalformedHeader, PairFormatError, PairOutOfRange
from .groups import FiniteGroup

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


class SplitMix64:
    """Scalar SplitMix64 stream."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


def splitmix64_block(seed: int, count: int) -> np.ndarray:
    """The first ``count`` outputs of SplitMix64(seed) as uint64, vectorised."""
    i = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + i * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class DensitySpec:
    c: Fraction
    seed: int = 0
    mode: str = "bernoulli"

    def __post_init__(self):
        c = Fraction(self.c)
        if not 0 < c <= 1:
            raise ValueError(f"density must lie in (0, 1], got {c}")
        if self.mode not in ("bernoulli", "block", "full"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "c", c)


@dataclass(frozen=True, eq=False)
class PairSet:
    bits: np.ndarray = field(repr=False)
    cardinality: int = -1

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise ValueError("pair matrix must be square")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "cardinality", int(np.count_nonzero(bits)))

    @property
    def group_order(self) -> int:
        return self.bits.shape[0]

    def contains(self, a: int, b: int) -> bool:
        return bool(self.bits[a, b])

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in np.argwhere(self.bits)]

    def __eq__(self, other) -> bool:
        return isinstance(other, PairSet) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.group_order, self.cardinality, self.bits.tobytes()))

    @classmethod
    def from_pairs(cls, n: int, pairs) -> PairSet:
        bits = np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            bits[a, b] = True
        return cls(bits)


def _bernoulli_threshold(c: Fraction) -> int:
    # u = z / 2^64 < p/q  <=>  z < ceil(p * 2^64 / q)
    return -(-(c.numerator << 64) // c.denominator)


def block_side(c: Fraction, n: int) -> int:
    """ceil(sqrt(c) * n): the least L with L^2 >= c n^2."""
    target = c * n * n
    L = math.isqrt(target.numerator // target.denominator)
    while L * L < target:
        L += 1
    return min(L, n)


def generate(G: FiniteGroup | int, spec: DensitySpec) -> PairSet:
    n = G if isinstance(G, int) else G.order
    if spec.mode == "full":
        return PairSet(np.ones((n, n), dtype=bool))
    if spec.mode == "bernoulli":
        thr = _bernoulli_threshold(spec.c)
        if thr > MASK64:
            return PairSet(np.ones((n, n), dtype=bool))
        z = splitmix64_block(spec.seed, n * n)
        return PairSet((z < np.uint64(thr)).reshape(n, n))
    rng = SplitMix64(spec.seed)
    side = block_side(spec.c, n)
    rows = (rng.next() % n + np.arange(side)) % n
    cols = (rng.next() % n + np.arange(side)) % n
    bits = np.zeros((n, n), dtype=bool)
    bits[np.ix_(rows, cols)] = True
    return PairSet(bits)


def density(S: PairSet) -> Fraction:
    return Fraction(S.cardinality, S.group_order ** 2)


def save_pairs(S: PairSet) -> str:
    lines = [f"pairs {S.group_order} {S.cardinality}"]
    lines += [f"{a} {b}" for a, b in np.argwhere(S.bits).tolist()]
    return "\n".join(lines) + "\n"


def load_pairs(text: str) -> PairSet:
    lines = text.splitlines()
    head = lines[0].split() if lines else []
    if len(head) != 3 or head[0] != "pairs":
        raise MalformedHeader(f"expected 'pairs n s', got {lines[0] if lines else ''!r}")
    try:
        n, s = int(head[1]), int(head[2])
    except ValueError:
        raise MalformedHeader(f"non-integer header fields in {lines[0]!r}") from None
    if n < 1 or s < 0:
        raise MalformedHeader(f"invalid header values n={n} s={s}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != s:
        raise PairFormatError(f"header announces {s} pairs, found {len(body)}")
    bits = np.zeros((n, n), dtype=bool)
    prev = None
    for ln in body:
        parts = ln.split()
        try:
            a, b = (int(v) for v in parts)
        except ValueError:
            raise PairFormatError(f"bad pair line {ln!r}") from None
        if not (0 <= a < n and 0 <= b < n):
            raise PairOutOfRange(f"pair ({a}, {b}) outside [0, {n})")
        if bits[a, b]:
            raise DuplicatePair(f"pair ({a}, {b}) listed twice")
        if prev is not None and (a, b) < prev:
            raise PairFormatError(f"pair ({a}, {b}) out of lexicographic order")
        bits[a, b] = True
        prev = (a, b)
    return PairSet(bits)
