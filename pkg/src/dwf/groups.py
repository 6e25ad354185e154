"""Finite groups over dense element ids 0..|G|-1.

Three backends share one interface:

* ``CayleyGroup``       -- an explicit multiplication table,
* ``CyclicProductGroup`` -- Z_{m_1} x ... x Z_{m_tau} with mixed-radix ids,
* ``PermutationGroup``  -- the closure of a list of permutations.

Every backend provides scalar ``mul``/``inv`` with range checks and
vectorised ``mul_many``/``inv_many`` over numpy arrays (no range checks).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ClosureCapExceeded,
    IdOutOfRange,
    NonSquareTable,
    NotAGroup,
    OverflowOrder,
)

EXHAUSTIVE_ASSOC_LIMIT = 64
DEFAULT_CLOSURE_CAP = 20160
# permutation groups up to this order get a materialised table
PERM_TABLE_LIMIT = 4096
CYCLIC_TABLE_LIMIT = 2048
MAX_ORDER = 2**62


class FiniteGroup:
    """Common interface; subclasses implement the ``_mul_many``/``_inv_many`` kernels."""

    name: str = "G"
    order: int
    identity: int = 0

    def _check(self, *ids: int) -> None:
        for a in ids:
            if not 0 <= a < self.order:
                raise IdOutOfRange(f"element id {a} not in [0, {self.order})")

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.mul_many(np.int64(a), np.int64(b)))

    def inv(self, a: int) -> int:
        self._check(a)
        return int(self.inv_many(np.int64(a)))

    def mul_many(self, a, b) -> np.ndarray:
        """Elementwise a*b with numpy broadcasting."""
        return self._mul_many(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def inv_many(self, a) -> np.ndarray:
        return self._inv_many(np.asarray(a, dtype=np.int64))

    def _mul_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _inv_many(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def power(self, a: int, n: int) -> int:
        self._check(a)
        return int(self.power_many(np.int64(a), n))

    def power_many(self, a, n: int) -> np.ndarray:
        """Elementwise a**n by binary exponentiation (n may be negative)."""
        a = np.asarray(a, dtype=np.int64)
        if n < 0:
            a, n = self.inv_many(a), -n
        result = np.full(a.shape, self.identity, dtype=np.int64)
        base = a
        while n:
            if n & 1:
                result = self.mul_many(result, base)
            n >>= 1
            if n:
                base = self.mul_many(base, base)
        return result

    def elements(self) -> range:
        return range(self.order)

    def table(self) -> np.ndarray:
        ids = np.arange(self.order, dtype=np.int64)
        return self.mul_many(ids[:, None], ids[None, :])

    def is_abelian(self) -> bool:
        gens = self.generators()
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                if self.mul(a, b) != self.mul(b, a):
                    return False
        return True

    def generators(self) -> list[int]:
        """A generating set, built greedily in id order unless the backend knows one."""
        return generating_set(self, range(self.order))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} order={self.order}>"


class CayleyGroup(FiniteGroup):
    def __init__(self, table, name: str = "G", identity: int | None = None):
        table = np.asarray(table, dtype=np.int64)
        self._table = table
        self._flat = table.ravel()
        self.order = table.shape[0]
        self.name = name
        self.identity = _find_identity(table) if identity is None else identity
        inv = np.empty(self.order, dtype=np.int64)
        rows, cols = np.nonzero(table == self.identity)
        inv[rows] = cols
        self._inv = inv

    def _mul_many(self, a, b):
        return self._flat[a * self.order + b]

    def _inv_many(self, a):
        return self._inv[a]

    def table(self) -> np.ndarray:
        return self._table

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self._table, self._table.T))


class CyclicProductGroup(FiniteGroup):
    """Z_{m_1} x ... x Z_{m_tau}; tuple (x_1..x_tau) has id sum x_i * prod_{j>i} m_j."""

    def __init__(self, moduli: Sequence[int], name: str | None = None):
        moduli = tuple(int(m) for m in moduli)
        if any(m < 1 for m in moduli):
            raise ValueError(f"moduli must be positive, got {moduli}")
        order = math.prod(moduli)
        if order > MAX_ORDER:
            raise OverflowOrder(f"order {order} exceeds {MAX_ORDER}")
        self.moduli = moduli
        self.order = order
        self.identity = 0
        self.name = name or ("Z_" + "xZ_".join(map(str, moduli)) if moduli else "1")
        weights = []
        w = 1
        for m in reversed(moduli):
            weights.append(w)
            w *= m
        self.weights = tuple(reversed(weights))
        self._table = None

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.moduli):
            raise ValueError("wrong number of coordinates")
        return sum((int(x) % m) * w for x, m, w in zip(coords, self.moduli, self.weights))

    def decode(self, a: int) -> tuple[int, ...]:
        self._check(a)
        return tuple((a // w) % m for w, m in zip(self.weights, self.moduli))

    def _add_digits(self, a, b, sign: int = 1):
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w, m in zip(self.weights, self.moduli):
            if m > 1:
                out += ((a // w + sign * (b // w)) % m) * w
        return out

    def _build_table(self) -> np.ndarray:
        ids = np.arange(self.order, dtype=np.int64)
        return self._add_digits(ids[:, None], ids[None, :])

    def _mul_many(self, a, b):
        if self._table is None and self.order <= CYCLIC_TABLE_LIMIT:
            self._table = self._build_table().ravel()
        if self._table is not None:
            return self._table[a * self.order + b]
        return self._add_digits(a, b)

    def _inv_many(self, a):
        return self._add_digits(np.zeros_like(a), a, sign=-1)

    def table(self) -> np.ndarray:
        if self._table is not None:
            return self._table.reshape(self.order, self.order)
        return super().table()

    def is_abelian(self) -> bool:
        return True

    def generators(self) -> list[int]:
        return [w for w, m in zip(self.weights, self.moduli) if m > 1]


class PermutationGroup(FiniteGroup):
    """Closure of permutation generators; ``perms[i]`` is element i, images of 0..d-1.

    Products compose right to left: (a*b)(i) = a(b(i)).
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]],
                 cap: int = DEFAULT_CLOSURE_CAP, name: str = "G"):
        gens = [tuple(int(v) for v in g) for g in generators]
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError(f"{g} is not a permutation of 0..{degree - 1}")
        self.degree = degree
        self.name = name
        self.gen_perms = gens
        ident = tuple(range(degree))
        index = {ident: 0}
        perms = [ident]
        queue = deque([ident])
        while queue:
            p = queue.popleft()
            for g in gens:
                q = tuple(p[g[i]] for i in range(degree))
                if q not in index:
                    if len(perms) >= cap:
                        raise ClosureCapExceeded(f"closure exceeds cap {cap}")
                    index[q] = len(perms)
                    perms.append(q)
                    queue.append(q)
        self.order = len(perms)
        self.identity = 0
        self._index = index
        self.perms = np.array(perms, dtype=np.int64).reshape(self.order, degree)
        self._gen_ids = [index[g] for g in gens]
        self._table = None
        if self.order <= PERM_TABLE_LIMIT:
            self._table = self._compose(
                np.repeat(np.arange(self.order), self.order),
                np.tile(np.arange(self.order), self.order),
            ).reshape(self.order, self.order)
            self._flat = self._table.ravel()
        inv = np.empty(self.order, dtype=np.int64)
        for i, p in enumerate(perms):
            q = [0] * degree
            for j, v in enumerate(p):
                q[v] = j
            inv[i] = index[tuple(q)]
        self._inv = inv

    def element(self, a: int) -> tuple[int, ...]:
        self._check(a)
        return tuple(int(v) for v in self.perms[a])

    def id_of(self, perm: Sequence[int]) -> int:
        return self._index[tuple(perm)]

    def _compose(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        flat_a, flat_b = a.ravel(), b.ravel()
        out = np.empty(flat_a.shape, dtype=np.int64)
        composed = np.take_along_axis(self.perms[flat_a], self.perms[flat_b], axis=1)
        for i, row in enumerate(composed):
            out[i] = self._index[tuple(row.tolist())]
        return out.reshape(a.shape)

    def _mul_many(self, a, b):
        if self._table is not None:
            return self._flat[a * self.order + b]
        return self._compose(a, b)

    def _inv_many(self, a):
        return self._inv[a]

    def generators(self) -> list[int]:
        return list(self._gen_ids)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False)
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def __contains__(self, a: int) -> bool:
        return a in set(self.members)

    def is_abelian(self) -> bool:
        gens = generating_set(self.parent, self.members)
        G = self.parent
        return all(G.mul(a, b) == G.mul(b, a) for i, a in enumerate(gens) for b in gens[i + 1:])


def _find_identity(table: np.ndarray) -> int:
    n = table.shape[0]
    ids = np.arange(n)
    hits = np.nonzero((table == ids[None, :]).all(axis=1))[0]
    for e in hits:
        if np.array_equal(table[:, e], ids):
            return int(e)
    raise NotAGroup("identity")


def closure_mask(G: FiniteGroup, gens: Iterable[int]) -> np.ndarray:
    """Boolean membership mask of the subgroup generated by ``gens``."""
    gens = np.array(sorted(set(int(g) for g in gens)), dtype=np.int64)
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size and gens.size:
        prod = np.unique(G.mul_many(frontier[:, None], gens[None, :]))
        new = prod[~mask[prod]]
        mask[new] = True
        frontier = new
    return mask


def generate_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return Subgroup(G, tuple(int(i) for i in np.nonzero(closure_mask(G, gens))[0]))


def generating_set(G: FiniteGroup, members: Iterable[int]) -> list[int]:
    """Greedy generators: scan ``members`` in order, keep each one not yet spanned."""
    gens: list[int] = []
    span = np.zeros(G.order, dtype=bool)
    span[G.identity] = True
    for a in members:
        if not span[a]:
            gens.append(int(a))
            span = closure_mask(G, gens)
    return gens


def element_order(G: FiniteGroup, a: int) -> int:
    G._check(a)
    n, x = 1, a
    while x != G.identity:
        x = G.mul(x, a)
        n += 1
    return n


def cyclic_product(*moduli: int) -> CyclicProductGroup:
    if len(moduli) == 1 and not isinstance(moduli[0], int):
        moduli = tuple(moduli[0])
    return CyclicProductGroup(moduli)


def permutation_closure(degree: int, generators: Iterable[Sequence[int]],
                        cap: int = DEFAULT_CLOSURE_CAP) -> PermutationGroup:
    return PermutationGroup(degree, generators, cap=cap)


def direct_product(G1: FiniteGroup, G2: FiniteGroup, name: str | None = None) -> CayleyGroup:
    """Table-backed G1 x G2 with id(a, b) = a * |G2| + b."""
    n1, n2 = G1.order, G2.order
    if n1 * n2 > MAX_ORDER:
        raise OverflowOrder(f"order {n1 * n2} exceeds {MAX_ORDER}")
    t1, t2 = G1.table(), G2.table()
    table = (t1[:, None, :, None] * n2 + t2[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    ident = G1.identity * n2 + G2.identity
    return CayleyGroup(table, name=name or f"{G1.name}x{G2.name}", identity=ident)


# Cayley and permutation file formats

def validate_table(table: np.ndarray, seed: int = 0) -> int:
    """Check the group axioms on a square table; returns the identity id."""
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        bad = np.argwhere((table < 0) | (table >= n))[0]
        raise NotAGroup("closure", (int(bad[0]), int(bad[1])))
    e = _find_identity(table)
    for a in range(n):
        right = np.nonzero(table[a] == e)[0]
        if right.size != 1 or table[right[0], a] != e:
            raise NotAGroup("inverse", (a,))
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        left = table[table, :]                     # (ab)c indexed [a, b, c]
        right = table[:, table]                    # a(bc) indexed [a, b, c]
        bad = np.argwhere(left != right)
        if bad.size:
            raise NotAGroup("associativity", tuple(int(v) for v in bad[0]))
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, 10 * n))
        fails = np.nonzero(table[table[a, b], c] != table[a, table[b, c]])[0]
        if fails.size:
            i = fails[0]
            raise NotAGroup("associativity", (int(a[i]), int(b[i]), int(c[i])))
    return e


def load_cayley_table(text: str, name: str = "G") -> CayleyGroup:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise NonSquareTable("first line must hold the group order")
    try:
        n = int(lines[0][0])
        rows = [[int(v) for v in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise NonSquareTable(str(exc)) from None
    if n < 1 or len(rows) != n or any(len(r) != n for r in rows):
        raise NonSquareTable(f"expected {n} rows of {n} entries")
    table = np.array(rows, dtype=np.int64)
    e = validate_table(table)
    return CayleyGroup(table, name=name, identity=e)


def dump_cayley_table(G: FiniteGroup) -> str:
    t = G.table()
    body = "\n".join(" ".join(map(str, row)) for row in t.tolist())
    return f"{G.order}\n{body}\n"


def load_permutation_file(text: str, cap: int = DEFAULT_CLOSURE_CAP) -> PermutationGroup:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2 or lines[0][0] != "perm":
        raise ValueError("permutation file must start with 'perm d'")
    d = int(lines[0][1])
    gens = [[int(v) for v in ln] for ln in lines[1:]]
    return permutation_closure(d, gens, cap=cap)
