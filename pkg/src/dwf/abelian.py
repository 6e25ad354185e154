"""Large abelian subgroups and their cyclic prime-power decompositions."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import NotAbelian
from .groups import FiniteGroup, Subgroup, closure_mask, generating_set

EXHAUSTIVE_SEARCH_LIMIT = 24
REGIME_SLACK = 1e-9


@dataclass(frozen=True)
class AbelianDecomposition:
    """H = <g_1> x ... x <g_tau> with |g_i| = factors[i] a prime power.

    ``elements[i]`` is phi of the i-th coordinate tuple in mixed-radix order
    (first coordinate most significant), so phi and its inverse are array lookups.
    """

    subgroup: Subgroup = field(repr=False)
    factors: tuple[int, ...]
    generators: tuple[int, ...]
    elements: np.ndarray = field(repr=False, compare=False)
    # order[i] = index of this factor in the decomposition before any reordering
    order: tuple[int, ...] = ()

    @property
    def tau(self) -> int:
        return len(self.factors)

    @property
    def group(self) -> FiniteGroup:
        return self.subgroup.parent

    def _weights(self) -> list[int]:
        w, out = 1, []
        for m in reversed(self.factors):
            out.append(w)
            w *= m
        return out[::-1]

    def phi(self, coords) -> int:
        idx = sum((int(x) % m) * w for x, m, w in zip(coords, self.factors, self._weights()))
        return int(self.elements[idx])

    def phi_inv(self, a: int) -> tuple[int, ...]:
        hits = np.nonzero(self.elements == a)[0]
        if not hits.size:
            raise ValueError(f"{a} is not in the subgroup")
        idx = int(hits[0])
        return tuple((idx // w) % m for w, m in zip(self._weights(), self.factors))

    def popularity(self) -> tuple[int, int]:
        """(m, lambda): most frequent factor value, ties to the smaller value."""
        if not self.factors:
            return 0, 0
        counts = Counter(self.factors)
        lam = max(counts.values())
        return min(m for m, c in counts.items() if c == lam), lam


@dataclass(frozen=True)
class RegimeReport:
    group_order: int
    h_order: int
    k: int
    # |H| >= k^(3k ln k); the asymptotic size hypothesis of the construction
    asymptotic_regime: bool
    lambda_: int
    rho_max: int
    tau: int
    notes: str = ""


def _all_subgroups(G: FiniteGroup) -> set[tuple[int, ...]]:
    cyclic = {}
    for a in G.elements():
        mask = closure_mask(G, [a])
        cyclic[tuple(np.nonzero(mask)[0].tolist())] = a
    found = set(cyclic)
    frontier = set(cyclic)
    gens = sorted(set(cyclic.values()))
    while frontier:
        nxt = set()
        for members in frontier:
            inside = np.zeros(G.order, dtype=bool)
            inside[list(members)] = True
            for g in gens:
                if inside[g]:
                    continue
                joined = tuple(np.nonzero(closure_mask(G, list(members) + [g]))[0].tolist())
                if joined not in found:
                    found.add(joined)
                    nxt.add(joined)
        frontier = nxt
    return found


def _commutes_with(G: FiniteGroup, a: int) -> np.ndarray:
    ids = np.arange(G.order)
    return G.mul_many(a, ids) == G.mul_many(ids, a)


def _greedy_abelian(G: FiniteGroup) -> set[tuple[int, ...]]:
    ids = np.arange(G.order)
    cent = {}

    def centralizer(a: int) -> np.ndarray:
        if a not in cent:
            cent[a] = _commutes_with(G, a)
        return cent[a]

    center = np.ones(G.order, dtype=bool)
    for g in G.generators():
        center &= centralizer(g)
    zgens = generating_set(G, np.nonzero(center)[0])

    found = set()
    for a in G.elements():
        if center[a] and a != G.identity:
            continue
        gens = zgens + [a]
        inside = closure_mask(G, gens)
        allowed = centralizer(a).copy()
        while True:
            cand = ids[allowed & ~inside]
            if not cand.size:
                break
            c = int(cand[0])
            gens.append(c)
            allowed &= centralizer(c)
            inside = closure_mask(G, gens)
        found.add(tuple(np.nonzero(inside)[0].tolist()))
    return found


def find_large_abelian_subgroup(G: FiniteGroup, prefer: str = "order") -> Subgroup:
    """Largest abelian subgroup found by the search; deterministic.

    Abelian groups return themselves. Groups of order <= 24 are searched
    exhaustively; larger ones grow a maximal abelian subgroup from every
    element inside its centralizer, adjoining the smallest centralising id.
    ``prefer="lambda"`` ranks candidates by the multiplicity of their most
    popular cyclic factor first and by order second.
    """
    if prefer not in ("order", "lambda"):
        raise ValueError(f"unknown preference {prefer!r}")
    if G.is_abelian():
        return Subgroup(G, tuple(range(G.order)))
    if G.order <= EXHAUSTIVE_SEARCH_LIMIT:
        candidates = [m for m in _all_subgroups(G) if Subgroup(G, m).is_abelian()]
    else:
        candidates = list(_greedy_abelian(G))

    def key(members):
        if prefer == "lambda":
            lam = decompose_abelian(Subgroup(G, members)).popularity()[1]
            return (-lam, -len(members), members)
        return (-len(members), members)

    return Subgroup(G, min(candidates, key=key))


def _prime_factors(n: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _cyclic_powers(G: FiniteGroup, g: int, m: int) -> np.ndarray:
    powers = np.empty(m, dtype=np.int64)
    powers[0] = G.identity
    for j in range(1, m):
        powers[j] = G.mul(int(powers[j - 1]), g)
    return powers


def _span_product(G: FiniteGroup, span: np.ndarray, g: int, m: int) -> np.ndarray:
    return G.mul_many(span[:, None], _cyclic_powers(G, g, m)[None, :]).ravel()


def _p_basis(G: FiniteGroup, members: np.ndarray, p: int) -> list[tuple[int, int]]:
    """Basis of an abelian p-group given by ``members``: list of (generator, order)."""
    basis = []
    span_elems = np.array([G.identity], dtype=np.int64)
    in_span = np.zeros(G.order, dtype=bool)
    in_span[G.identity] = True
    while span_elems.size < members.size:
        # order of each member in the quotient by the current span
        qexp = np.zeros(members.size, dtype=np.int64)
        cur = members.copy()
        live = ~in_span[cur]
        while live.any():
            qexp[live] += 1
            cur = G.power_many(cur, p)
            live = ~in_span[cur]
        e = int(qexp.max())
        q = p ** e
        h = int(members[np.nonzero(qexp == e)[0][0]])
        # a representative of the coset h*span whose order equals its quotient order
        coset = G.mul_many(h, span_elems)
        ok = coset[G.power_many(coset, q) == G.identity]
        if not ok.size:  # pragma: no cover - impossible for abelian p-groups
            raise RuntimeError("basis extraction failed")
        g = int(ok.min())
        basis.append((g, q))
        span_elems = _span_product(G, span_elems, g, q)
        in_span[span_elems] = True
    return basis


def _enumerate_phi(G: FiniteGroup, generators, factors) -> np.ndarray:
    elems = np.array([G.identity], dtype=np.int64)
    for g, m in zip(generators, factors):
        elems = _span_product(G, elems, g, m)
    return elems


def decompose_abelian(H: Subgroup) -> AbelianDecomposition:
    """Primary decomposition of an abelian subgroup with an explicit isomorphism.

    Factors are listed prime by prime in ascending order; within one prime,
    in the order the greedy basis extraction found them (non-increasing).
    """
    G = H.parent
    gens = generating_set(G, H.members)
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if G.mul(a, b) != G.mul(b, a):
                raise NotAbelian(a, b)
    members = np.array(H.members, dtype=np.int64)
    factors: list[int] = []
    generators: list[int] = []
    for p, e in _prime_factors(H.order):
        sylow = members[G.power_many(members, p ** e) == G.identity]
        for g, q in _p_basis(G, sylow, p):
            generators.append(g)
            factors.append(q)
    elements = _enumerate_phi(G, generators, factors)
    if np.unique(elements).size != H.order or not np.isin(elements, members).all():
        raise RuntimeError("decomposition is not a bijection onto H")
    return AbelianDecomposition(H, tuple(factors), tuple(generators), elements,
                                tuple(range(len(factors))))


def _is_prime_power(m: int) -> bool:
    f = _prime_factors(m)
    return len(f) == 1


def standard_decomposition(G) -> AbelianDecomposition:
    """Coordinate decomposition of a cyclic product whose moduli are prime powers.

    phi is the identity on coordinates: generator i is the unit vector e_i.
    """
    moduli = getattr(G, "moduli", None)
    if moduli is None or not all(_is_prime_power(m) for m in moduli):
        raise ValueError("standard_decomposition needs a product of prime-power cyclic groups")
    H = Subgroup(G, tuple(range(G.order)))
    gens = tuple(G.weights)
    return AbelianDecomposition(H, tuple(moduli), gens, np.arange(G.order, dtype=np.int64),
                                tuple(range(len(moduli))))


def permute_factors(D: AbelianDecomposition, perm) -> AbelianDecomposition:
    """Decomposition with coordinates listed in the order ``perm`` (old indices)."""
    perm = list(perm)
    if sorted(perm) == list(range(D.tau)) and perm == list(range(D.tau)):
        return D
    factors = tuple(D.factors[i] for i in perm)
    gens = tuple(D.generators[i] for i in perm)
    elements = _enumerate_phi(D.group, gens, factors)
    return AbelianDecomposition(D.subgroup, factors, gens, elements,
                                tuple(D.order[i] for i in perm))


def reorder_factors(D: AbelianDecomposition, k: int) -> AbelianDecomposition:
    """Move the factor the construction needs to the front.

    If some factor exceeds k, the first such factor goes to position 1.
    Otherwise the most popular factor value (ties: smaller value) fills
    positions 1..lambda. Remaining factors keep their relative order.
    """
    idx = list(range(D.tau))
    big = [i for i in idx if D.factors[i] > k]
    if big:
        perm = [big[0]] + [i for i in idx if i != big[0]]
    else:
        m, _ = D.popularity()
        perm = [i for i in idx if D.factors[i] == m] + [i for i in idx if D.factors[i] != m]
    return permute_factors(D, perm)


def regime_report(G: FiniteGroup, H: Subgroup, k: int,
                  decomposition: AbelianDecomposition | None = None) -> RegimeReport:
    D = decomposition if decomposition is not None else decompose_abelian(H)
    _, lam = D.popularity()
    # ln of k^(3k ln k) is 3k (ln k)^2
    lhs = math.log(H.order)
    rhs = 3 * k * math.log(k) ** 2 if k >= 1 else 0.0
    regime = lhs >= rhs * (1 - REGIME_SLACK)
    notes = (
        "Pyber's constant mu and the threshold N(k) are existential and not computed; "
        "the regime flag tests |H| >= k^(3k ln k) only. "
        f"|H| = {H.order}, factors = {list(D.factors)}, tau = {D.tau}, lambda = {lam}."
    )
    return RegimeReport(G.order, H.order, k, regime, lam, max(lam - 1, 0), D.tau, notes)
