"""Brute-force checks for witnesses and for the window construction.

Nothing here calls into ``dwf.window``: boxes, windows and counts are
rebuilt from the group multiplication and the decomposition generators
alone, so a transcription error on either side shows up as a disagreement.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, SearchSpaceTooLarge, WitnessInconsistent
from .groups import FiniteGroup
from .pairs import PairSet

DEFAULT_CAP = 512
DEFAULT_MULTIPLICITY_CAP = 256
SUBSET_SEARCH_LIMIT = 10**6
# products evaluated per vectorised step of the product-bound check
PRODUCT_BATCH = 1 << 20

SIZE, PRODUCT, INJECTIVE, MULTIPLICITY = "size", "product", "injectivity", "multiplicity"


def oracle_caps() -> tuple[int, int]:
    """(lemma cap, multiplicity cap), both overridden by DWF_ORACLE_CAP."""
    env = os.environ.get("DWF_ORACLE_CAP")
    if env:
        cap = int(env)
        return cap, cap
    return DEFAULT_CAP, DEFAULT_MULTIPLICITY_CAP


@dataclass(frozen=True)
class SpanReport:
    element_set: tuple[int, ...]
    spanned_triples: tuple[tuple[int, int, int], ...]
    count: int


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    passed: bool | None     # None: skipped because of the multiplicity cap
    counterexample: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class LemmaReport:
    checks: tuple[LemmaCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def __getitem__(self, name: str) -> LemmaCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def spanned_triples(S: PairSet, G: FiniteGroup, elements) -> list[tuple[int, int, int]]:
    E = sorted(set(int(e) for e in elements))
    inside = set(E)
    out = []
    for a in E:
        for b in E:
            if S.bits[a, b]:
                ab = G.mul(a, b)
                if ab in inside:
                    out.append((a, b, ab))
    return out


def recount_witness(S: PairSet, G: FiniteGroup, W) -> SpanReport:
    """Check every listed triple and recount what the spanning set spans."""
    E = set(W.spanning_set)
    seen = set()
    for a, b, ab in W.triples:
        if not (0 <= a < G.order and 0 <= b < G.order):
            raise WitnessInconsistent(f"triple ({a}, {b}, {ab}) has ids outside the group")
        if not S.bits[a, b]:
            raise WitnessInconsistent(f"pair ({a}, {b}) is not in S")
        if G.mul(a, b) != ab:
            raise WitnessInconsistent(f"{a}*{b} = {G.mul(a, b)}, listed as {ab}")
        if not {a, b, ab} <= E:
            raise WitnessInconsistent(f"triple ({a}, {b}, {ab}) not inside the spanning set")
        if (a, b) in seen:
            raise WitnessInconsistent(f"pair ({a}, {b}) listed twice")
        seen.add((a, b))
    if W.triple_count != len(W.triples):
        raise WitnessInconsistent(f"count {W.triple_count} != {len(W.triples)} listed triples")
    spanned = spanned_triples(S, G, E)
    return SpanReport(tuple(sorted(E)), tuple(spanned), len(spanned))


# window construction, rebuilt from scratch

def _box(G: FiniteGroup, generators, m: int, t: int, rho: int) -> set[int]:
    box = set()
    for exps in itertools.product(*([range(m)] * rho + [range(t)])):
        g = G.identity
        for gen, e in zip(generators, exps):
            g = G.mul(g, G.power(gen, e))
        box.add(g)
    box.discard(G.identity)
    return box


def _windows(G: FiniteGroup, members, box, ell: int, r: int):
    box = np.array(sorted(box), dtype=np.int64)
    h = np.array(members, dtype=np.int64)
    hb = G.mul_many(h[:, None], box[None, :])
    a1 = G.mul_many(ell, hb)
    a2 = G.mul_many(hb, r)
    return h, a1, a2


def _distinct_per_row(values: np.ndarray) -> np.ndarray:
    if values.shape[1] == 0:
        return np.zeros(values.shape[0], dtype=np.int64)
    srt = np.sort(values, axis=1)
    return 1 + np.count_nonzero(np.diff(srt, axis=1), axis=1)


def _row_unique_mask(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rows sorted, plus a mask keeping the first copy of each value in a row."""
    srt = np.sort(values, axis=1)
    keep = np.ones(srt.shape, dtype=bool)
    keep[:, 1:] = srt[:, 1:] != srt[:, :-1]
    return srt, keep


def lemma_suite(G: FiniteGroup, H, params, cap: int | None = None,
                multiplicity_cap: int | None = None) -> LemmaReport:
    """Exhaustively check the four window properties for every x, y in H.

    ``params`` needs m, t, rho, window_size, decomposition and optionally
    ell, r. Returns the first counterexample per property.
    """
    default_cap, default_mcap = oracle_caps()
    cap = default_cap if cap is None else cap
    mcap = default_mcap if multiplicity_cap is None else multiplicity_cap
    if H.order > cap:
        raise CapExceeded(f"|H| = {H.order} exceeds lemma cap {cap}")
    ell = G.identity if getattr(params, "ell", None) is None else params.ell
    r = G.identity if getattr(params, "r", None) is None else params.r
    w = params.window_size
    box = _box(G, params.decomposition.generators, params.m, params.t, params.rho)
    h, a1, a2 = _windows(G, H.members, box, ell, r)
    checks = []

    # exact window size
    s1 = _distinct_per_row(a1)
    s2 = _distinct_per_row(a2)
    bad = np.nonzero((s1 != w) | (s2 != w))[0]
    if bad.size:
        i = bad[0]
        checks.append(LemmaCheck(SIZE, False, (int(h[i]),),
                                 f"|A1| = {s1[i]}, |A2| = {s2[i]}, expected {w}"))
    else:
        checks.append(LemmaCheck(SIZE, True))

    # product set bound, all (x, y)
    failure = None
    per_x = max(1, PRODUCT_BATCH // max(1, h.size * a1.shape[1] ** 2))
    for lo in range(0, h.size, per_x):
        hi = min(lo + per_x, h.size)
        prods = G.mul_many(a1[lo:hi, None, :, None], a2[None, :, None, :])
        sizes = _distinct_per_row(prods.reshape((hi - lo) * h.size, -1))
        over = np.nonzero(sizes > 2 * w)[0]
        if over.size:
            i, j = divmod(int(over[0]), h.size)
            failure = ((int(h[lo + i]), int(h[j])), f"|A1 A2| = {sizes[over[0]]} > {2 * w}")
            break
    checks.append(LemmaCheck(PRODUCT, failure is None, *(failure or (None, ""))))

    # distinct x give distinct windows
    failure = None
    for rows, label in ((a1, "A1"), (a2, "A2")):
        first = {}
        for i, row in enumerate(rows):
            key = frozenset(row.tolist())
            if key in first:
                failure = ((int(h[first[key]]), int(h[i])), f"{label} windows coincide")
                break
            first[key] = i
        if failure:
            break
    checks.append(LemmaCheck(INJECTIVE, failure is None, *(failure or (None, ""))))

    if H.order > mcap:
        checks.append(LemmaCheck(MULTIPLICITY, None, None,
                                 f"skipped: |H| = {H.order} exceeds cap {mcap}"))
    else:
        hist, first_bad = _multiplicity(G, h, a1, a2, ell, r, w * w)
        if first_bad is None:
            checks.append(LemmaCheck(MULTIPLICITY, True))
        else:
            (a, b), mult = first_bad
            checks.append(LemmaCheck(MULTIPLICITY, False, (a, b),
                                     f"pair lies in {mult} windows, expected {w * w}"))
    return LemmaReport(tuple(checks))


def _multiplicity(G, h, a1, a2, ell, r, expected):
    """Histogram over (a, b) in H^2 of #{(x, y): ell a in A1(ell x), b r in A2(y r)}.

    The two membership conditions involve x and y separately, so the number of
    (x, y) is the product of the per-coordinate counts.
    """
    pos1 = np.full(G.order, -1, dtype=np.int64)
    pos1[G.mul_many(ell, h)] = np.arange(h.size)
    pos2 = np.full(G.order, -1, dtype=np.int64)
    pos2[G.mul_many(h, r)] = np.arange(h.size)
    srt, keep = _row_unique_mask(a1)
    c1 = np.bincount(pos1[srt[keep]], minlength=h.size)
    srt, keep = _row_unique_mask(a2)
    c2 = np.bincount(pos2[srt[keep]], minlength=h.size)
    mult = c1[:, None] * c2[None, :]
    values, counts = np.unique(mult, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    bad = np.argwhere(mult != expected)
    if bad.size:
        i, j = bad[0]
        return hist, ((int(h[i]), int(h[j])), int(mult[i, j]))
    return hist, None


def window_multiplicity_histogram(G: FiniteGroup, H, params, cap: int | None = None) -> dict[int, int]:
    """{multiplicity: number of (a, b) in H^2 with that many windows containing it}."""
    cap = oracle_caps()[1] if cap is None else cap
    if H.order > cap:
        raise CapExceeded(f"|H| = {H.order} exceeds multiplicity cap {cap}")
    ell = G.identity if getattr(params, "ell", None) is None else params.ell
    r = G.identity if getattr(params, "r", None) is None else params.r
    box = _box(G, params.decomposition.generators, params.m, params.t, params.rho)
    h, a1, a2 = _windows(G, H.members, box, ell, r)
    hist, _ = _multiplicity(G, h, a1, a2, ell, r, params.window_size ** 2)
    return hist


# exhaustive optimum

def best_k_subset(S: PairSet, G: FiniteGroup, k: int) -> SpanReport:
    """Exact maximum number of spanned triples over all k-element subsets.

    Depth-first over sorted subsets; a branch is cut when its upper bound
    (current count + open pairs whose product is still choosable + every
    pair touching a future element) cannot beat the incumbent. Ties go to the
    lexicographically smallest subset.
    """
    n = G.order
    k = min(k, n)
    if math.comb(n, k) > SUBSET_SEARCH_LIMIT:
        raise SearchSpaceTooLarge(f"C({n}, {k}) = {math.comb(n, k)} > {SUBSET_SEARCH_LIMIT}")
    table = G.table()
    bits = S.bits
    best = [-1, ()]
    chosen: list[int] = []
    inside = np.zeros(n, dtype=bool)

    def gain(z: int) -> int:
        # pairs of E + {z} that involve z as a factor or as the product
        inside[z] = True
        old = np.array(chosen, dtype=np.int64)
        both = np.append(old, z)
        g = int(np.count_nonzero(bits[z, both] & inside[table[z, both]]))
        g += int(np.count_nonzero(bits[old, z] & inside[table[old, z]]))
        if old.size:
            sub = np.ix_(old, old)
            g += int(np.count_nonzero(bits[sub] & (table[sub] == z)))
        inside[z] = False
        return g

    def open_pairs(last: int) -> int:
        if not chosen:
            return 0
        sub = np.ix_(chosen, chosen)
        prod = table[sub]
        return int(np.count_nonzero(bits[sub] & ~inside[prod] & (prod > last)))

    def dfs(start: int, score: int) -> None:
        p = len(chosen)
        if p == k:
            if score > best[0]:
                best[0], best[1] = score, tuple(chosen)
            return
        last = chosen[-1] if chosen else -1
        bound = score + open_pairs(last) + (k * k - p * p)
        if bound <= best[0]:
            return
        for z in range(start, n - (k - p) + 1):
            g = gain(z)
            chosen.append(z)
            inside[z] = True
            dfs(z + 1, score + g)
            inside[z] = False
            chosen.pop()

    dfs(0, 0)
    E = best[1]
    triples = spanned_triples(S, G, E)
    return SpanReport(tuple(E), tuple(triples), len(triples))
