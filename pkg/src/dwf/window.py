"""Coset windows spanning many multiplication triples.

Given an abelian subgroup H = <g_1> x ... x <g_tau> of G, a pair of coset
representatives (ell, r) and parameters (m, t, rho), every x in H defines

    A1(ell x) = { ell x g_1^s_1 ... g_rho^s_rho g_{rho+1}^s : s_i < m, s < t } minus {ell x}
    A2(y r)   = { y g_1^s_1 ... g_rho^s_rho g_{rho+1}^s r }                      minus {y r}

Both have w = t m^rho - 1 elements, |A1 A2| <= 2w, and each pair in
ell H x H r lies in exactly w^2 of the |H|^2 windows A1(ell x) x A2(y r).
Averaging over windows then gives one with at least dens * w^2 pairs of S,
spanned by the at most 4w elements A1 u A2 u A1 A2.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .abelian import (
    AbelianDecomposition,
    RegimeReport,
    decompose_abelian,
    find_large_abelian_subgroup,
    regime_report,
    reorder_factors,
)
from .errors import (
    GuaranteeViolated,
    InfeasibleParameters,
    InsufficientCosetSpace,
    IntervalTooLarge,
    ProductBoundViolated,
)
from .groups import CyclicProductGroup, FiniteGroup, Subgroup
from .pairs import PairSet

LARGE_FACTOR = "large_factor"
POPULAR_FACTOR = "popular_factor"
# rows of the count matrix handled per kernel call; fixed so results never
# depend on how work is split between threads
SCAN_CHUNK = 256


@dataclass(frozen=True)
class WindowParams:
    case: str
    m: int
    t: int
    rho: int
    k: int
    window_size: int
    decomposition: AbelianDecomposition = field(repr=False)
    ell: int | None = None
    r: int | None = None
    degraded: bool = False

    @property
    def group(self) -> FiniteGroup:
        return self.decomposition.group

    @property
    def subgroup(self) -> Subgroup:
        return self.decomposition.subgroup


@dataclass(frozen=True)
class Witness:
    k: int
    case: str
    ell: int
    r: int
    x: int
    y: int
    window_size: int
    a1: tuple[int, ...]
    a2: tuple[int, ...]
    product_set: tuple[int, ...]
    spanning_set: tuple[int, ...]
    triples: tuple[tuple[int, int, int], ...]
    triple_count: int
    guarantee: int
    # |S n (ell H x H r)| and |H|: the exact pigeonhole inputs
    window_pairs: int
    h_order: int

    @property
    def window_density(self) -> Fraction:
        return Fraction(self.window_pairs, self.h_order ** 2)


def _ilog(k: int, m: int) -> int:
    """Largest rho with m**rho <= k."""
    rho, p = 0, m
    while p <= k:
        rho += 1
        p *= m
    return rho


def select_parameters(k: int, D: AbelianDecomposition, check_space: bool = True) -> WindowParams:
    """Choose (case, m, t, rho) for window size k on the subgroup described by D.

    Returns params with ell and r unset. Unless ``check_space`` is false,
    the ambient group must hold at least 4(w+1) elements, room for the
    spanning set; the window properties themselves do not need it.
    """
    if D.tau == 0:
        raise InfeasibleParameters("trivial subgroup: no cyclic factors to build windows from")
    D = reorder_factors(D, k)
    degraded = False
    if D.factors[0] > k:
        case, m, t, rho = LARGE_FACTOR, D.factors[0], k, 0
    else:
        case = POPULAR_FACTOR
        m, lam = D.popularity()
        rho_eq = _ilog(k, m)
        rho = min(rho_eq, lam - 1)
        degraded = rho != rho_eq
        t = min(m - 1, k // m ** rho)
    w = t * m ** rho - 1
    if w < 1:
        raise InfeasibleParameters(
            f"window size {w} < 1 for k={k}, factors={list(D.factors)} "
            f"(case={case}, m={m}, t={t}, rho={rho})")
    if check_space and D.group.order < 4 * (w + 1):
        raise InsufficientCosetSpace(
            f"|G|={D.group.order} < 4*(w+1)={4 * (w + 1)} for k={k}, factors={list(D.factors)}")
    return WindowParams(case, m, t, rho, k, w, D, degraded=degraded)


def box_offsets(params: WindowParams) -> np.ndarray:
    """g_1^s_1 ... g_rho^s_rho g_{rho+1}^s over the box, identity removed."""
    D, G = params.decomposition, params.group
    elems = np.array([G.identity], dtype=np.int64)
    ranges = [params.m] * params.rho + [params.t]
    for g, n in zip(D.generators, ranges):
        powers = np.empty(n, dtype=np.int64)
        powers[0] = G.identity
        for j in range(1, n):
            powers[j] = G.mul(int(powers[j - 1]), g)
        elems = G.mul_many(elems[:, None], powers[None, :]).ravel()
    elems = np.unique(elems)
    return elems[elems != G.identity]


def _ell_r(params: WindowParams) -> tuple[int, int]:
    e = params.group.identity
    return (e if params.ell is None else params.ell, e if params.r is None else params.r)


def build_a1(params: WindowParams, x: int, offsets: np.ndarray | None = None) -> frozenset[int]:
    G = params.group
    ell, _ = _ell_r(params)
    offs = box_offsets(params) if offsets is None else offsets
    return frozenset(G.mul_many(G.mul(ell, x), offs).tolist())


def build_a2(params: WindowParams, y: int, offsets: np.ndarray | None = None) -> frozenset[int]:
    G = params.group
    _, r = _ell_r(params)
    offs = box_offsets(params) if offsets is None else offsets
    return frozenset(G.mul_many(G.mul_many(y, offs), r).tolist())


def product_set(a1, a2, G: FiniteGroup) -> frozenset[int]:
    u = np.fromiter(a1, dtype=np.int64)
    v = np.fromiter(a2, dtype=np.int64)
    prod = frozenset(G.mul_many(u[:, None], v[None, :]).ravel().tolist()) if u.size and v.size \
        else frozenset()
    w = max(len(a1), len(a2))
    if len(prod) > 2 * w:
        raise ProductBoundViolated(f"|A1 A2| = {len(prod)} > 2w = {2 * w}")
    return prod


def count_window(S: PairSet, params: WindowParams, x: int, y: int) -> int:
    a1 = sorted(build_a1(params, x))
    a2 = sorted(build_a2(params, y))
    if not a1 or not a2:
        return 0
    return int(S.bits[np.ix_(a1, a2)].sum())


def choose_coset_pair(S: PairSet, G: FiniteGroup, H: Subgroup) -> tuple[int, int, Fraction]:
    """(ell, r) maximising |S n (ell H x H r)|, reps are minimal ids, ties to smaller (ell, r)."""
    ids = np.arange(G.order, dtype=np.int64)
    h = np.array(H.members, dtype=np.int64)
    left_rep = G.mul_many(ids[:, None], h[None, :]).min(axis=1)
    right_rep = G.mul_many(h[None, :], ids[:, None]).min(axis=1)
    lreps, lidx = np.unique(left_rep, return_inverse=True)
    rreps, ridx = np.unique(right_rep, return_inverse=True)
    a, b = np.nonzero(S.bits)
    counts = np.bincount(lidx[a] * len(rreps) + ridx[b], minlength=len(lreps) * len(rreps))
    best = int(np.argmax(counts))
    ell, r = int(lreps[best // len(rreps)]), int(rreps[best % len(rreps)])
    return ell, r, Fraction(int(counts[best]), H.order ** 2)


def with_cosets(params: WindowParams, ell: int, r: int) -> WindowParams:
    return replace(params, ell=ell, r=r)


def _window_matrix(S: PairSet, params: WindowParams):
    """Restriction T[i, j] = S(ell h_i, h_j r) and window index table idx[x, s] = pos(h_x d_s)."""
    G, H = params.group, params.subgroup
    ell, r = _ell_r(params)
    h = np.array(H.members, dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[h] = np.arange(h.size)
    idx = pos[G.mul_many(h[:, None], box_offsets(params)[None, :])]
    rows = G.mul_many(ell, h)
    cols = G.mul_many(h, r)
    T = S.bits[np.ix_(rows, cols)].astype(np.int32)
    return h, idx, T


def _scan_rows(T: np.ndarray, idx: np.ndarray, lo: int, hi: int) -> tuple[int, int]:
    """Best (count, flat index) over windows with x-index in [lo, hi)."""
    R = np.zeros((hi - lo, T.shape[1]), dtype=np.int32)
    for s in range(idx.shape[1]):
        R += T[idx[lo:hi, s], :]
    C = np.zeros((hi - lo, T.shape[1]), dtype=np.int32)
    for s in range(idx.shape[1]):
        C += R[:, idx[:, s]]
    flat = int(np.argmax(C))
    return int(C.flat[flat]), lo * T.shape[1] + flat


def window_counts(S: PairSet, params: WindowParams) -> np.ndarray:
    """Full |H| x |H| matrix of window counts, indexed by sorted member position."""
    _, idx, T = _window_matrix(S, params)
    R = sum(T[idx[:, s], :] for s in range(idx.shape[1]))
    return sum(R[:, idx[:, s]] for s in range(idx.shape[1]))


def find_best_window(S: PairSet, params: WindowParams, threads: int = 1) -> Witness:
    """Exact argmax over all |H|^2 windows, ties to the smallest (x, y)."""
    G = params.group
    ell, r = _ell_r(params)
    h, idx, T = _window_matrix(S, params)
    n = h.size
    chunks = [(lo, min(lo + SCAN_CHUNK, n)) for lo in range(0, n, SCAN_CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _scan_rows(T, idx, *c), chunks))
    else:
        results = [_scan_rows(T, idx, lo, hi) for lo, hi in chunks]
    best, flat = max(results, key=lambda cf: (cf[0], -cf[1]))
    x, y = int(h[flat // n]), int(h[flat % n])

    offs = box_offsets(params)
    a1 = tuple(sorted(build_a1(params, x, offs)))
    a2 = tuple(sorted(build_a2(params, y, offs)))
    prod = tuple(sorted(product_set(a1, a2, G)))
    spanning = tuple(sorted(set(a1) | set(a2) | set(prod)))
    triples = tuple((u, v, G.mul(u, v)) for u in a1 for v in a2 if S.bits[u, v])
    if len(triples) != best:
        raise GuaranteeViolated(f"kernel count {best} != direct count {len(triples)}")

    w = params.window_size
    window_pairs = int(T.sum())
    hh = n * n
    guarantee = (window_pairs * w * w + hh - 1) // hh
    if len(triples) * hh < window_pairs * w * w:
        raise GuaranteeViolated(
            f"count {len(triples)} below averaging bound {window_pairs}*{w}^2/{hh}")
    return Witness(params.k, params.case, ell, r, x, y, w, a1, a2, prod, spanning,
                   triples, len(triples), guarantee, window_pairs, n)


def model_interval_window(G: CyclicProductGroup, k: int, x: int) -> frozenset[int]:
    """{x, x+1, ..., x+k-1} in Z_n, base point kept."""
    if not isinstance(G, CyclicProductGroup) or len(G.moduli) != 1:
        raise TypeError("model_interval_window needs a cyclic group Z_n")
    n = G.order
    if n < 4 * k:
        raise IntervalTooLarge(f"n={n} < 4k={4 * k}")
    G._check(x)
    return frozenset((x + i) % n for i in range(k))


def run_pipeline(G: FiniteGroup, S: PairSet, k: int, threads: int = 1,
                 prefer: str = "order") -> tuple[Witness, RegimeReport]:
    """Abelian subgroup -> decomposition -> parameters -> cosets -> best window."""
    if G.order < 2:
        raise InfeasibleParameters("group must have order >= 2")
    if k < 2:
        raise InfeasibleParameters(f"k={k} < 2")
    if S.group_order != G.order:
        raise ValueError(f"pair set is over order {S.group_order}, group has order {G.order}")
    if S.cardinality == 0:
        raise InfeasibleParameters("pair set is empty")
    H = find_large_abelian_subgroup(G, prefer=prefer)
    D = reorder_factors(decompose_abelian(H), k)
    report = regime_report(G, H, k, D)
    params = select_parameters(k, D)
    ell, r, _ = choose_coset_pair(S, G, H)
    return find_best_window(S, with_cosets(params, ell, r), threads=threads), report

