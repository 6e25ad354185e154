"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` to see the lines next to the
verdicts (they are written past pytest's output capture).
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from dwf.abelian import decompose_abelian, find_large_abelian_subgroup, reorder_factors
from dwf.errors import InfeasibleParameters, InsufficientCosetSpace
from dwf.groups import Subgroup, cyclic_product
from dwf.named import groups_up_to_12, named_group
from dwf.oracle import MULTIPLICITY, best_k_subset, lemma_suite, recount_witness
from dwf.pairs import DensitySpec, generate
from dwf.report import format_witness
from dwf.window import (
    choose_coset_pair,
    find_best_window,
    model_interval_window,
    run_pipeline,
    select_parameters,
    with_cosets,
)

PRIME_POWERS_TO_16 = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
THEOREM_SCALE = 2 ** 10


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n{label}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
        assert ok, f"{label}: {detail}"
    return emit


def abelian_classes(limit=256):
    """Every abelian group of order <= limit whose cyclic factors are at most 16.

    Each isomorphism class appears once, as a sorted tuple of prime powers;
    any product of cyclic groups with factors <= 16 is isomorphic to one of them.
    """
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for ms in frontier:
            for m in PRIME_POWERS_TO_16:
                if ms and m < ms[-1]:
                    continue
                if math.prod(ms) * m <= limit:
                    nxt.append(ms + (m,))
        out += nxt
        frontier = nxt
    return [ms for ms in out if ms]


def whole(G):
    return Subgroup(G, tuple(range(G.order)))


# 1. window properties on every small abelian group

def test_criterion_1_lemma_suite(verdict):
    start = time.perf_counter()
    classes = abelian_classes()
    suites, failures, skipped = 0, [], 0
    for moduli in classes:
        G = cyclic_product(*moduli)
        H = whole(G)
        D = decompose_abelian(H)
        for k in range(2, 13):
            try:
                params = select_parameters(k, reorder_factors(D, k), check_space=False)
            except InfeasibleParameters:
                continue
            rep = lemma_suite(G, H, params, cap=512, multiplicity_cap=256)
            suites += 1
            skipped += rep[MULTIPLICITY].passed is None
            if not rep.passed:
                failures.append((moduli, k, [c for c in rep.checks if c.passed is False]))
    elapsed = time.perf_counter() - start
    ok = not failures and skipped == 0 and elapsed < 60 and len(classes) == 284
    verdict("criterion 1 (window lemmas, abelian order <= 256, k = 2..12)", ok,
            f"{len(classes)} groups, {suites} suites, {len(failures)} failing, "
            f"{skipped} multiplicity skips, {elapsed:.1f} s; first failure {failures[:1]}")


# 2 and 3. seeded instances

INSTANCE_GROUPS = ["Z256", "Z2^8", "Z4^4", "S4", "D8xZ8"]
DENSITIES = [Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)]
SIZES = [4, 8, 16]


def seeded_instances(count=50):
    """Instance i cycles through groups, then densities, then k; seed = i."""
    for i in range(count):
        yield (INSTANCE_GROUPS[i % 5], DENSITIES[(i // 5) % 3], SIZES[(i // 15) % 3], i)


@pytest.fixture(scope="module")
def pipeline_runs():
    groups = {name: named_group(name) for name in INSTANCE_GROUPS}
    runs = []
    for name, c, k, seed in seeded_instances():
        G = groups[name]
        S = generate(G, DensitySpec(c, seed=seed))
        W, R = run_pipeline(G, S, k)
        runs.append((name, c, k, seed, G, S, W, R))
    return runs


def window_pairs_oracle(S, G, W):
    """|S n (ell H x H r)| and |H|, recounted by direct indexing of the pair matrix."""
    H = find_large_abelian_subgroup(G)
    left = [G.mul(W.ell, h) for h in H.members]
    right = [G.mul(h, W.r) for h in H.members]
    return int(S.bits[np.ix_(left, right)].sum()), H.order


def test_criterion_2_guarantee(pipeline_runs, verdict):
    bad = []
    combos = set()
    for name, c, k, seed, G, S, W, R in pipeline_runs:
        combos.add((name, c, k))
        pairs, h = window_pairs_oracle(S, G, W)
        w = W.window_size
        ok = (pairs == W.window_pairs and h == W.h_order
              and W.triple_count * h * h >= pairs * w * w
              and len(W.spanning_set) <= 4 * w <= 4 * k)
        if not ok:
            bad.append((name, c, k, seed))
    ok = len(pipeline_runs) == 50 and len(combos) == 45 and not bad
    verdict("criterion 2 (count * |H|^2 >= window pairs * w^2, |E| <= 4w <= 4k)", ok,
            f"{len(pipeline_runs)} instances over {len(combos)} (group, c, k) combinations, "
            f"violations {bad}")


def test_criterion_3_constant_form(pipeline_runs, verdict):
    bad = []
    for name, c, k, seed, G, S, W, R in pipeline_runs:
        spanned = recount_witness(S, G, W).count
        h2 = W.h_order ** 2
        k_small = 4 * W.window_size
        # spanned >= (window_pairs / |H|^2) * k^2 / 2^10, cross-multiplied
        ok = (len(W.spanning_set) <= k_small <= 4 * k
              and spanned * THEOREM_SCALE * h2 >= W.window_pairs * k * k
              and spanned * THEOREM_SCALE * h2 >= W.window_pairs * k_small * k_small)
        if not ok:
            bad.append((name, c, k, seed, spanned))
    verdict("criterion 3 (spans >= c_window k^2 / 2^10 with <= 4w elements)", not bad,
            f"{len(pipeline_runs)} instances, violations {bad}")


def test_regime_flag_false(pipeline_runs, verdict):
    flagged = [(name, k) for name, c, k, seed, G, S, W, R in pipeline_runs if R.asymptotic_regime]
    verdict("regime flag false on every desk-scale instance", not flagged,
            f"{len(pipeline_runs)} instances, flagged {flagged}")


# 4. oracle equivalence on groups of order <= 12

def double_loop(S, G, E):
    E = set(E)
    return sum(1 for a in E for b in E if S.bits[a, b] and G.mul(a, b) in E)


def test_criterion_4_oracle_equivalence(verdict):
    start = time.perf_counter()
    k = 5
    pipeline, relaxed, no_window, bad = 0, 0, [], []
    for G in groups_up_to_12():
        for seed in range(10):
            S = generate(G, DensitySpec(Fraction(1, 2), seed=seed))
            try:
                W, _ = run_pipeline(G, S, k)
                pipeline += 1
            except InsufficientCosetSpace:
                # the window exists but the group is too small to hold 4(w+1)
                # elements: build it without the space requirement and check it all the same
                H = find_large_abelian_subgroup(G)
                params = select_parameters(k, reorder_factors(decompose_abelian(H), k), check_space=False)
                ell, r, _ = choose_coset_pair(S, G, H)
                W = find_best_window(S, with_cosets(params, ell, r))
                relaxed += 1
            except InfeasibleParameters:
                no_window.append(G.name)
                continue
            rep = recount_witness(S, G, W)
            best = best_k_subset(S, G, 4 * W.window_size).count
            if not (rep.count == double_loop(S, G, W.spanning_set)
                    and best >= rep.count >= W.triple_count):
                bad.append((G.name, seed))
    elapsed = time.perf_counter() - start
    ok = not bad and pipeline > 0 and elapsed < 120
    verdict("criterion 4 (best k-subset >= pipeline count, recount == double loop)", ok,
            f"{pipeline} pipeline witnesses, {relaxed} space-relaxed witnesses, "
            f"no window of size >= 1 for {sorted(set(no_window))}, "
            f"{elapsed:.1f} s, mismatches {bad}")


# 5. the cyclic interval model

def test_criterion_5_interval_model(verdict):
    bad = []
    cases = 0
    for n in range(8, 65):
        G = cyclic_product(n)
        for k in range(1, n // 4 + 1):
            cases += 1
            A = np.array([sorted(model_interval_window(G, k, x)) for x in range(n)])
            sizes = [len(set(row)) for row in A.tolist()]
            sums = (A[:, None, :, None] + A[None, :, None, :]) % n
            srt = np.sort(sums.reshape(n * n, k * k), axis=1)
            sum_sizes = 1 + np.count_nonzero(np.diff(srt, axis=1), axis=1) if k > 1 \
                else np.ones(n * n, dtype=int)
            injective = len({tuple(row) for row in A.tolist()}) == n
            member = np.zeros((n, n), dtype=np.int64)
            member[np.repeat(np.arange(n), k), A.ravel()] = 1
            # windows (x, y) containing (a, b), summed over every x and y
            mult = member.T @ np.ones((n, n), dtype=np.int64) @ member
            if not (all(s == k for s in sizes) and (sum_sizes == 2 * k - 1).all()
                    and injective and (mult == k * k).all()):
                bad.append((n, k))
    verdict("criterion 5 (interval model: sizes, sumsets, injectivity, multiplicity)", not bad,
            f"{cases} (n, k) cases, failures {bad}")


# 6. full pair set

SHARPNESS_GROUPS = ["Z64", "Z256", "Z2^8", "Z4^4", "S4", "D8xZ8", "Z4xZ3", "A4", "Z3^3"]


def test_criterion_6_full_sharpness(verdict):
    bad, runs = [], 0
    for name in SHARPNESS_GROUPS:
        G = named_group(name)
        S = generate(G, DensitySpec(Fraction(1), mode="full"))
        for k in (2, 3, 4, 5, 8, 16):
            try:
                W, _ = run_pipeline(G, S, k)
            except InfeasibleParameters:
                continue
            runs += 1
            if W.triple_count != W.window_size ** 2 or W.guarantee != W.window_size ** 2:
                bad.append((name, k, W.triple_count, W.window_size))
    verdict("criterion 6 (S = G x G gives count = w^2)", not bad and runs > 0,
            f"{runs} runs, failures {bad}")


# 7. determinism

DETERMINISM_CONFIGS = [("Z2^10", Fraction(1, 2), 8, 7), ("D8xZ8", Fraction(1, 4), 16, 3),
                       ("Z4^5", Fraction(1, 8), 16, 11)]


def test_criterion_7_determinism(verdict):
    differing = []
    for name, c, k, seed in DETERMINISM_CONFIGS:
        reports = set()
        for threads, _ in itertools.product((1, 2, 8), range(5)):
            G = named_group(name)
            S = generate(G, DensitySpec(c, seed=seed))
            W, _ = run_pipeline(G, S, k, threads=threads)
            reports.add(format_witness(W).encode())
        if len(reports) != 1:
            differing.append(name)
    verdict("criterion 7 (byte-identical reports for threads 1, 2, 8 over 5 repeats)", not differing,
            f"{len(DETERMINISM_CONFIGS)} configs x 15 runs, differing {differing}")
