"""Command-line interface.

Exit codes:
    run     0 ok, 2 infeasible parameters, 3 guarantee violated
    verify  0 consistent, 1 inconsistent, 4 unreadable input
    lemmas  0 all pass, 1 some fail, 5 cap exceeded
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import abelian, oracle, window
from .errors import (
    CapExceeded,
    GuaranteeViolated,
    InfeasibleParameters,
    NonSquareTable,
    NotAGroup,
    PairFormatError,
    WitnessInconsistent,
    WitnessParseError,
)
from .groups import (
    FiniteGroup,
    cyclic_product,
    dump_cayley_table,
    load_cayley_table,
    load_permutation_file,
)
from .pairs import DensitySpec, density, generate, load_pairs, save_pairs
from .report import format_regime, format_witness, parse_witness

EXIT_OK, EXIT_FAIL, EXIT_INFEASIBLE, EXIT_GUARANTEE, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3, 4, 5


def _add_group_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cyclic", type=int, metavar="N")
    g.add_argument("--product", type=int, nargs="+", metavar="M")
    g.add_argument("--cayley", type=Path, metavar="FILE")
    g.add_argument("--perm", type=Path, metavar="FILE")


def _add_pair_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--pairs", type=Path, metavar="FILE")
    g.add_argument("--bernoulli", type=Fraction, metavar="C")
    g.add_argument("--block", type=Fraction, metavar="C")
    g.add_argument("--full", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def load_group(args) -> FiniteGroup:
    if args.cyclic is not None:
        return cyclic_product(args.cyclic)
    if args.product is not None:
        return cyclic_product(*args.product)
    if args.cayley is not None:
        return load_cayley_table(args.cayley.read_text())
    return load_permutation_file(args.perm.read_text())


def load_pair_set(args, G: FiniteGroup):
    if args.pairs is not None:
        S = load_pairs(args.pairs.read_text())
        if S.group_order != G.order:
            raise PairFormatError(f"pair file is over order {S.group_order}, group has {G.order}")
        return S
    if args.full:
        return generate(G, DensitySpec(Fraction(1), args.seed, "full"))
    if args.bernoulli is not None:
        return generate(G, DensitySpec(args.bernoulli, args.seed, "bernoulli"))
    return generate(G, DensitySpec(args.block, args.seed, "block"))


def cmd_gen_group(args) -> int:
    G = load_group(args)
    text = dump_cayley_table(G)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gen_pairs(args) -> int:
    G = load_group(args)
    text = save_pairs(load_pair_set(args, G))
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_run(args) -> int:
    G = load_group(args)
    S = load_pair_set(args, G)
    try:
        W, R = window.run_pipeline(G, S, args.k, threads=args.threads, prefer=args.prefer)
    except InfeasibleParameters as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except GuaranteeViolated as exc:
        print(f"guarantee violated: {exc}", file=sys.stderr)
        return EXIT_GUARANTEE
    report = format_witness(W)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "witness.txt").write_text(report)
        (args.out / "regime.txt").write_text(format_regime(R))
        (args.out / "group.txt").write_text(dump_cayley_table(G))
        (args.out / "pairs.txt").write_text(save_pairs(S))
    else:
        sys.stdout.write(report)
    print(f"dens {density(S)} window_dens {W.window_density} w {W.window_size} "
          f"guarantee {W.guarantee} count {W.triple_count} |E| {len(W.spanning_set)}",
          file=sys.stderr)
    if W.triple_count < W.guarantee:
        return EXIT_GUARANTEE
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        W = parse_witness(args.witness.read_text())
        G = load_group(args)
        S = load_pair_set(args, G)
    except (OSError, WitnessParseError, PairFormatError, NonSquareTable, NotAGroup, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        span = oracle.recount_witness(S, G, W)
    except WitnessInconsistent as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return EXIT_FAIL
    ok = (W.triple_count >= W.guarantee and span.count >= W.triple_count
          and len(W.spanning_set) <= 4 * W.window_size)
    print(f"{'ok' if ok else 'FAIL'} count {W.triple_count} guarantee {W.guarantee} "
          f"recount {span.count} |E| {len(W.spanning_set)}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_lemmas(args) -> int:
    G = load_group(args)
    cap, mcap = oracle.oracle_caps()
    H = abelian.find_large_abelian_subgroup(G)
    try:
        if H.order > cap:
            raise CapExceeded(f"|H| = {H.order} exceeds lemma cap {cap}")
        D = abelian.decompose_abelian(H)
        params = window.select_parameters(args.k, D, check_space=False)
        rep = oracle.lemma_suite(G, H, params, cap=cap, multiplicity_cap=mcap)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InfeasibleParameters as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"group order {G.order}, |H| = {H.order}, factors {list(params.decomposition.factors)}, "
          f"case {params.case}, m {params.m}, t {params.t}, rho {params.rho}, w {params.window_size}")
    for c in rep.checks:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[c.passed]
        extra = f" counterexample {c.counterexample} ({c.detail})" if c.passed is False else \
            (f" ({c.detail})" if c.detail else "")
        print(f"{status} {c.name}{extra}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def bench_rows(orders=(256, 1024, 4096), k: int = 8, c: Fraction = Fraction(1, 2),
               seed: int = 1, threads: int = 1):
    rows = []
    for n in orders:
        e = n.bit_length() - 1
        G = cyclic_product(*([2] * e))
        S = generate(G, DensitySpec(c, seed, "bernoulli"))
        t0 = time.perf_counter()
        H = abelian.find_large_abelian_subgroup(G)
        D = abelian.reorder_factors(abelian.decompose_abelian(H), k)
        t1 = time.perf_counter()
        params = window.select_parameters(k, D)
        ell, r, _ = window.choose_coset_pair(S, G, H)
        t2 = time.perf_counter()
        W = window.find_best_window(S, window.with_cosets(params, ell, r), threads=threads)
        t3 = time.perf_counter()
        rows.append({"order": n, "decompose_s": t1 - t0, "coset_s": t2 - t1,
                     "window_s": t3 - t2, "total_s": t3 - t0, "w": W.window_size,
                     "count": W.triple_count, "guarantee": W.guarantee})
    return rows


def cmd_bench(args) -> int:
    rows = bench_rows(tuple(args.orders), k=args.k, seed=args.seed, threads=args.threads)
    cols = ["order", "decompose_s", "coset_s", "window_s", "total_s", "w", "count", "guarantee"]
    print("\t".join(cols))
    for row in rows:
        print("\t".join(f"{row[c]:.4f}" if isinstance(row[c], float) else str(row[c]) for c in cols))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dwf", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-group", help="write a Cayley table")
    _add_group_args(p)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_gen_group)

    p = sub.add_parser("gen-pairs", help="write a pair file")
    _add_group_args(p)
    _add_pair_args(p)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_gen_pairs)

    p = sub.add_parser("run", help="build a witness")
    _add_group_args(p)
    _add_pair_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", type=Path, metavar="DIR")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--prefer", choices=["order", "lambda"], default="order",
                   help="rank abelian subgroups by order or by factor multiplicity")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="re-check a witness report")
    p.add_argument("witness", type=Path)
    _add_group_args(p)
    _add_pair_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lemmas", help="exhaustively check the window properties")
    _add_group_args(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("bench", help="time the pipeline stages")
    p.add_argument("--orders", type=int, nargs="+", default=[256, 1024, 4096])
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
