"""Small named groups used by tests, the CLI and benchmarks."""

from __future__ import annotations

import itertools

from .groups import (
    CayleyGroup,
    FiniteGroup,
    PermutationGroup,
    cyclic_product,
    direct_product,
    permutation_closure,
)


def cycle(degree: int, *points: int) -> tuple[int, ...]:
    """Permutation of 0..degree-1 sending points[i] to points[i+1] cyclically."""
    img = list(range(degree))
    for a, b in zip(points, points[1:] + points[:1]):
        img[a] = b
    return tuple(img)


def symmetric(n: int) -> PermutationGroup:
    gens = [cycle(n, 0, 1)]
    if n > 2:
        gens.append(cycle(n, *range(n)))
    G = permutation_closure(n, gens if n > 1 else [tuple(range(n))])
    G.name = f"S_{n}"
    return G


def alternating(n: int) -> PermutationGroup:
    gens = [cycle(n, 0, 1, i) for i in range(2, n)] or [tuple(range(n))]
    G = permutation_closure(n, gens)
    G.name = f"A_{n}"
    return G


def dihedral(n: int) -> PermutationGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    G = permutation_closure(n, [rot, ref])
    G.name = f"D_{n}"
    return G


def quaternion() -> CayleyGroup:
    # elements (s, u) with s in {+1, -1} encoded 0/1 and u in {1, i, j, k}
    units = {(0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
             (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
             (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
             (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0)}
    elems = list(itertools.product(range(2), range(4)))
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = units[(u1, u2)]
            row.append(index[((s1 + s2 + s) % 2, u)])
        table.append(row)
    return CayleyGroup(table, name="Q_8")


def dicyclic3() -> PermutationGroup:
    """Z_3 semidirect Z_4 (order 12) as a permutation group on 7 points."""
    a = cycle(7, 0, 1, 2)
    b = tuple([0, 2, 1, 4, 5, 6, 3])  # inverts a, 4-cycle on the tail
    G = permutation_closure(7, [a, b])
    G.name = "Dic_3"
    return G


def groups_up_to_12() -> list[FiniteGroup]:
    """One representative of each isomorphism class of groups of order 1..12."""
    out: list[FiniteGroup] = [cyclic_product(1)]
    abelian = [(2,), (3,), (4,), (2, 2), (5,), (2, 3), (7,), (8,), (2, 4), (2, 2, 2),
               (9,), (3, 3), (2, 5), (11,), (4, 3), (2, 2, 3)]
    out += [cyclic_product(*m) for m in abelian]
    out += [symmetric(3), dihedral(4), quaternion(), dihedral(5), alternating(4),
            dihedral(6), dicyclic3()]
    return out


def named_group(spec: str) -> FiniteGroup:
    """Parse names like ``Z12``, ``Z2^8``, ``Z4xZ3``, ``S4``, ``D8``, ``Q8``, ``A4``, ``D8xZ8``."""
    parts = spec.replace(" ", "").split("x")
    groups = [_named_factor(p) for p in parts]
    G = groups[0]
    for H in groups[1:]:
        G = direct_product(G, H)
    G.name = spec
    return G


def _named_factor(s: str) -> FiniteGroup:
    kind, rest = s[0].upper(), s[1:]
    if kind == "Z":
        if "^" in rest:
            m, e = rest.split("^")
            return cyclic_product(*([int(m)] * int(e)))
        return cyclic_product(int(rest))
    if kind == "S":
        return symmetric(int(rest))
    if kind == "A":
        return alternating(int(rest))
    if kind == "D":
        return dihedral(int(rest))
    if kind == "Q" and rest == "8":
        return quaternion()
    raise ValueError(f"unknown group name {s!r}")
