import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwf.errors import IdOutOfRange, NonSquareTable, NotAGroup, OverflowOrder
from dwf.groups import (
    closure_mask,
    cyclic_product,
    direct_product,
    dump_cayley_table,
    element_order,
    generate_subgroup,
    load_cayley_table,
    load_permutation_file,
    validate_table,
)
from dwf.named import dihedral, groups_up_to_12, quaternion, symmetric

from conftest import compose, s3_table_text

# order-5 Latin square with identity 0 that is not associative
LOOP5 = "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n"


def test_mul_cyclic(z6):
    assert z6.mul(2, 5) == 1
    assert all(z6.mul(z6.identity, a) == a for a in z6.elements())


def test_mul_out_of_range(z6):
    with pytest.raises(IdOutOfRange):
        z6.mul(6, 0)
    with pytest.raises(IdOutOfRange):
        z6.inv(-1)


def test_s3_composition_by_hand(s3_table):
    G, perms = s3_table
    # points 1,2,3 are 0,1,2
    t12, t13, c132 = (1, 0, 2), (2, 1, 0), (2, 0, 1)
    assert compose(t12, t13) == c132
    idx = {p: i for i, p in enumerate(perms)}
    assert G.mul(idx[t12], idx[t13]) == idx[c132]
    assert G.order == 6 and not G.is_abelian()


def test_s3_backends_agree(s3_table, s3_perm):
    G, perms = s3_table
    for a, b in itertools.product(range(6), repeat=2):
        pa, pb = s3_perm.element(a), s3_perm.element(b)
        ab = s3_perm.element(s3_perm.mul(a, b))
        assert ab == compose(pa, pb)
        assert perms[G.mul(perms.index(pa), perms.index(pb))] == ab


def test_load_z2():
    G = load_cayley_table("2\n0 1\n1 0\n")
    assert G.order == 2 and G.identity == 0


def test_non_associative_latin_square():
    table = np.array([[int(v) for v in ln.split()] for ln in LOOP5.splitlines()[1:]])
    # Latin square with identity 0
    assert all(sorted(r) == list(range(5)) for r in table.tolist())
    assert all(sorted(c) == list(range(5)) for c in table.T.tolist())
    bad = [(a, b, c) for a, b, c in itertools.product(range(5), repeat=3)
           if table[table[a, b], c] != table[a, table[b, c]]]
    assert bad
    with pytest.raises(NotAGroup) as info:
        load_cayley_table(LOOP5)
    assert info.value.axiom == "associativity"
    a, b, c = info.value.witness
    assert table[table[a, b], c] != table[a, table[b, c]]


@pytest.mark.parametrize("text", ["", "3\n0 1 2\n1 2 0\n", "2\n0 1\n1\n", "x\n0\n"])
def test_non_square(text):
    with pytest.raises(NonSquareTable):
        load_cayley_table(text)


def test_no_identity_or_inverse():
    with pytest.raises(NotAGroup):
        load_cayley_table("2\n1 0\n0 0\n")
    with pytest.raises(NotAGroup):
        load_cayley_table("2\n0 1\n1 1\n")


def test_sampled_associativity_catches_large_fault():
    G = cyclic_product(80)
    t = G.table().copy()
    # swap two entries of a row: still closed, breaks associativity widely
    t[[3, 7]] = t[[7, 3]]
    with pytest.raises(NotAGroup):
        validate_table(t)


def test_cyclic_product_ids():
    G = cyclic_product(2, 3)
    assert G.order == 6
    assert G.encode((1, 2)) == 5
    assert G.decode(5) == (1, 2)
    with pytest.raises(OverflowOrder):
        cyclic_product(2 ** 40, 2 ** 40)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=4), st.data())
def test_cyclic_product_componentwise(moduli, data):
    G = cyclic_product(*moduli)
    a = data.draw(st.integers(0, G.order - 1))
    b = data.draw(st.integers(0, G.order - 1))
    xa, xb = G.decode(a), G.decode(b)
    expect = tuple((u + v) % m for u, v, m in zip(xa, xb, moduli))
    assert G.decode(G.mul(a, b)) == expect
    assert G.mul(a, G.inv(a)) == G.identity
    # mixed radix: first coordinate most significant
    weight, total = 1, 0
    for x, m in reversed(list(zip(xa, moduli))):
        total += x * weight
        weight *= m
    assert total == a


@pytest.mark.parametrize("G", groups_up_to_12(), ids=lambda g: g.name)
def test_small_groups_are_groups(G):
    t = G.table()
    assert validate_table(t) == G.identity
    ids = np.arange(G.order)
    assert (G.mul_many(ids, G.inv_many(ids)) == G.identity).all()


def test_groups_up_to_12_distinct_classes():
    def invariant(G):
        orders = sorted(element_order(G, a) for a in G.elements())
        return G.order, G.is_abelian(), tuple(orders)
    inv = [invariant(G) for G in groups_up_to_12()]
    assert len(inv) == 24
    assert len(set(inv)) == 24


def test_power_and_order():
    G = dihedral(5)
    assert G.order == 10
    assert sorted(element_order(G, a) for a in G.elements()) == [1] + [2] * 5 + [5] * 4
    for a in G.elements():
        assert G.power(a, element_order(G, a)) == G.identity


def test_quaternion():
    Q = quaternion()
    assert Q.order == 8 and not Q.is_abelian()
    assert sorted(element_order(Q, a) for a in Q.elements()) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_permutation_file_s4():
    G = load_permutation_file("perm 4\n1 0 2 3\n1 2 3 0\n")
    assert G.order == 24
    assert G.element(G.identity) == (0, 1, 2, 3)


def test_subgroup_closure():
    G = symmetric(4)
    H = generate_subgroup(G, [G.id_of((1, 0, 2, 3)), G.id_of((0, 1, 3, 2))])
    assert H.order == 4 and H.is_abelian()
    assert list(H.members) == sorted(H.members)
    assert closure_mask(G, []).sum() == 1


def test_direct_product_and_dump_roundtrip():
    G = direct_product(cyclic_product(2), symmetric(3))
    assert G.order == 12 and not G.is_abelian()
    again = load_cayley_table(dump_cayley_table(G))
    assert np.array_equal(again.table(), G.table())


def test_s3_text_is_valid():
    text, _ = s3_table_text()
    assert load_cayley_table(text).order == 6
