import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import elements, groups

from fitkit.groups import (
    Character,
    GroupInputError,
    InertiaConfig,
    PrimarySplit,
    characters,
    cyclic_decomposition,
    is_cyclic,
    p_rank,
    quotient_group,
    subgroup_generated,
    sylow_split,
)
from fitkit.groups import (
    FiniteAbelianGroup as FAG,
)
from fitkit.rings import CycloGroupRing, cyclo_group_ring

C3, C9, C33 = FAG((3,)), FAG((9,)), FAG((3, 3))


def test_subgroup_generated_examples():
    assert subgroup_generated(C33, [(1, 0)]).order == 3
    assert subgroup_generated(C33, [(1, 0), (0, 1)]).order == 9
    assert subgroup_generated(C9, [(3,)]).elements == ((0,), (3,), (6,))


def test_quotient_examples():
    Q, _ = quotient_group(C9, subgroup_generated(C9, [(3,)]))
    assert Q.order == 3 and is_cyclic(Q.whole())
    Q, project = quotient_group(C33, subgroup_generated(C33, [(1, 1)]))
    assert Q.order == 3
    assert project((1, 1)) == Q.identity
    Q, _ = quotient_group(C3, C3.whole())
    assert Q.order == 1


def test_is_cyclic():
    assert is_cyclic(C9.whole())
    assert not is_cyclic(C33.whole())
    assert is_cyclic(C33.trivial())
    assert is_cyclic(FAG((3, 5)).whole())


def test_cyclic_decomposition_examples():
    dec = cyclic_decomposition(FAG((3, 9)).whole())
    assert dec.orders == (9, 3) and dec.s == 2
    dec = cyclic_decomposition(C3.whole(), pad_to=3)
    assert dec.orders == (3, 1, 1) and dec.s == 3
    dec = cyclic_decomposition(C33.trivial(), pad_to=2)
    assert dec.orders == (1, 1)


def test_p_rank_examples():
    assert p_rank(FAG((3, 9)).whole(), 3) == 2
    assert p_rank(FAG((5,)).whole(), 3) == 0
    assert p_rank(FAG((3, 3, 5)).whole(), 3) == 2


@pytest.mark.parametrize(
    "factors,p,orders",
    [((3, 5), 3, (3, 5)), ((9,), 3, (9, 1)), ((7,), 3, (1, 7))],
)
def test_sylow_split_examples(factors, p, orders):
    Gp, Gq = sylow_split(FAG(factors), p)
    assert (Gp.order, Gq.order) == orders


def test_characters_examples():
    assert len(characters(C3)) == 3
    chars = characters(FAG((2, 2)))
    assert len(chars) == 4 and all(c.order <= 2 for c in chars)


def _character_sum(psi):
    ring = cyclo_group_ring(psi.order, FAG(()))
    total = ring.zero
    for g in psi.group.elements:
        total = ring.add(total, ring.basis_vector(psi.exponent_at(g), ()))
    return total


@given(groups(max_order=24))
def test_character_orthogonality(G):
    for psi in characters(G):
        total = _character_sum(psi)
        ring = cyclo_group_ring(psi.order, FAG(()))
        if psi.order == 1:
            assert total == ring.scalar(G.order)
        else:
            assert total == ring.zero


@given(groups(max_order=40))
def test_decomposition_is_a_bijection(G):
    H = G.whole()
    dec = cyclic_decomposition(H)
    prod = 1
    for n in dec.orders:
        prod *= n
    assert prod == H.order
    image = set()
    for exps in itertools.product(*(range(n) for n in dec.orders)):
        x = G.identity
        for e, g in zip(exps, dec.generators):
            x = G.add(x, G.scale(e, g))
        image.add(x)
    assert image == set(H.elements)


@given(groups(max_order=40), st.data())
def test_subgroup_closed_and_quotient_order(G, data):
    gens = data.draw(st.lists(elements(G), max_size=2))
    H = subgroup_generated(G, gens)
    for a in H.elements:
        for b in H.elements:
            assert G.add(a, b) in H
    Q, project = quotient_group(G, H)
    assert Q.order * H.order == G.order
    for a in gens:
        assert project(a) == Q.identity


@given(groups(max_order=60), st.sampled_from([3, 5, 7]))
def test_primary_split_roundtrip(G, p):
    split = PrimarySplit(G, p)
    assert split.p_part.order * split.prime_to_p.order == G.order
    for x in G.elements:
        assert split.join(*split.split(x)) == x


def test_character_needs_matching_exponents():
    with pytest.raises(GroupInputError):
        Character(C33, (1,))


def test_inertia_config_invariants():
    cfg = InertiaConfig.build(C9, [(3,)], [(1,)], (1,))
    assert cfg.D.order == 9 and cfg.I.order == 3 and cfg.s == 1
    with pytest.raises(GroupInputError):
        InertiaConfig.build(C9, [(3,)], [(1,)], (3,))
    with pytest.raises(GroupInputError):
        InertiaConfig.build(C33, [(1, 0)], [(0, 1)], (2, 0))


def test_cyclotomic_ring_reduces_modulo_phi():
    ring = cyclo_group_ring(3, FAG(()))
    assert isinstance(ring, CycloGroupRing)
    z = ring.basis_vector(1, ())
    # 1 + z + z^2 = 0
    assert ring.add(ring.add(ring.one, z), ring.mul(z, z)) == ring.zero
