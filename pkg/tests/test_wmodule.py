import pytest
from hypothesis import given
from hypothesis import strategies as st

from fitkit.groups import FiniteAbelianGroup as FAG
from fitkit.groups import GroupInputError, InertiaConfig, subgroup_generated
from fitkit.lattice import Lattice, quotient_structure, smith_invariants
from fitkit.rings import group_ring
from fitkit.sweep import sweep_configs
from fitkit.wmodule import (
    as_own_group,
    build_W,
    build_W_for,
    f_map,
    g_elements,
    generator_pair,
    verify_local_cokernel,
    verify_W_cokernel,
)

C3, C9, C33 = FAG((3,)), FAG((9,)), FAG((3, 3))


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def coker(W):
    return quotient_structure(Lattice(W.x_dim, identity(W.x_dim)), Lattice(W.x_dim, f_map(W)))


def test_I_equal_D():
    W = build_W(C3, C3.whole(), (0,))
    assert W.rank == 3
    for b in W.basis:
        x, y = W.split(b)
        assert sum(x) == 0
    assert coker(W) == ([3], 0)


def test_I_trivial():
    W = build_W(C3, C3.trivial(), (1,))
    assert W.rank == 3
    _, g_tilde = g_elements(W)
    rows = group_ring(C3).multiplication_matrix(g_tilde.coeffs)
    want = [d for d in smith_invariants([list(r) for r in rows]) if d != 1]
    assert coker(W) == (want, 0)


def test_D_trivial():
    T = FAG(())
    W = build_W(T, T.whole(), ())
    assert W.rank == 1
    assert W.basis == ((0, 1),)


def test_generator_pair_lies_in_W():
    W = build_W(C9, subgroup_generated(C9, [(3,)]), (1,))
    assert generator_pair(W) in W.lattice
    assert W.is_D_stable()


def test_rejects_non_generating_frobenius():
    with pytest.raises(GroupInputError):
        build_W(C9, subgroup_generated(C9, [(3,)]), (3,))
    with pytest.raises(GroupInputError):
        build_W(C33, subgroup_generated(C33, [(1, 0)]), (2, 0))


def test_as_own_group_is_an_isomorphism():
    G = FAG((3, 9))
    cfg = InertiaConfig.build(G, [(0, 3)], [(1, 1)], (1, 1))
    H, iso = as_own_group(cfg.D)
    assert H.order == cfg.D.order
    images = {iso(x) for x in cfg.D.elements}
    assert len(images) == H.order
    for a in cfg.D.elements:
        for b in cfg.D.elements:
            assert iso(G.add(a, b)) == H.add(iso(a), iso(b))


@pytest.mark.parametrize("factors", [(3,), (9,), (3, 3), (15,), (3, 5), (27,)])
def test_all_checks_pass_on_small_groups(factors):
    G = FAG(factors)
    for cfg in sweep_configs(G.order, G.order, groups=[G]):
        recs = verify_W_cokernel(cfg)
        assert len(recs) == 8
        assert all(r.passed for r in recs), [(r.name, r.config) for r in recs if not r.passed]


@given(st.sampled_from([(3,), (9,), (3, 3), (5,), (15,)]), st.data())
def test_cokernel_order_matches_index(factors, data):
    G = FAG(factors)
    cfg = data.draw(st.sampled_from(sweep_configs(G.order, G.order, groups=[G])))
    W = build_W_for(cfg)
    inv, free = coker(W)
    g, _ = g_elements(W)
    ref = Lattice(W.y_dim, list(g.ring.multiples(g.coeffs)))
    n = 1
    for d in inv:
        n *= d
    assert free == 0 and n == ref.determinant()


def test_record_names():
    recs = verify_local_cokernel(C9, subgroup_generated(C9, [(3,)]), (1,), "c9")
    assert [r.name for r in recs] == [
        "defining-conditions",
        "f-injective",
        "cokernel-invariants",
        "cokernel-order",
        "fitting-zero",
        "image-is-ideal",
        "basis-correspondence",
        "free-quotient",
    ]
    assert all(r.config == "c9" and r.suite == "lemma-Av" for r in recs)
