import json
import random
import time
from pathlib import Path

import pytest

from fitkit.group_ring import GroupRingElement, augmentation_generators, norm_element, special_elements
from fitkit.groups import FiniteAbelianGroup as FAG
from fitkit.groups import InertiaConfig, cyclic_decomposition
from fitkit.ideals import FractionalIdeal, quotient_index
from fitkit.lattice import Lattice
from fitkit.rings import group_ring
from fitkit.shifted import (
    J_i_ideal,
    J_ideal,
    Z_ideal,
    compare,
    fitt_sh1,
    fitt_shm1,
    shift_rhs,
    shuffled_decomposition,
    times_h,
    verify_J_independence,
    verify_shift_equality,
    verify_shift_inclusion,
)

GOLDEN = Path(__file__).parent / "golden"
C3, C9, C33, C333 = FAG((3,)), FAG((9,)), FAG((3, 3)), FAG((3, 3, 3))


def ideal(G, gens, den=1):
    return FractionalIdeal.from_generators(group_ring(G), gens, den)


def full(G, phi=None):
    gens = G.unit_vectors()
    return InertiaConfig.build(G, gens, [], phi or G.identity)


def nus(cfg):
    return [norm_element(H) for H in cfg.decomposition.part_subgroups()]


def aug_D(cfg):
    _, gens = augmentation_generators(cfg)
    return ideal(cfg.G, gens)


def test_Z_examples():
    cfg = full(C333)
    ring = group_ring(C333)
    n1, n2, n3 = nus(cfg)
    assert Z_ideal(cfg, 3) == FractionalIdeal.unit(ring)
    assert Z_ideal(cfg, 0) == ideal(C333, [norm_element(cfg.I)])
    assert Z_ideal(cfg, 1) == ideal(C333, [n1 * n2, n2 * n3, n3 * n1])


def test_J_examples():
    cfg1 = InertiaConfig.build(C9, [(1,)], [], (0,))
    assert J_ideal(cfg1) == FractionalIdeal.unit(group_ring(C9))

    C39 = FAG((3, 9))
    cfg2 = InertiaConfig.build(C39, [(1, 0), (0, 3)], [(0, 1)], (0, 1))
    n1, n2 = nus(cfg2)
    assert J_ideal(cfg2) == ideal(C39, [n1, n2]) + aug_D(cfg2)

    cfg3 = full(C333)
    n1, n2, n3 = nus(cfg3)
    ID = aug_D(cfg3)
    want = ideal(C333, [n1 * n2, n2 * n3, n3 * n1]) + ideal(C333, [n1, n2, n3]) * ID + ID * ID
    assert J_ideal(cfg3) == want


def test_J_i_examples():
    cfg = full(C33)
    ring = group_ring(C33)
    assert J_i_ideal(cfg, 0) == ideal(C33, [norm_element(cfg.I)])
    assert J_i_ideal(cfg, 2) == FractionalIdeal.unit(ring)
    taus, _ = augmentation_generators(cfg)
    n1, n2 = nus(cfg)
    assert J_i_ideal(cfg, 1) == ideal(C33, [n1, n2]) + ideal(C33, taus)


def test_fitt_sh1_examples():
    cfg = InertiaConfig.build(C9, [], [(1,)], (1,))
    g = special_elements(cfg).g_tilde
    ring = group_ring(C9)
    assert fitt_sh1(cfg) == FractionalIdeal.unit(ring).with_denominator(g.coeffs)

    cfg = full(C3)
    nu = norm_element(C3.whole())
    sp = special_elements(cfg)
    # h^-1 (nu, 1 - nu/3) with h = 3 - nu + 3 nu over 3
    rhs = ideal(C3, [nu * 3, 3 - nu], sp.h_numerator.coeffs)
    assert compare(fitt_sh1(cfg), rhs)["equal"]

    cfg = full(C33)
    a, b = fitt_sh1(cfg), fitt_shm1(cfg)
    cmp = compare(a, b)
    assert cmp["left_in_right"] and not cmp["equal"] and cmp["index"] > 1


def test_fitt_shm1_examples():
    unramified = InertiaConfig.build(C9, [], [(1,)], (1,))
    g = special_elements(unramified).g_tilde
    # nu_I = 1, so (1, nu_I / g~) collapses to the principal ideal (1 / g~), the same as Fitt^[1]
    assert fitt_shm1(unramified) == FractionalIdeal.unit(group_ring(C9)).with_denominator(g.coeffs)
    assert fitt_shm1(unramified) == fitt_sh1(unramified)
    nu = norm_element(C3.whole())
    got = fitt_shm1(full(C3))
    assert got == ideal(C3, [3, nu], 3)
    assert got == ideal(C3, [1]) + ideal(C3, [nu], 3)


@pytest.mark.parametrize("factors", [(3,), (9,), (3, 3), (15,), (3, 5)])
def test_second_formula_for_shift_minus_one(factors):
    from fitkit.sweep import sweep_configs

    G = FAG(factors)
    for cfg in sweep_configs(G.order, G.order, groups=[G]):
        n = cfg.I.order
        nu = norm_element(cfg.I)
        phi_inv = GroupRingElement.of(G, G.neg(cfg.phi_lift))
        want = ideal(G, [nu * n, n - nu * phi_inv], n)
        assert compare(times_h(cfg, fitt_shm1(cfg)), want)["equal"]


def test_shift_rhs_examples():
    cfg = full(C9)
    nu = norm_element(cfg.I)
    phi_inv = GroupRingElement.of(C9, (0,))
    assert shift_rhs(cfg) == ideal(C9, [nu * 9, 9 - nu * phi_inv], 9)
    trivial = InertiaConfig.build(C9, [], [(1,)], (1,))
    assert shift_rhs(trivial) == FractionalIdeal.unit(group_ring(C9))


def test_shift_rhs_golden():
    """The frozen C3xC3 basis, rebuilt from generators without the library's J."""
    data = json.loads((GOLDEN / "c3xc3_full.json").read_text())
    cfg = full(C33)
    golden = FractionalIdeal.from_dict(data["shift_rhs"])
    assert shift_rhs(cfg) == golden
    # independent route: (#I nu_I, (#I - nu_I) J) with J = (nu_1, nu_2) + I_D, cleared by 9
    n1, n2 = nus(cfg)
    nu = norm_element(cfg.I)
    G = C33
    gens = [nu * 9]
    J_gens = [n1, n2] + [GroupRingElement.of(G, u) - 1 for u in G.unit_vectors()]
    gens += [(9 - nu) * j for j in J_gens]
    ring = group_ring(G)
    lat = Lattice(ring.dim)
    for x in gens:
        for v in ring.multiples(x.coeffs):
            lat.add(v)
    assert lat.basis() == tuple(tuple(int(c) for c in r) for r in data["shift_rhs"]["basis"])
    assert FractionalIdeal.from_dict(data["fitt1"]) == fitt_sh1(cfg)
    assert FractionalIdeal.from_dict(data["fittm1"]) == fitt_shm1(cfg)


def test_shifts_agree_for_cyclic_inertia():
    recs = verify_shift_inclusion(InertiaConfig.build(C9, [(1,)], [], (0,)))
    assert [r.status for r in recs] == ["pass", "pass"]
    assert recs[1].note == "equality"


def test_J_independence_with_padding():
    cfg = InertiaConfig.build(C3, [(1,)], [], (0,))
    padded = cyclic_decomposition(cfg.I, pad_to=3)
    rec = verify_J_independence(cfg, [("padded", padded)])
    assert rec.passed
    assert J_ideal(cfg.with_decomposition(padded)) == J_ideal(cfg)


def test_shift_equality_record_reports_config():
    rep = verify_shift_equality(full(C33))
    assert rep.equal
    rec = rep.record()
    assert rec.passed and rec.witness["config"]["group"] == [3, 3]


def test_index_of_strict_inclusion_is_frozen():
    # [Fitt^<-1> : Fitt^[1]] for I = D = C3xC3, frozen from the lattice computation
    cfg = full(C33)
    assert quotient_index(fitt_shm1(cfg), fitt_sh1(cfg)) == 3


@pytest.mark.parametrize("factors", [(9, 3), (3, 3, 3, 5), (9, 3, 5)])
def test_shuffled_decompositions_are_found_quickly(factors):
    G = FAG(factors)
    cfg = InertiaConfig.build(G, G.unit_vectors(), [], G.identity)
    t0 = time.perf_counter()
    for seed in range(30):
        dec = shuffled_decomposition(cfg, random.Random(seed))
        assert sorted(dec.orders) == sorted(n for n in cfg.decomposition.orders if n > 1)
    assert time.perf_counter() - t0 < 10
