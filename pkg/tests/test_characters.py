import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import groups, ring_elements

from fitkit.characters import (
    CharacterInputError,
    CyclotomicInt,
    chi_component,
    criterion,
    criterion_check,
    curated_criterion_data,
    exists_psi,
    extensions,
    faithful_character,
    galois_representatives,
    prime_to_p_group,
    psi_eval,
    psi_ideal,
    verify_chi_equality,
    verify_p_group_comparisons,
)
from fitkit.group_ring import GroupRingElement, norm_element
from fitkit.groups import Character, InertiaConfig, characters, subgroup_generated
from fitkit.groups import FiniteAbelianGroup as FAG
from fitkit.ideals import FractionalIdeal
from fitkit.rings import RingElement, group_ring

C3, C33 = FAG((3,)), FAG((3, 3))


def ideal(G, gens):
    return FractionalIdeal.from_generators(group_ring(G), gens)


def cyclo_ideal(m, gens):
    ring = CyclotomicInt.ring_for(m)
    return FractionalIdeal.from_generators(ring, gens)


def test_psi_ideal_examples():
    psi = Character(C3, (1,))
    ring = group_ring(C3)
    assert psi_ideal(psi, FractionalIdeal.zero(ring)).is_zero()
    three = ideal(C3, [GroupRingElement.scalar(C3, 3)])
    assert psi_ideal(psi, three) == cyclo_ideal(3, [CyclotomicInt.integer(3, 3).coeffs])
    aug = ideal(C3, [GroupRingElement.of(C3, (1,)) - 1])
    one_minus_zeta = (CyclotomicInt.integer(3, 1) - CyclotomicInt.zeta(3)).coeffs
    image = psi_ideal(psi, aug)
    assert image == cyclo_ideal(3, [one_minus_zeta])
    assert image.contains(psi_ideal(psi, three))


def test_psi_eval_of_norm_is_zero_for_nontrivial_psi():
    nu = norm_element(C33.whole())
    for psi in characters(C33):
        value = psi_eval(psi, nu)
        assert value.is_zero() == (psi.order > 1)


@given(groups(max_order=30), st.data())
def test_psi_is_a_ring_homomorphism(G, data):
    ring = group_ring(G)
    a = RingElement(ring, data.draw(ring_elements(G, 2)))
    b = RingElement(ring, data.draw(ring_elements(G, 2)))
    psi = data.draw(st.sampled_from(characters(G)))
    assert psi_eval(psi, a * b) == psi_eval(psi, a) * psi_eval(psi, b)
    assert psi_eval(psi, a + b) == psi_eval(psi, a) + psi_eval(psi, b)


@given(st.sampled_from([(3,), (9,), (3, 3), (15,), (3, 5)]), st.data())
def test_psi_image_of_an_ideal_is_an_ideal(factors, data):
    G = FAG(factors)
    ring = group_ring(G)
    gens = data.draw(st.lists(ring_elements(G, 2), min_size=1, max_size=2))
    psi = data.draw(st.sampled_from(characters(G)))
    image = psi_ideal(psi, FractionalIdeal.from_generators(ring, gens))
    zeta = CyclotomicInt.zeta(psi.order)
    for v in image.gens:
        assert image.contains_element(image.ring.mul(v, zeta.coeffs))


def test_chi_component_examples():
    G = FAG((9,))
    chi = Character(prime_to_p_group(G, 3), (0,))
    a = ideal(G, [GroupRingElement.of(G, (1,)) - 1, GroupRingElement.scalar(G, 3)])
    comp = chi_component(chi, a, 3)
    assert comp.basis == a.basis

    G = FAG((3, 5))
    chi = faithful_character(prime_to_p_group(G, 3))
    assert chi.order == 5
    nu_q = norm_element(subgroup_generated(G, [(0, 1)]))
    assert chi_component(chi, ideal(G, [nu_q]), 3).is_zero()
    unit = chi_component(chi, FractionalIdeal.unit(group_ring(G)), 3)
    assert unit == FractionalIdeal.unit(unit.ring)


def test_chi_component_rejects_bad_characters():
    G = FAG((3, 5))
    with pytest.raises(CharacterInputError):
        chi_component(Character(G, (1, 1)), FractionalIdeal.unit(group_ring(G)), 3)


def test_galois_representatives_count_divisors():
    assert len(galois_representatives(characters(FAG((9,))))) == 3
    assert len(galois_representatives(characters(FAG((15,))))) == 4
    # C3xC3: the trivial character and the four lines of characters
    assert len(galois_representatives(characters(C33))) == 5


def test_extensions_restrict_to_chi():
    G = FAG((3, 5))
    chi = faithful_character(prime_to_p_group(G, 3))
    exts = extensions(G, 3, chi)
    assert len(exts) == 3
    for psi in exts:
        for x in subgroup_generated(G, [(0, 1)]).elements:
            assert psi.exponent_at(x) * 5 // psi.order % 5 == chi.exponent_at(x) * 5 // chi.order % 5


def test_exists_psi_examples():
    chi = Character(prime_to_p_group(C3, 3), (0,))
    assert exists_psi(C3, 3, chi, [C3.whole()]) is not None
    chi = Character(prime_to_p_group(C33, 3), (0, 0))
    lines = [subgroup_generated(C33, [g]) for g in [(1, 0), (0, 1), (1, 1), (1, 2)]]
    assert exists_psi(C33, 3, chi, lines) is None
    assert exists_psi(C33, 3, chi, []) is not None


def test_chi_equality_examples():
    G = FAG((3, 5))
    cfg = InertiaConfig.build(G, [(0, 1)], [], (0, 0))
    rec = verify_chi_equality(cfg, 3)
    assert rec.passed and rec.note == "norm-vanishes"
    cfg = InertiaConfig.build(G, [], [(0, 1)], (0, 1))
    rec = verify_chi_equality(cfg, 3)
    assert rec.passed and rec.note == "other"
    rec = verify_chi_equality(InertiaConfig.build(C3, [(1,)], [], (0,)), 3)
    assert rec.status == "skip"


def test_p_group_comparison_examples():
    cfg = InertiaConfig.build(C33, [(1, 0), (0, 1)], [], (0, 0))
    recs = verify_p_group_comparisons(cfg, 3)
    assert recs[0].name == "part-1" and recs[0].passed
    parts = [r for r in recs if r.name == "part-2"]
    assert len(parts) == 4 and all(r.passed for r in parts)
    G = FAG((9,))
    recs = verify_p_group_comparisons(InertiaConfig.build(G, [(1,)], [], (0,)), 3)
    assert all(r.passed for r in recs) and recs[0].witness["s"] == 1


def _places(G, specs):
    return [InertiaConfig.build(G, i, d, phi) for i, d, phi in specs]


def test_criterion_examples():
    chi = Character(prime_to_p_group(C33, 3), (0, 0))
    cyclic = _places(C33, [([(1, 0)], [(0, 1)], (0, 1))])
    res = criterion(C33, 3, chi, cyclic)
    assert res.i_prime and res.ii_prime

    whole = _places(C33, [([(1, 0), (0, 1)], [], (0, 0))])
    res = criterion(C33, 3, chi, whole)
    assert not res.i_prime and not res.ii_prime and res.branch == "witness-psi"

    lines = _places(C33, [([g], [], (0, 0)) for g in [(1, 0), (0, 1), (1, 1), (1, 2)]])
    res = criterion(C33, 3, chi, lines)
    assert res.i_prime and res.ii_prime and res.branch == "theta-zero"
    assert criterion_check(C33, 3, chi, lines).note == "theta-zero"


def test_criterion_needs_faithful_chi():
    G = FAG((3, 5, 5))
    chi = Character(prime_to_p_group(G, 3), (0, 1, 0))
    with pytest.raises(CharacterInputError):
        criterion(G, 3, chi, [])


def test_curated_data_is_large_enough():
    data = curated_criterion_data()
    assert len(data) >= 30
    names = [d[0] for d in data]
    assert len(set(names)) == len(names)
