"""The ideals Z_i, J_i and J, the shifted Fitting ideals of A = Z[G/I]/(g), and their checks.

Notation follows the data of an :class:`InertiaConfig`: a decomposition
``I = <sigma_1> x ... x <sigma_s>``, ``tau_l = sigma_l - 1``, ``nu_l`` the norm of
the l-th part, ``g~ = 1 - phi~^-1 + #I`` and ``#I*h = #I - nu_I phi~^-1 + #I nu_I``.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from functools import reduce

from .fitting import build_M, build_N, fitt_i, syzygy_presentation
from .group_ring import (
    GroupRingElement,
    ScaledElement,
    augmentation_generators,
    norm_element,
    part_norms,
    special_elements,
)
from .groups import (
    CyclicDecomposition,
    FiniteAbelianGroup,
    GroupInputError,
    InertiaConfig,
    is_cyclic,
    prime_factors,
)
from .ideals import FractionalIdeal, quotient_index
from .report import CheckRecord, check
from .rings import group_ring


def _ring(cfg: InertiaConfig):
    return group_ring(cfg.G)


def _principal(cfg: InertiaConfig, x) -> FractionalIdeal:
    return FractionalIdeal.from_generators(_ring(cfg), [x])


def ideal_of(cfg: InertiaConfig, gens) -> FractionalIdeal:
    return FractionalIdeal.from_generators(_ring(cfg), list(gens))


def _effective(cfg: InertiaConfig) -> InertiaConfig:
    # with no parts at all the sums defining J are empty; one trivial part gives the same ideals
    return cfg if cfg.s else cfg.with_decomposition(cfg.decomposition.padded(1))


def augmentation_ideals(cfg: InertiaConfig) -> tuple[FractionalIdeal, FractionalIdeal]:
    """The relative augmentation ideals I_I = (tau_l) and I_D = (I_I, 1 - phi~^-1)."""
    taus, d_gens = augmentation_generators(cfg)
    return ideal_of(cfg, taus), ideal_of(cfg, d_gens)


def Z_ideal(cfg: InertiaConfig, i: int) -> FractionalIdeal:
    """Generated by the products of s-i distinct part norms nu_l."""
    s = cfg.s
    if not 0 <= i <= s:
        raise GroupInputError(f"Z_i needs 0 <= i <= s = {s}, got {i}")
    nus = part_norms(cfg)
    one = GroupRingElement.scalar(cfg.G, 1)
    gens = [reduce(lambda a, b: a * b, combo, one) for combo in itertools.combinations(nus, s - i)]
    return ideal_of(cfg, gens)


def J_ideal(cfg: InertiaConfig) -> FractionalIdeal:
    """J = sum_{i=1}^{s} Z_i I_D^(i-1)."""
    cfg = _effective(cfg)
    _, I_D = augmentation_ideals(cfg)
    total = FractionalIdeal.zero(_ring(cfg))
    power = FractionalIdeal.unit(_ring(cfg))
    for i in range(1, cfg.s + 1):
        total = total + Z_ideal(cfg, i) * power
        power = power * I_D
    return total


def J_i_ideal(cfg: InertiaConfig, i: int) -> FractionalIdeal:
    """J_0 = (nu_I) and J_i = sum_{j=0}^{s-i} Z_{i+j} I_I^j for 1 <= i <= s."""
    s = cfg.s
    if not 0 <= i <= s:
        raise GroupInputError(f"J_i needs 0 <= i <= s = {s}, got {i}")
    if i == 0:
        return _principal(cfg, norm_element(cfg.I))
    I_I, _ = augmentation_ideals(cfg)
    total = FractionalIdeal.zero(_ring(cfg))
    power = FractionalIdeal.unit(_ring(cfg))
    for j in range(0, s - i + 1):
        total = total + Z_ideal(cfg, i + j) * power
        power = power * I_I
    return total


def fitting_ideals_of_augmentation(cfg: InertiaConfig) -> list[FractionalIdeal]:
    """Fitt_i(I_I) for 0 <= i <= s, read off from minors of the presentation M."""
    M = build_M(cfg)
    return [fitt_i(M, i) for i in range(cfg.s + 1)]


def fitt_sh1(cfg: InertiaConfig, fitts: list[FractionalIdeal] | None = None) -> FractionalIdeal:
    """First shifted Fitting ideal of A: ``g~^-1 * sum_{i=0}^{s} g~^i Fitt_i(I_I)``."""
    sp = special_elements(cfg, check=False)
    gt = sp.g_tilde
    fitts = fitts if fitts is not None else fitting_ideals_of_augmentation(cfg)
    total = FractionalIdeal.zero(_ring(cfg))
    power = GroupRingElement.scalar(cfg.G, 1)
    for F in fitts:
        total = total + F.scaled(power)
        power = power * gt
    return total.with_denominator(gt)


def fitt_shm1(cfg: InertiaConfig) -> FractionalIdeal:
    """Shift by -1 of the Fitting ideal of A: ``(g~, nu_I) / g~``."""
    sp = special_elements(cfg, check=False)
    return ideal_of(cfg, [sp.g_tilde, norm_element(cfg.I)]).with_denominator(sp.g_tilde)


def phi_inverse(cfg: InertiaConfig) -> GroupRingElement:
    return GroupRingElement.of(cfg.G, cfg.G.neg(cfg.phi_lift))


def B_numerator(cfg: InertiaConfig) -> GroupRingElement:
    """``#I - nu_I phi~^-1``, i.e. #I times ``1 - (nu_I/#I) phi^-1``."""
    return cfg.I.order - norm_element(cfg.I) * phi_inverse(cfg)


def shift_rhs(cfg: InertiaConfig) -> FractionalIdeal:
    """``(nu_I, (1 - (nu_I/#I) phi^-1) J)`` stored as ``(#I nu_I, (#I - nu_I phi~^-1) J) / #I``."""
    n = cfg.I.order
    nu = norm_element(cfg.I)
    J = J_ideal(cfg)
    num = _principal(cfg, nu * n) + J.scaled(B_numerator(cfg))
    return num.with_denominator(n)


def times_h(cfg: InertiaConfig, a: FractionalIdeal) -> FractionalIdeal:
    """The fractional ideal ``h * a``."""
    sp = special_elements(cfg, check=False)
    ring = _ring(cfg)
    den = ring.mul(a.denominator, ring.scalar(cfg.I.order))
    return a.scaled(sp.h_numerator).with_denominator(den)


# comparison helpers -------------------------------------------------------


def lattice_witness(a: FractionalIdeal) -> dict:
    return {"basis": [list(r) for r in a.basis], "denominator": list(a.denominator)}


def compare(a: FractionalIdeal, b: FractionalIdeal) -> dict:
    la, lb = a.cleared_pair(b)
    a_in_b = lb.contains_lattice(la)
    b_in_a = la.contains_lattice(lb)
    out = {"equal": a_in_b and b_in_a, "left_in_right": a_in_b, "right_in_left": b_in_a}
    if a_in_b and not b_in_a:
        out["index"] = quotient_index(b, a)
    elif b_in_a and not a_in_b:
        out["index"] = quotient_index(a, b)
    return out


@dataclass
class ShiftReport:
    config: InertiaConfig
    lhs: FractionalIdeal
    rhs: FractionalIdeal
    equal: bool
    index_if_unequal: int | None = None
    timing: float = 0.0
    notes: dict = field(default_factory=dict)

    def record(self) -> CheckRecord:
        witness = {"config": self.config.as_dict(), **self.notes}
        if not self.equal:
            witness.update(lhs=lattice_witness(self.lhs), rhs=lattice_witness(self.rhs))
            if self.index_if_unequal is not None:
                witness["index"] = self.index_if_unequal
        rec = check(
            "theorem2",
            "h-times-first-shift",
            "h Fitt^[1](A) = (nu_I, (1 - (nu_I/#I) phi^-1) J)",
            self.equal,
            self.config.label(),
            witness,
        )
        rec.duration = self.timing
        return rec


# verifiers ----------------------------------------------------------------


def verify_shift_equality(cfg: InertiaConfig) -> ShiftReport:
    """Compare the cleared lattices ``(#I h) num(Fitt^[1])`` and ``g~ num(rhs)``."""
    t0 = time.perf_counter()
    special_elements(cfg, check=True)
    lhs = times_h(cfg, fitt_sh1(cfg))
    rhs = shift_rhs(cfg)
    cmp = compare(lhs, rhs)
    return ShiftReport(cfg, lhs, rhs, cmp["equal"], cmp.get("index"), time.perf_counter() - t0)


def closed_form_N(group: FiniteAbelianGroup, taus, i: int) -> FractionalIdeal:
    """(1) for i >= s, 0 for i = 0 < s, (tau_1..tau_s)^(s-i) otherwise."""
    ring = group_ring(group)
    s = len(taus)
    if i >= s:
        return FractionalIdeal.unit(ring)
    if i == 0:
        return FractionalIdeal.zero(ring)
    return FractionalIdeal.from_generators(ring, taus) ** (s - i)


def verify_N_fitting(orders) -> list[CheckRecord]:
    """Fitt_i(N_s) by minors against the closed form, for 0 <= i <= s+1, over C_{orders}."""
    G = FiniteAbelianGroup(tuple(orders))
    ring = group_ring(G)
    taus = [ring.sub(ring.basis_vector(0, e), ring.one) for e in G.unit_vectors()]
    N = build_N(G, taus)
    s = len(taus)
    out = []
    label = f"N_{s} over C{tuple(orders)}"
    for i in range(s + 2):
        got = fitt_i(N, i)
        want = closed_form_N(G, taus, i)
        cmp = compare(got, want)
        out.append(
            check(
                "prop-N",
                f"i={i}",
                "Fitt_i(N_s) = (1) if i>=s, 0 if i=0<s, (tau)^(s-i) otherwise",
                cmp["equal"],
                label,
                {} if cmp["equal"] else {"minors": lattice_witness(got), "closed_form": lattice_witness(want)},
            )
        )
    return out


def verify_augmentation_fitting(cfg: InertiaConfig, use_syzygy: bool = True) -> list[CheckRecord]:
    """J_i (closed form) = Fitt_i(M) (minors) = Fitt_i(relation module) for every i."""
    M = build_M(cfg)
    taus, _ = augmentation_generators(cfg)
    syz = syzygy_presentation(cfg.G, taus) if use_syzygy else None
    out = []
    for i in range(cfg.s + 2):
        want = J_i_ideal(cfg, i) if i <= cfg.s else FractionalIdeal.unit(_ring(cfg))
        by_minors = fitt_i(M, i)
        ok = compare(by_minors, want)["equal"]
        witness = {"relations": syz.nrows} if syz is not None else {}
        if syz is not None:
            ok_syz = compare(fitt_i(syz, i), want)["equal"]
            witness["syzygy_agrees"] = ok_syz
            ok = ok and ok_syz
        out.append(
            check("prop-Ji", f"i={i}", "Fitt_i(I_I) = J_i via M and via the relation module", ok, cfg.label(), witness)
        )
    return out


def verify_shift_inclusion(cfg: InertiaConfig) -> list[CheckRecord]:
    """Fitt^[1](A) inside Fitt^<-1>(A) always; equality when I is cyclic; strictness is only recorded."""
    a = fitt_sh1(cfg)
    b = fitt_shm1(cfg)
    cmp = compare(a, b)
    cyclic = is_cyclic(cfg.I)
    witness = {"I_cyclic": cyclic, "equal": cmp["equal"]}
    if "index" in cmp:
        witness["index"] = cmp["index"]
    out = [check("cor42", "inclusion", "Fitt^[1](A) in Fitt^<-1>(A)", cmp["left_in_right"], cfg.label(), witness)]
    if cyclic:
        out.append(
            check("cor42", "equality", "Fitt^[1](A) = Fitt^<-1>(A) for cyclic I", cmp["equal"], cfg.label(), witness,
                  note="equality")
        )
    return out


def verify_shift_minus_one(cfg: InertiaConfig) -> list[CheckRecord]:
    """Both descriptions of the shift by -1.

    The left sides come from the exact sequence 0 -> A -> Z[G]/(g~) -> Z[G]/(g~, nu_I) -> 0:
    Fitt of the middle term inverted times Fitt_0 of the cokernel, taken from the
    2x1 presentation (g~; nu_I).  The orders of the three modules are checked too.
    """
    from .fitting import GroupRingMatrix
    from .groups import quotient_group

    sp = special_elements(cfg)
    ring = _ring(cfg)
    nu = norm_element(cfg.I)
    Y = GroupRingMatrix(cfg.G, ((sp.g_tilde.coeffs,), (nu.coeffs,)), ("g", "nu"), ("e",), 1)
    defn = fitt_i(Y, 0).with_denominator(sp.g_tilde)
    closed = ideal_of(cfg, [ring.one]) + ideal_of(cfg, [nu]).with_denominator(sp.g_tilde)
    first = compare(defn, closed)["equal"] and compare(defn, fitt_shm1(cfg))["equal"]

    # orders: |A| * |Y| = |Z[G]/(g~)|
    unit = FractionalIdeal.unit(ring)
    Q, _ = quotient_group(cfg.G, cfg.I)
    order_A = quotient_index(FractionalIdeal.unit(group_ring(Q)), FractionalIdeal.from_generators(group_ring(Q), [sp.g]))
    order_Y = quotient_index(unit, fitt_i(Y, 0))
    order_P = quotient_index(unit, _principal(cfg, sp.g_tilde))
    seq_ok = order_A is not None and order_A * order_Y == order_P

    lhs = times_h(cfg, defn)
    rhs = ideal_of(cfg, [nu * cfg.I.order, B_numerator(cfg)]).with_denominator(cfg.I.order)
    second = compare(lhs, rhs)["equal"]
    nu_g_is_nu_h = ScaledElement(nu * sp.g_tilde, 1) == ScaledElement(nu * sp.h_numerator, cfg.I.order)
    return [
        check("shift-minus-one", "first-formula", "Fitt^<-1>(A) = (1, nu_I g^-1)", first and seq_ok, cfg.label(),
              {"orders": [order_A, order_Y, order_P]}),
        check("shift-minus-one", "second-formula", "h Fitt^<-1>(A) = (nu_I, 1 - (nu_I/#I) phi^-1)", second and nu_g_is_nu_h,
              cfg.label()),
    ]


def verify_J_identities(cfg: InertiaConfig) -> list[CheckRecord]:
    """(I_I, #I) J_{i+1} in J_i, and sum g~^(i-1) J_i = sum (1-phi~^-1)^(i-1) J_i = J."""
    cfg_e = _effective(cfg)
    s = cfg_e.s
    sp = special_elements(cfg_e, check=False)
    I_I, _ = augmentation_ideals(cfg_e)
    Js = [J_i_ideal(cfg_e, i) for i in range(s + 1)]
    left = I_I + ideal_of(cfg_e, [GroupRingElement.scalar(cfg.G, cfg.I.order)])
    chain_ok = all(Js[i].contains(left * Js[i + 1]) for i in range(1, s))
    a = 1 - phi_inverse(cfg_e)
    ring = _ring(cfg_e)
    sum_g = FractionalIdeal.zero(ring)
    sum_a = FractionalIdeal.zero(ring)
    pg = GroupRingElement.scalar(cfg.G, 1)
    pa = GroupRingElement.scalar(cfg.G, 1)
    for i in range(1, s + 1):
        sum_g = sum_g + Js[i].scaled(pg)
        sum_a = sum_a + Js[i].scaled(pa)
        pg = pg * sp.g_tilde
        pa = pa * a
    J = J_ideal(cfg_e)
    sums_ok = compare(sum_g, sum_a)["equal"] and compare(sum_a, J)["equal"]
    return [
        check("J-identities", "chain", "(I_I, #I) J_{i+1} in J_i for 1 <= i < s", chain_ok, cfg.label()),
        check("J-identities", "sums", "sum g~^(i-1) J_i = sum (1-phi~^-1)^(i-1) J_i = J", sums_ok, cfg.label()),
    ]


def verify_lift_invariance(cfg: InertiaConfig, max_lifts: int | None = None) -> CheckRecord:
    """Fitt^[1](A) does not depend on the lift phi~ (nor does the rhs)."""
    lifts = cfg.lifts()
    if max_lifts is not None:
        lifts = lifts[:max_lifts]
    base = fitt_sh1(cfg.with_lift(lifts[0]))
    bad = [list(phi) for phi in lifts[1:] if not compare(base, fitt_sh1(cfg.with_lift(phi)))["equal"]]
    return check("lift-invariance", "fitt1", "Fitt^[1](A) is the same for every lift of phi", not bad, cfg.label(),
                 {"lifts": len(lifts), "bad_lifts": bad})


# alternative decompositions -----------------------------------------------


def primary_decomposition(cfg: InertiaConfig) -> CyclicDecomposition | None:
    """Split every cyclic part into prime-power parts (None if that changes nothing)."""
    G = cfg.G
    parts = []
    for g, n in cfg.decomposition.parts:
        ps = prime_factors(n)
        if len(ps) <= 1:
            parts.append((g, n))
            continue
        for p in ps:
            q = p ** _valuation(n, p)
            parts.append((G.scale(n // q, g), q))
    if len(parts) == cfg.s:
        return None
    return CyclicDecomposition(cfg.I, tuple(parts)).validate()


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def shuffled_decomposition(cfg: InertiaConfig, rng: random.Random) -> CyclicDecomposition:
    """Another decomposition with the same part orders: parts permuted, generators re-chosen at random."""
    G, I = cfg.G, cfg.I
    # search largest orders first, where a greedy choice rarely dead-ends, then permute the parts
    orders = sorted((n for _, n in cfg.decomposition.parts if n > 1), reverse=True)
    by_order: dict[int, list] = {}
    for x in I.elements:
        by_order.setdefault(G.element_order(x), []).append(x)
    for v in by_order.values():
        rng.shuffle(v)

    def search(chosen, span):
        k = len(chosen)
        if k == len(orders):
            return chosen
        n = orders[k]
        for x in by_order.get(n, ()):
            cyc = [G.scale(i, x) for i in range(n)]
            new = frozenset(G.add(a, c) for a in span for c in cyc)
            if len(new) == len(span) * n:
                found = search(chosen + [x], new)
                if found is not None:
                    return found
        return None

    parts = list(zip(search([], frozenset([G.identity])), orders))
    rng.shuffle(parts)
    return CyclicDecomposition(I, tuple(parts)).validate()


def default_alternatives(cfg: InertiaConfig, rng: random.Random) -> list[tuple[str, CyclicDecomposition]]:
    alts = [
        ("shuffled", shuffled_decomposition(cfg, rng)),
        ("padded", cfg.decomposition.padded(cfg.s + 2)),
    ]
    prim = primary_decomposition(cfg)
    if prim is not None:
        alts.append(("primary", prim))
    return alts


def verify_J_independence(cfg: InertiaConfig, alt_decompositions=None, seed: int = 0) -> CheckRecord:
    """J recomputed under every supplied decomposition of I agrees with the canonical one."""
    if alt_decompositions is None:
        alt_decompositions = default_alternatives(cfg, random.Random(f"{seed}:{cfg.label()}"))
    base = J_ideal(cfg)
    results = {}
    for name, dec in alt_decompositions:
        other = J_ideal(cfg.with_decomposition(dec))
        results[name] = {
            "parts": [[list(g), n] for g, n in dec.parts],
            "equal": compare(base, other)["equal"],
        }
    ok = all(r["equal"] for r in results.values())
    return check("J-independence", "decompositions", "J does not depend on the decomposition of I", ok, cfg.label(),
                 {"alternatives": results})

