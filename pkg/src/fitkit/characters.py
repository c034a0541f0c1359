"""Characters, cyclotomic integers and chi-components of ideals of Z[G].

p-adic statements are checked globally: ideals are pushed into Z[zeta_m] or
Z[zeta_m][G_p] and compared with :func:`p_local_contains`, i.e. up to an index
prime to p.  This covers all Galois conjugates of a character at once, so only
one character per Galois orbit is tried.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence

from .group_ring import ScaledElement
from .groups import (
    Character,
    Element,
    FiniteAbelianGroup,
    GroupInputError,
    InertiaConfig,
    PrimarySplit,
    Subgroup,
    is_cyclic,
    p_rank,
    p_valuation,
)
from .ideals import FractionalIdeal, IdealInputError, p_local_contains, p_local_equals
from .lattice import Lattice
from .report import CheckRecord, check, skipped
from .rings import CycloGroupRing, RingElement, Vec, cyclo_group_ring
from .shifted import B_numerator, augmentation_ideals, fitt_sh1, times_h

TRIVIAL = FiniteAbelianGroup(())


class CharacterInputError(ValueError):
    pass


class CyclotomicInt(RingElement):
    """An element of Z[zeta_m], coefficients on 1, zeta, ..., zeta^(deg Phi_m - 1)."""

    @classmethod
    def ring_for(cls, m: int) -> CycloGroupRing:
        return cyclo_group_ring(m, TRIVIAL)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CyclotomicInt":
        ring = cls.ring_for(m)
        return cls(ring, ring.basis_vector(k, ()))

    @classmethod
    def integer(cls, m: int, c: int) -> "CyclotomicInt":
        ring = cls.ring_for(m)
        return cls(ring, ring.scalar(c))

    @property
    def conductor(self) -> int:
        return self.ring.conductor

    def __repr__(self) -> str:
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


# ring homomorphisms out of Z[G] -------------------------------------------


@dataclass(frozen=True)
class GroupRingMap:
    """The ring map Z[G] -> Z[zeta_m][H] sending g to zeta^a(g) * h(g).

    Only used for maps that are onto, so images of ideals are additive images.
    """

    source: FiniteAbelianGroup
    target: CycloGroupRing
    images: tuple[Vec, ...]  # image of each element of the source, in enumeration order

    @classmethod
    def build(cls, G: FiniteAbelianGroup, target: CycloGroupRing, f: Callable[[Element], tuple[int, Element]]):
        return cls(G, target, tuple(target.basis_vector(*f(g)) for g in G.elements))

    def apply(self, coeffs: Sequence[int]) -> Vec:
        out = [0] * self.target.dim
        for c, img in zip(coeffs, self.images):
            if c:
                for k, a in enumerate(img):
                    if a:
                        out[k] += c * a
        return tuple(out)

    def element(self, x) -> RingElement:
        coeffs = x.coeffs if isinstance(x, RingElement) else x
        return RingElement(self.target, self.apply(coeffs))

    def ideal(self, a: FractionalIdeal) -> FractionalIdeal:
        den = self.apply(a.denominator)
        if not any(den):
            raise IdealInputError("the denominator maps to zero")
        lat = Lattice(self.target.dim)
        for row in a.lattice.generating_rows():
            lat.add(self.apply(row))
        gens = [v for v in (self.apply(g) for g in a.gens) if any(v)]
        ideal = FractionalIdeal(self.target, lat, gens, self.target.one)
        return ideal if den == self.target.one else ideal.with_denominator(den)


@lru_cache(maxsize=256)
def psi_map(psi: Character) -> GroupRingMap:
    m = psi.order
    return GroupRingMap.build(psi.group, cyclo_group_ring(m, TRIVIAL), lambda g: (psi.exponent_at(g), ()))


def psi_eval(psi: Character, x):
    """psi extended linearly; a ScaledElement gives ``(value, denominator)``."""
    f = psi_map(psi)
    if isinstance(x, ScaledElement):
        return CyclotomicInt(f.target, f.apply(x.numerator.coeffs)), x.denominator
    return CyclotomicInt(f.target, f.apply(x.coeffs))


def psi_ideal(psi: Character, a: FractionalIdeal) -> FractionalIdeal:
    """The ideal of Z[zeta_m] generated by psi of ``a`` (m the order of psi)."""
    return psi_map(psi).ideal(a)


@lru_cache(maxsize=256)
def chi_map(G: FiniteAbelianGroup, p: int, chi: Character) -> GroupRingMap:
    split = PrimarySplit(G, p)
    if chi.group != split.prime_to_p:
        raise CharacterInputError("chi must be a character of the prime-to-p part of G")
    if chi.order % p == 0:
        raise CharacterInputError(f"the order of chi is divisible by p = {p}")
    target = cyclo_group_ring(chi.order, split.p_part)

    def f(g):
        gp, gq = split.split(g)
        return chi.exponent_at(gq), gp

    return GroupRingMap.build(G, target, f)


def chi_component(chi: Character, a: FractionalIdeal, p: int) -> FractionalIdeal:
    """Image of ``a`` in Z[zeta_m][G_p] under g -> chi(g') g_p."""
    return chi_map(a.group, p, chi).ideal(a)


# characters ---------------------------------------------------------------


def galois_representatives(chars: Iterable[Character]) -> list[Character]:
    """One character per orbit of psi -> psi^a, a prime to the order."""
    seen = set()
    out = []
    for psi in chars:
        m = psi.order
        key = min(
            tuple(a * c % n for c, n in zip(psi.exponents, psi.group.factors))
            for a in range(1, m + 1)
            if gcd(a, m) == 1
        )
        if key not in seen:
            seen.add(key)
            out.append(psi)
    return out


def prime_to_p_group(G: FiniteAbelianGroup, p: int) -> FiniteAbelianGroup:
    return PrimarySplit(G, p).prime_to_p


def faithful_character(H: FiniteAbelianGroup) -> Character | None:
    """The first faithful character of H in enumeration order (None unless H is cyclic)."""
    for e in H.elements:
        chi = Character(H, e)
        if chi.is_faithful():
            return chi
    return None


def extensions(G: FiniteAbelianGroup, p: int, chi: Character) -> list[Character]:
    """Characters psi of G with psi restricted to G' equal to chi (one per character of G_p)."""
    split = PrimarySplit(G, p)
    out = []
    for lam in split.p_part.elements:
        ex = []
        for c_p, n_p, c_q, n_q, n in zip(lam, split.p_part.factors, chi.exponents, split.prime_to_p.factors, G.factors):
            # exponent of exp(2 pi i (c_p/n_p + c_q/n_q)) on a factor of order n = n_p n_q
            ex.append((c_p * (n // n_p) + c_q * (n // n_q)) % n if n > 1 else 0)
        out.append(Character(G, tuple(ex)))
    return out


def exists_psi(G: FiniteAbelianGroup, p: int, chi: Character, places: Sequence[Subgroup]) -> Character | None:
    """An extension psi of chi that is nontrivial on every subgroup in ``places``."""
    for psi in extensions(G, p, chi):
        if all(not psi.is_trivial_on(D) for D in places):
            return psi
    return None


# the ideals A and B -------------------------------------------------------


@lru_cache(maxsize=128)
def A_ideal(cfg: InertiaConfig) -> FractionalIdeal:
    """h times the first shifted Fitting ideal."""
    return times_h(cfg, fitt_sh1(cfg))


@lru_cache(maxsize=128)
def B_ideal(cfg: InertiaConfig) -> FractionalIdeal:
    """The principal ideal generated by 1 - (nu_I/#I) phi^-1."""
    ring = A_ideal(cfg).ring
    return FractionalIdeal.from_generators(ring, [B_numerator(cfg)], ring.scalar(cfg.I.order))


def _is_p_group(H: Subgroup, p: int) -> bool:
    return H.order == p ** p_valuation(H.order, p)


def _char_label(cfg: InertiaConfig, p: int, char: Character) -> str:
    return f"{cfg.label()} p[{p}] chi[{','.join(map(str, char.exponents))}]"


CHI_EQUALITY = "D not a p-group, chi faithful on G': A^chi = B^chi p-locally"
P_GROUP_CONTAINMENT = "D a p-group, I nontrivial: A contains I_D^(s-1) B p-locally"
P_GROUP_PSI_EQUALITY = "psi nontrivial on D, faithful on G': psi(A) = psi(I_D)^(s-1) psi(B) p-locally"


def verify_chi_equality(cfg: InertiaConfig, p: int, chi: Character | None = None) -> CheckRecord:
    """p-local equality of the chi-components of A and B (chi defaults to a faithful one)."""
    Gq = prime_to_p_group(cfg.G, p)
    chi = chi or faithful_character(Gq)
    if chi is None:
        return skipped("lemma-51", "chi-equality", CHI_EQUALITY, f"{cfg.label()} p[{p}]", "G' is not cyclic")
    label = _char_label(cfg, p, chi)
    if not chi.is_faithful():
        return skipped("lemma-51", "chi-equality", CHI_EQUALITY, label, "chi is not faithful on G'")
    if _is_p_group(cfg.D, p):
        return skipped("lemma-51", "chi-equality", CHI_EQUALITY, label, "D is a p-group")
    a = chi_component(chi, A_ideal(cfg), p)
    b = chi_component(chi, B_ideal(cfg), p)
    branch = "norm-vanishes" if any(chi.exponent_at(PrimarySplit(cfg.G, p).split(x)[1]) for x in cfg.I.elements) else "other"
    return check("lemma-51", "chi-equality", CHI_EQUALITY, p_local_equals(a, b, p), label, {"p": p, "chi": list(chi.exponents)}, branch)


def verify_p_group_comparisons(cfg: InertiaConfig, p: int, psis: Sequence[Character] | None = None) -> list[CheckRecord]:
    """Part (1) over Z[G], and part (2) for each admissible psi (default: one per Galois orbit)."""
    label = f"{cfg.label()} p[{p}]"
    if cfg.I.order == 1 or not _is_p_group(cfg.D, p):
        reason = "I is trivial" if cfg.I.order == 1 else "D is not a p-group"
        return [skipped("lemma-52", "part-1", P_GROUP_CONTAINMENT, label, reason)]
    s = p_rank(cfg.I, p)
    A, B = A_ideal(cfg), B_ideal(cfg)
    _, I_D = augmentation_ideals(cfg)
    D_power = FractionalIdeal.unit(A.ring)
    for _ in range(s - 1):
        D_power = D_power * I_D
    recs = [check("lemma-52", "part-1", P_GROUP_CONTAINMENT, p_local_contains(A, D_power * B, p), label, {"p": p, "s": s})]

    Gq = prime_to_p_group(cfg.G, p)
    if psis is None:
        chi = faithful_character(Gq)
        if chi is None:
            recs.append(skipped("lemma-52", "part-2", P_GROUP_PSI_EQUALITY, label, "G' is not cyclic"))
            return recs
        psis = galois_representatives(extensions(cfg.G, p, chi))
    split = PrimarySplit(cfg.G, p)
    for psi in psis:
        plabel = _char_label(cfg, p, psi)
        chi = _restriction(psi, split)
        if psi.is_trivial_on(cfg.D):
            continue
        if not chi.is_faithful():
            recs.append(skipped("lemma-52", "part-2", P_GROUP_PSI_EQUALITY, plabel, "psi is not faithful on G'"))
            continue
        lhs = psi_ideal(psi, A)
        rhs = psi_ideal(psi, B)
        for _ in range(s - 1):
            rhs = rhs * psi_ideal(psi, I_D)
        recs.append(
            check("lemma-52", "part-2", P_GROUP_PSI_EQUALITY, p_local_equals(lhs, rhs, p), plabel, {"p": p, "s": s, "psi": list(psi.exponents)})
        )
    return recs


def _restriction(psi: Character, split: PrimarySplit) -> Character:
    """psi restricted to G', as a character of the prime-to-p group."""
    Gq = split.prime_to_p
    ex = []
    for i, n in enumerate(Gq.factors):
        unit = tuple(1 if j == i else 0 for j in range(len(Gq.factors)))
        g = split.join(split.p_part.identity, unit) if n > 1 else split.group.identity
        if n == 1:
            ex.append(0)
            continue
        # psi(g) = zeta_{ord psi}^a has order dividing n; rewrite as exponent c/n
        a = psi.exponent_at(g)
        ex.append(a * n // psi.order % n)
    return Character(Gq, tuple(ex))


# the criterion ------------------------------------------------------------


@dataclass
class CriterionResult:
    i_prime: bool
    ii_prime: bool
    witness: Character | None
    branch: str

    @property
    def consistent(self) -> bool:
        return self.i_prime == self.ii_prime


def criterion(G: FiniteAbelianGroup, p: int, chi: Character, places: Sequence[InertiaConfig]) -> CriterionResult:
    """Evaluate (i'), the product containment, and (ii'), the group-theoretic condition."""
    if chi.group != prime_to_p_group(G, p):
        raise CharacterInputError("chi must be a character of the prime-to-p part of G")
    if not chi.is_faithful():
        raise CharacterInputError("chi is not faithful on G'; replace G by G/ker(chi) first")
    for cfg in places:
        if cfg.G != G:
            raise GroupInputError("every place must live in the same group G")
    target = chi_map(G, p, chi).target
    prod_A = FractionalIdeal.unit(target)
    prod_B = FractionalIdeal.unit(target)
    for cfg in places:
        prod_A = prod_A * chi_component(chi, A_ideal(cfg), p)
        prod_B = prod_B * chi_component(chi, B_ideal(cfg), p)
    i_prime = p_local_contains(prod_A, prod_B, p)
    witness = exists_psi(G, p, chi, [cfg.D for cfg in places])
    local_ok = all(not _is_p_group(cfg.D, p) or is_cyclic(cfg.I) for cfg in places)
    if witness is None:
        branch = "theta-zero"
    elif local_ok:
        branch = "local-conditions"
    else:
        branch = "witness-psi"
    return CriterionResult(i_prime, witness is None or local_ok, witness, branch)


def criterion_check(G: FiniteAbelianGroup, p: int, chi: Character, places: Sequence[InertiaConfig], name: str = "") -> CheckRecord:
    res = criterion(G, p, chi, places)
    label = name or f"G[{'.'.join(map(str, G.factors))}] p[{p}] chi[{','.join(map(str, chi.exponents))}] places[{len(places)}]"
    witness = {
        "p": p,
        "chi": list(chi.exponents),
        "places": [cfg.as_dict() for cfg in places],
        "i_prime": res.i_prime,
        "ii_prime": res.ii_prime,
        "psi": list(res.witness.exponents) if res.witness else None,
    }
    return check(
        "theorem3",
        "criterion-equivalence",
        "prod B_v^chi inside prod A_v^chi p-locally iff (no psi witness, or every D_v not a p-group or I_v cyclic)",
        res.consistent,
        label,
        witness,
        res.branch,
    )


def _configs(G: FiniteAbelianGroup, specs) -> list[InertiaConfig]:
    return [InertiaConfig.build(G, i, d, phi) for i, d, phi in specs]


def curated_criterion_data() -> list[tuple[str, FiniteAbelianGroup, int, Character, list[InertiaConfig]]]:
    """Hand-picked data plus every single-place datum over a few small groups."""
    from .sweep import config_orbits, to_inertia_config

    data = []

    def add(name, G, p, places, chi=None):
        chi = chi or faithful_character(prime_to_p_group(G, p))
        data.append((name, G, p, chi, places))

    C3, C9, C33 = FiniteAbelianGroup((3,)), FiniteAbelianGroup((9,)), FiniteAbelianGroup((3, 3))
    lines = [[(1, 0)], [(0, 1)], [(1, 1)], [(1, 2)]]
    four = _configs(C33, [(h, h, (0, 0)) for h in lines])
    whole = _configs(C33, [([(1, 0), (0, 1)], [(1, 0), (0, 1)], (0, 0))])
    add("C3 one ramified place", C3, 3, _configs(C3, [([(1,)], [(1,)], (0,))]))
    add("C9 cyclic inertia, two places", C9, 3, _configs(C9, [([(3,)], [(1,)], (1,)), ([(1,)], [(1,)], (0,))]))
    add("C3xC3 non-cyclic inertia with witness", C33, 3, whole)
    add("C3xC3 four lines", C33, 3, four)
    add("C3xC3 four lines and full inertia", C33, 3, four + whole)
    add("C3xC3 full inertia and one line", C33, 3, whole + four[:1])
    add("C3xC3 full inertia and three lines", C33, 3, whole + four[:3])
    C335 = FiniteAbelianGroup((3, 3, 5))
    add(
        "C3xC3xC5 non-cyclic inertia, D a p-group",
        C335, 3, _configs(C335, [([(1, 0, 0), (0, 1, 0)], [(1, 0, 0), (0, 1, 0)], (0, 0, 0))]),
    )
    add(
        "C3xC3xC5 non-cyclic inertia, D not a p-group",
        C335, 3, _configs(C335, [([(1, 0, 0), (0, 1, 0)], [(0, 0, 1)], (0, 0, 1))]),
    )
    C55 = FiniteAbelianGroup((5, 5))
    add("C5xC5 full inertia", C55, 5, _configs(C55, [([(1, 0), (0, 1)], [(1, 0), (0, 1)], (0, 0))]))

    for factors, p in [((3,), 3), ((9,), 3), ((3, 3), 3), ((3, 5), 3), ((3, 5), 5), ((9, 3), 3), ((3, 7), 3), ((5,), 5)]:
        G = FiniteAbelianGroup(factors)
        for orb in config_orbits(G):
            cfg = to_inertia_config(G, orb[0])
            add(f"{G} p={p} single place {cfg.label()}", G, p, [cfg])
    return data
