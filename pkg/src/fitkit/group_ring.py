"""Integral group rings Z[G] and the distinguished elements nu, g, g~, h, tau_l."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groups import Element, FiniteAbelianGroup, InertiaConfig, Subgroup, quotient_group
from .lattice import Lattice
from .rings import RingElement, group_ring


class GroupRingElement(RingElement):
    """An element of Z[G], dense in the enumeration order of ``G.elements``."""

    @classmethod
    def from_dict(cls, G: FiniteAbelianGroup, terms: dict[Element, int]) -> "GroupRingElement":
        coeffs = [0] * G.order
        for g, c in terms.items():
            coeffs[G.index(G.reduce(g))] += c
        return cls(group_ring(G), tuple(coeffs))

    @classmethod
    def of(cls, G: FiniteAbelianGroup, g: Sequence[int], c: int = 1) -> "GroupRingElement":
        return cls.from_dict(G, {tuple(g): c})

    @classmethod
    def scalar(cls, G: FiniteAbelianGroup, c: int) -> "GroupRingElement":
        return cls.of(G, G.identity, c)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.ring.group

    def terms(self) -> dict[Element, int]:
        els = self.group.elements
        return {els[i]: c for i, c in enumerate(self.coeffs) if c}

    def augmentation(self) -> int:
        return sum(self.coeffs)

    def map_to(self, H: FiniteAbelianGroup, hom) -> "GroupRingElement":
        """Push forward along a group homomorphism ``hom: G -> H``."""
        out: dict[Element, int] = {}
        for g, c in self.terms().items():
            h = hom(g)
            out[h] = out.get(h, 0) + c
        return GroupRingElement.from_dict(H, out)

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for g, c in self.terms().items():
            name = "1" if not any(g) else "g" + "".join(str(a) for a in g)
            parts.append(f"{c}*{name}")
        return " + ".join(parts)


@dataclass(frozen=True)
class ScaledElement:
    """``numerator / denominator`` in Q[G], with a positive integer denominator."""

    numerator: GroupRingElement
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be a positive integer")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScaledElement):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self) -> int:
        return hash(tuple(Fraction(c, self.denominator) for c in self.numerator.coeffs))

    def __mul__(self, other: "ScaledElement | GroupRingElement") -> "ScaledElement":
        if isinstance(other, ScaledElement):
            return ScaledElement(self.numerator * other.numerator, self.denominator * other.denominator)
        return ScaledElement(self.numerator * other, self.denominator)


def norm_element(H: Subgroup) -> GroupRingElement:
    """nu_H, the sum of the elements of ``H`` in Z[parent]."""
    return GroupRingElement.from_dict(H.parent, {h: 1 for h in H.elements})


def is_regular(x: GroupRingElement) -> bool:
    """Whether multiplication by ``x`` is injective on Z[G] (full-rank multiplication matrix)."""
    ring = x.ring
    lat = Lattice(ring.dim)
    for v in ring.multiples(x.coeffs):
        lat.add(v)
    return lat.is_full_rank()


@dataclass(frozen=True)
class SpecialElements:
    g: GroupRingElement  # in Z[G/I]
    g_tilde: GroupRingElement  # in Z[G]
    h: ScaledElement  # (#I * h, #I)
    quotient: FiniteAbelianGroup
    project: object  # G -> G/I

    @property
    def h_numerator(self) -> GroupRingElement:
        return self.h.numerator


def special_elements(cfg: InertiaConfig, check: bool = True) -> SpecialElements:
    """g = 1 - phi^-1 + #I in Z[G/I], g~ = 1 - phi~^-1 + #I in Z[G], and h scaled by #I."""
    G, I, phi = cfg.G, cfg.I, cfg.phi_lift
    n = I.order
    g_tilde = GroupRingElement.from_dict(G, {G.identity: 1 + n}) - GroupRingElement.of(G, G.neg(phi))
    Q, project = quotient_group(G, I)
    qphi = project(phi)
    g = GroupRingElement.from_dict(Q, {Q.identity: 1 + n}) - GroupRingElement.of(Q, Q.neg(qphi))
    nu = norm_element(I)
    h_num = n - nu * GroupRingElement.of(G, G.neg(phi)) + nu * n
    h = ScaledElement(h_num, n)
    if check:
        for name, x in (("g~", g_tilde), ("g", g), ("#I*h", h_num)):
            if not is_regular(x):
                raise AssertionError(f"{name} is a zero divisor for {cfg.describe()}")
    return SpecialElements(g, g_tilde, h, Q, project)


def augmentation_generators(cfg: InertiaConfig) -> tuple[list[GroupRingElement], list[GroupRingElement]]:
    """``tau_l = sigma_l - 1`` and the generators ``tau_1..tau_s, 1 - phi~^-1`` of I_D."""
    G = cfg.G
    one = GroupRingElement.scalar(G, 1)
    taus = [GroupRingElement.of(G, sigma) - one for sigma in cfg.decomposition.generators]
    return taus, taus + [one - GroupRingElement.of(G, G.neg(cfg.phi_lift))]


def part_norms(cfg: InertiaConfig) -> list[GroupRingElement]:
    """nu_l for each cyclic part of the decomposition of I (1 for trivial parts)."""
    return [norm_element(H) for H in cfg.decomposition.part_subgroups()]
