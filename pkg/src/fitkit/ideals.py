"""Fractional ideals ``delta^-1 * L`` of Z[zeta_m][H], with L an integral lattice ideal.

The numerator is kept twice: as a Hermite-form lattice (for membership, equality
and indices) and as a short list of module generators (for cheap products).
Comparisons never invert anything; they cross-multiply by the other side's
denominator, which must be a non-zero-divisor.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

from .lattice import Lattice, quotient_structure
from .rings import CycloGroupRing, RingElement, Vec


class IdealInputError(ValueError):
    """Raised for ideals over mismatched rings or with a zero-divisor denominator."""


def _vec(ring: CycloGroupRing, x) -> Vec:
    if isinstance(x, RingElement):
        if x.ring != ring:
            raise IdealInputError(f"element of {x.ring} used in an ideal of {ring}")
        return x.coeffs
    if isinstance(x, int):
        return ring.scalar(x)
    x = tuple(int(c) for c in x)
    if len(x) != ring.dim:
        raise IdealInputError("generator has the wrong length")
    return x


def _span(ring: CycloGroupRing, gens: Iterable[Vec], lat: Lattice | None = None, kept=None):
    lat = Lattice(ring.dim) if lat is None else lat
    kept = [] if kept is None else kept
    for x in gens:
        if not any(x) or lat.contains(x):
            continue
        kept.append(x)
        for y in ring.multiples(x):
            lat.add(y)
    return lat, kept


def _regular(ring: CycloGroupRing, x: Vec) -> bool:
    lat = Lattice(ring.dim)
    for y in ring.multiples(x):
        lat.add(y)
    return lat.is_full_rank()


class FractionalIdeal:
    """``denominator^-1 * (ideal generated by gens)`` inside Q(zeta_m)[H]."""

    __slots__ = ("ring", "lattice", "gens", "denominator")

    def __init__(self, ring: CycloGroupRing, lattice: Lattice, gens: Sequence[Vec], denominator: Vec):
        self.ring = ring
        self.lattice = lattice
        self.gens = tuple(gens)
        self.denominator = denominator

    # construction --------------------------------------------------------

    @classmethod
    def from_generators(cls, ring: CycloGroupRing, gens: Iterable, denominator=1, check_denominator: bool = True):
        den = _vec(ring, denominator)
        if check_denominator and den != ring.one and not _regular(ring, den):
            raise IdealInputError("denominator is a zero divisor")
        lat, kept = _span(ring, (_vec(ring, x) for x in gens))
        return cls(ring, lat, kept, den)

    @classmethod
    def unit(cls, ring: CycloGroupRing) -> "FractionalIdeal":
        return cls.from_generators(ring, [ring.one])

    @classmethod
    def zero(cls, ring: CycloGroupRing) -> "FractionalIdeal":
        return cls(ring, Lattice(ring.dim), (), ring.one)

    # basic properties ----------------------------------------------------

    @property
    def group(self):
        return self.ring.group

    @property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return self.lattice.basis()

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def is_zero(self) -> bool:
        return self.lattice.rank == 0

    def is_integral(self) -> bool:
        return self.denominator == self.ring.one

    def __repr__(self) -> str:
        den = "" if self.is_integral() else ", fractional"
        return f"FractionalIdeal({self.ring}, rank={self.rank}, gens={len(self.gens)}{den})"

    # arithmetic ----------------------------------------------------------

    def _check(self, other: "FractionalIdeal") -> None:
        if self.ring != other.ring:
            raise IdealInputError(f"ideals of {self.ring} and {other.ring} cannot be combined")

    def scaled(self, x) -> "FractionalIdeal":
        """The numerator multiplied by the ring element ``x`` (denominator unchanged)."""
        xv = _vec(self.ring, x)
        mul = self.ring.mul
        # x*L is spanned over Z by x times a Z-basis of L
        lat = Lattice(self.ring.dim)
        for b in self.lattice.generating_rows():
            lat.add(mul(b, xv))
        gens = [y for y in (mul(g, xv) for g in self.gens) if any(y)]
        return FractionalIdeal(self.ring, lat, gens, self.denominator)

    def with_denominator(self, den) -> "FractionalIdeal":
        d = _vec(self.ring, den)
        if d != self.ring.one and not _regular(self.ring, d):
            raise IdealInputError("denominator is a zero divisor")
        return FractionalIdeal(self.ring, self.lattice, self.gens, d)

    def __add__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        self._check(other)
        ring = self.ring
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.denominator == other.denominator:
            big, small = (self, other) if self.rank >= other.rank else (other, self)
            lat, kept = _span(ring, small.gens, big.lattice.copy(), list(big.gens))
            return FractionalIdeal(ring, lat, kept, self.denominator)
        a = self.scaled(other.denominator)
        b = other.scaled(self.denominator)
        den = ring.mul(self.denominator, other.denominator)
        lat, kept = _span(ring, b.gens, a.lattice.copy(), list(a.gens))
        return FractionalIdeal(ring, lat, kept, den)

    def __mul__(self, other) -> "FractionalIdeal":
        if not isinstance(other, FractionalIdeal):
            return self.scaled(other)
        self._check(other)
        ring = self.ring
        mul = ring.mul
        den = mul(self.denominator, other.denominator)
        # a*b is spanned over Z by (Z-basis of a) x (module generators of b)
        if self.rank * len(other.gens) <= other.rank * len(self.gens):
            basis_side, gen_side = self, other
        else:
            basis_side, gen_side = other, self
        lat = Lattice(ring.dim)
        rows = basis_side.lattice.generating_rows()
        for g in gen_side.gens:
            for b in rows:
                lat.add(mul(b, g))
        seen = set()
        gens = []
        for x in self.gens:
            for y in other.gens:
                z = mul(x, y)
                if any(z) and z not in seen:
                    seen.add(z)
                    gens.append(z)
        return FractionalIdeal(ring, lat, gens, den)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "FractionalIdeal":
        out = FractionalIdeal.unit(self.ring)
        for _ in range(k):
            out = out * self
        return out

    # comparison ----------------------------------------------------------

    def _cleared(self, other: "FractionalIdeal") -> tuple[Lattice, Lattice]:
        """Lattices ``delta_other * L_self`` and ``delta_self * L_other``."""
        self._check(other)
        if self.denominator == other.denominator:
            return self.lattice, other.lattice
        return self.scaled(other.denominator).lattice, other.scaled(self.denominator).lattice

    def cleared_pair(self, other: "FractionalIdeal") -> tuple[Lattice, Lattice]:
        return self._cleared(other)

    def contains(self, other: "FractionalIdeal") -> bool:
        """``other`` is a subset of ``self``."""
        mine, theirs = self._cleared(other)
        return mine.contains_lattice(theirs)

    def equals(self, other: "FractionalIdeal") -> bool:
        mine, theirs = self._cleared(other)
        return mine.basis() == theirs.basis()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FractionalIdeal):
            return NotImplemented
        return self.ring == other.ring and self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def __le__(self, other: "FractionalIdeal") -> bool:
        return other.contains(self)

    def __ge__(self, other: "FractionalIdeal") -> bool:
        return self.contains(other)

    def contains_element(self, x) -> bool:
        v = self.ring.mul(_vec(self.ring, x), self.denominator)
        return self.lattice.contains(v)

    # serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "ring": {"conductor": self.ring.conductor, "group": list(self.ring.group.factors)},
            "basis": [[str(c) for c in row] for row in self.basis],
            "denominator": [str(c) for c in self.denominator],
            "generators": [[str(c) for c in g] for g in self.gens],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FractionalIdeal":
        from .groups import FiniteAbelianGroup
        from .rings import cyclo_group_ring

        ring = cyclo_group_ring(int(data["ring"]["conductor"]), FiniteAbelianGroup(tuple(data["ring"]["group"])))
        lat = Lattice(ring.dim, ([int(c) for c in row] for row in data["basis"]))
        gens = [tuple(int(c) for c in g) for g in data.get("generators", data["basis"])]
        den = tuple(int(c) for c in data["denominator"])
        return cls(ring, lat, gens, den)


# module-level helpers ----------------------------------------------------


def ideal_from_generators(ring: CycloGroupRing, gens: Iterable, denom=1) -> FractionalIdeal:
    return FractionalIdeal.from_generators(ring, gens, denom)


def ideal_sum(*ideals: FractionalIdeal) -> FractionalIdeal:
    out = ideals[0]
    for a in ideals[1:]:
        out = out + a
    return out


def ideal_product(*ideals: FractionalIdeal) -> FractionalIdeal:
    out = ideals[0]
    for a in ideals[1:]:
        out = out * a
    return out


def contains(a: FractionalIdeal, b: FractionalIdeal) -> bool:
    """``b`` is contained in ``a``."""
    return a.contains(b)


def equals(a: FractionalIdeal, b: FractionalIdeal) -> bool:
    return a.equals(b)


def _index(big: Lattice, small: Lattice) -> int | None:
    if big.rank != small.rank:
        return None
    if big.is_full_rank():
        q, r = divmod(small.determinant(), big.determinant())
        assert r == 0
        return q
    inv, _ = quotient_structure(big, small)
    out = 1
    for d in inv:
        out *= d
    return out


def quotient_index(a: FractionalIdeal, b: FractionalIdeal) -> int | None:
    """Order of ``a / b`` for ``b`` inside ``a``; None means infinite."""
    la, lb = a._cleared(b)
    if not la.contains_lattice(lb):
        raise IdealInputError("quotient_index needs the second ideal inside the first")
    return _index(la, lb)


def p_local_contains(a: FractionalIdeal, b: FractionalIdeal, p: int) -> bool:
    """Whether ``b (x) Z_p`` is contained in ``a (x) Z_p``."""
    la, lb = a._cleared(b)
    if la.contains_lattice(lb):
        return True
    s = la.copy()
    for r in lb.basis():
        s.add(r)
    idx = _index(s, la)
    return idx is not None and gcd(idx, p) == 1


def p_local_equals(a: FractionalIdeal, b: FractionalIdeal, p: int) -> bool:
    return p_local_contains(a, b, p) and p_local_contains(b, a, p)
