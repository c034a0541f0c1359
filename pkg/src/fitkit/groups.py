"""Finite abelian groups presented as products of cyclic groups.

Elements are exponent tuples ``(a_1, ..., a_k)`` with ``0 <= a_i < n_i``; the
group law is componentwise addition.  Subgroups carry their full sorted element
list, which keeps everything checkable by enumeration at the sizes we care about
(a few hundred elements).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, lcm, prod
from typing import Iterable, Sequence

from .lattice import smith_form

Element = tuple[int, ...]


class GroupInputError(ValueError):
    """Raised for malformed group data (bad exponents, non-subgroups, ...)."""


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def p_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))
        if any(n < 1 for n in self.factors):
            raise GroupInputError(f"cyclic factor orders must be >= 1, got {self.factors}")

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def identity(self) -> Element:
        return (0,) * len(self.factors)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.factors)))

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def index(self, e: Element) -> int:
        return self._index[e]

    def check(self, e: Sequence[int]) -> Element:
        e = tuple(int(a) for a in e)
        if len(e) != len(self.factors) or any(not 0 <= a < n for a, n in zip(e, self.factors)):
            raise GroupInputError(f"{list(e)} is not an element of C{self.factors}")
        return e

    def reduce(self, e: Sequence[int]) -> Element:
        return tuple(a % n for a, n in zip(e, self.factors))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.factors))

    def neg(self, x: Element) -> Element:
        return tuple(-a % n for a, n in zip(x, self.factors))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % n for a, b, n in zip(x, y, self.factors))

    def scale(self, k: int, x: Element) -> Element:
        return tuple(k * a % n for a, n in zip(x, self.factors))

    def element_order(self, x: Element) -> int:
        return lcm(1, *(n // gcd(a, n) for a, n in zip(x, self.factors)))

    @cached_property
    def exponent(self) -> int:
        return lcm(1, *self.factors)

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        """``add_table[i][j]`` is the index of ``elements[i] + elements[j]``."""
        els, idx = self.elements, self._index
        return tuple(tuple(idx[self.add(x, y)] for y in els) for x in els)

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        return tuple(self._index[self.neg(x)] for x in self.elements)

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(self.unit_vectors()), self.elements)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (), (self.identity,))

    def unit_vectors(self) -> list[Element]:
        k = len(self.factors)
        return [tuple(int(i == j) % self.factors[j] for j in range(k)) for i in range(k)]

    def __str__(self) -> str:
        if not self.factors or self.order == 1:
            return "C1"
        return "x".join(f"C{n}" for n in self.factors if n > 1)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteAbelianGroup
    generators: tuple[Element, ...]
    elements: tuple[Element, ...] = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[Element]:
        return frozenset(self.elements)

    def __contains__(self, x: Element) -> bool:
        return x in self.element_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.parent, self.elements))

    def issubgroup(self, other: "Subgroup") -> bool:
        return self.element_set <= other.element_set

    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors ``d_1 >= d_2 >= ...`` with ``d_{i+1} | d_i`` (empty if trivial)."""
        parts: list[list[int]] = []
        for p in prime_factors(self.order):
            parts.append(sorted(_p_partition(self, p), reverse=True))
        width = max((len(x) for x in parts), default=0)
        out = []
        for i in range(width):
            out.append(prod(x[i] if i < len(x) else 1 for x in parts))
        return tuple(out)

    def __str__(self) -> str:
        inv = self.invariant_factors
        return "x".join(f"C{d}" for d in inv) if inv else "C1"


def _p_partition(H: Subgroup, p: int) -> list[int]:
    """Orders of the cyclic factors of the p-Sylow subgroup of ``H``.

    Uses |H[p^k]| = p^(sum_i min(lambda_i, k)), so the number of parts of
    order >= p^k is log_p(|H[p^k]| / |H[p^(k-1)]|).
    """
    G = H.parent
    counts = [1]
    k = 0
    while True:
        k += 1
        pk = p**k
        c = sum(1 for x in H.elements if G.scale(pk, x) == G.identity)
        if c == counts[-1]:
            break
        counts.append(c)
    ge = [p_valuation(counts[k] // counts[k - 1], p) for k in range(1, len(counts))]
    lam = []
    for k, cnt in enumerate(ge, start=1):
        nxt = ge[k] if k < len(ge) else 0
        lam += [p**k] * (cnt - nxt)
    return lam


def subgroup_generated(G: FiniteAbelianGroup, gens: Iterable[Sequence[int]]) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``gens``."""
    gens = tuple(G.check(g) for g in gens)
    elems = {G.identity}
    for g in gens:
        if g in elems:
            continue
        cyc = [G.identity]
        x = g
        while x != G.identity:
            cyc.append(x)
            x = G.add(x, g)
        elems = {G.add(a, c) for a in elems for c in cyc}
    return Subgroup(G, gens, tuple(sorted(elems)))


def subgroup_from_elements(G: FiniteAbelianGroup, elems: Iterable[Element]) -> Subgroup:
    elems = tuple(sorted(set(elems)))
    return Subgroup(G, elems, elems)


def is_cyclic(H: Subgroup) -> bool:
    return len(H.invariant_factors) <= 1


def p_rank(H: Subgroup, p: int) -> int:
    """Number of cyclic factors in the p-Sylow subgroup of ``H``."""
    return sum(1 for d in H.invariant_factors if d % p == 0)


@dataclass(frozen=True)
class CyclicDecomposition:
    """Internal direct product ``H = <sigma_1> x ... x <sigma_s>``; parts may be trivial."""

    subgroup: Subgroup
    parts: tuple[tuple[Element, int], ...]

    @property
    def s(self) -> int:
        return len(self.parts)

    @property
    def generators(self) -> tuple[Element, ...]:
        return tuple(g for g, _ in self.parts)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(n for _, n in self.parts)

    def part_subgroups(self) -> list[Subgroup]:
        G = self.subgroup.parent
        return [subgroup_generated(G, [g]) for g, _ in self.parts]

    def padded(self, s: int) -> "CyclicDecomposition":
        if s < self.s:
            raise GroupInputError(f"cannot pad a decomposition with {self.s} parts down to {s}")
        G = self.subgroup.parent
        return CyclicDecomposition(self.subgroup, self.parts + ((G.identity, 1),) * (s - self.s))

    def validate(self) -> "CyclicDecomposition":
        """Check that the parts really form an internal direct product equal to the subgroup."""
        G = self.subgroup.parent
        for g, n in self.parts:
            if G.element_order(g) != n:
                raise GroupInputError(f"part generator {g} does not have order {n}")
        if prod(self.orders) != self.subgroup.order:
            raise GroupInputError("part orders do not multiply to the subgroup order")
        span = subgroup_generated(G, [g for g, _ in self.parts])
        if span != self.subgroup:
            raise GroupInputError("parts do not generate the subgroup")
        return self


def cyclic_decomposition(H: Subgroup, pad_to: int | None = None) -> CyclicDecomposition:
    """Decompose ``H`` into cyclic parts of orders equal to its invariant factors.

    Generators are searched in enumeration order, so the result is deterministic.
    With ``pad_to`` trivial parts are appended up to that many parts.
    """
    G = H.parent
    targets = H.invariant_factors
    if pad_to is not None and pad_to < len(targets):
        raise GroupInputError(
            f"{H} needs at least {len(targets)} cyclic parts; cannot use pad_to={pad_to}"
        )
    by_order: dict[int, list[Element]] = {}
    for x in H.elements:
        by_order.setdefault(G.element_order(x), []).append(x)

    def search(chosen: list[Element], span: frozenset[Element]) -> list[Element] | None:
        k = len(chosen)
        if k == len(targets):
            return chosen
        n = targets[k]
        for x in by_order.get(n, ()):
            cyc = [G.scale(i, x) for i in range(n)]
            new = frozenset(G.add(a, c) for a in span for c in cyc)
            if len(new) == len(span) * n:
                found = search(chosen + [x], new)
                if found is not None:
                    return found
        return None

    gens = search([], frozenset([G.identity]))
    if gens is None:  # cannot happen for a finite abelian group
        raise AssertionError(f"no cyclic decomposition found for {H}")
    dec = CyclicDecomposition(H, tuple(zip(gens, targets)))
    if pad_to is not None:
        dec = dec.padded(pad_to)
    return dec


def decomposition_from_parts(H: Subgroup, parts: Iterable[tuple[Sequence[int], int]]) -> CyclicDecomposition:
    G = H.parent
    dec = CyclicDecomposition(H, tuple((G.check(g), int(n)) for g, n in parts))
    return dec.validate()


def quotient_group(G: FiniteAbelianGroup, H: Subgroup):
    """Return ``(Q, project)`` with ``Q`` the invariant-factor presentation of ``G/H``.

    The presentation comes from the Smith form of the relation lattice spanned by
    ``n_i e_i`` and the generators of ``H``; ``project`` maps elements of ``G``
    to elements of ``Q`` and is a surjective homomorphism with kernel ``H``.
    """
    k = len(G.factors)
    rel = [[n if i == j else 0 for j in range(k)] for i, n in enumerate(G.factors)]
    rel += [list(h) for h in H.generators] or []
    if k == 0:
        Q = FiniteAbelianGroup(())
        return Q, lambda x: ()
    diag, V = smith_form(rel)
    diag = diag + [0] * (k - len(diag))
    keep = [i for i, d in enumerate(diag) if d != 1]
    if any(diag[i] == 0 for i in keep):  # pragma: no cover - G is finite
        raise AssertionError("infinite quotient of a finite group")
    Q = FiniteAbelianGroup(tuple(diag[i] for i in keep))

    def project(x: Sequence[int]) -> Element:
        y = [sum(x[r] * V[r][c] for r in range(k)) for c in range(k)]
        return tuple(y[i] % diag[i] for i in keep)

    return Q, project


def sylow_split(G: FiniteAbelianGroup, p: int) -> tuple[Subgroup, Subgroup]:
    """The p-Sylow subgroup and its complement of order prime to p."""
    Gp = [x for x in G.elements if _log(G.element_order(x), p) >= 0]
    Gq = [x for x in G.elements if G.element_order(x) % p]
    return subgroup_from_elements(G, Gp), subgroup_from_elements(G, Gq)


def _log(n: int, p: int) -> int:
    # returns v if n == p**v, else -1
    v = p_valuation(n, p)
    return v if p**v == n else -1


@dataclass(frozen=True)
class PrimarySplit:
    """Explicit isomorphism ``G -> G_p x G'`` by reducing each coordinate (CRT).

    ``G_p`` and ``G'`` are presented with one factor per factor of ``G``
    (orders ``p^v`` and ``n/p^v``; factors of order 1 are kept so coordinates align).
    """

    group: FiniteAbelianGroup
    p: int

    @cached_property
    def p_part(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(tuple(self.p ** p_valuation(n, self.p) for n in self.group.factors))

    @cached_property
    def prime_to_p(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(
            tuple(n // self.p ** p_valuation(n, self.p) for n in self.group.factors)
        )

    def split(self, x: Element) -> tuple[Element, Element]:
        return (
            tuple(a % m for a, m in zip(x, self.p_part.factors)),
            tuple(a % m for a, m in zip(x, self.prime_to_p.factors)),
        )

    def join(self, xp: Element, xq: Element) -> Element:
        out = []
        for a, b, m1, m2 in zip(xp, xq, self.p_part.factors, self.prime_to_p.factors):
            # solve c = a mod m1, c = b mod m2
            c = next(c for c in range(a, m1 * m2 + 1, m1) if c % m2 == b) if m1 * m2 > 1 else 0
            out.append(c % (m1 * m2))
        return tuple(out)


@dataclass(frozen=True)
class Character:
    """A character of ``group``: ``psi(e_i) = exp(2 pi i c_i / n_i)``."""

    group: FiniteAbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        ex = tuple(int(c) % n for c, n in zip(self.exponents, self.group.factors))
        if len(ex) != len(self.group.factors):
            raise GroupInputError("character needs one exponent per cyclic factor")
        object.__setattr__(self, "exponents", ex)

    @cached_property
    def order(self) -> int:
        return lcm(1, *(n // gcd(c, n) for c, n in zip(self.exponents, self.group.factors)))

    def exponent_at(self, x: Element) -> int:
        """``psi(x) = zeta_m ** exponent_at(x)`` with ``m = self.order``."""
        m = self.order
        return sum(c * a * m // n for c, a, n in zip(self.exponents, x, self.group.factors)) % m

    def is_trivial_on(self, H: Subgroup) -> bool:
        return all(self.exponent_at(x) == 0 for x in H.elements)

    def kernel(self) -> Subgroup:
        return subgroup_from_elements(
            self.group, (x for x in self.group.elements if self.exponent_at(x) == 0)
        )

    def is_faithful(self) -> bool:
        return self.kernel().order == 1

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.group, tuple(a + b for a, b in zip(self.exponents, other.exponents)))


def characters(G: FiniteAbelianGroup) -> list[Character]:
    return [Character(G, e) for e in G.elements]


def all_subgroups(G: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup of ``G``, sorted by (order, elements)."""
    seen = {G.trivial().elements: G.trivial()}
    frontier = [G.trivial()]
    while frontier:
        nxt = []
        for H in frontier:
            for x in G.elements:
                if x in H:
                    continue
                K = subgroup_generated(G, list(H.generators) + [x])
                if K.elements not in seen:
                    seen[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(seen.values(), key=lambda H: (H.order, H.elements))


@dataclass(frozen=True)
class InertiaConfig:
    """Data ``I <= D <= G`` with ``D/I`` cyclic, generated by the class of ``phi_lift``.

    ``decomposition`` is a cyclic decomposition of ``I`` (parts may be trivial).
    """

    G: FiniteAbelianGroup
    I: Subgroup
    D: Subgroup
    phi_lift: Element
    decomposition: CyclicDecomposition

    def __post_init__(self):
        if not self.I.issubgroup(self.D):
            raise GroupInputError("inertia subgroup is not contained in the decomposition subgroup")
        if self.phi_lift not in self.D:
            raise GroupInputError(f"Frobenius lift {self.phi_lift} is not in D")
        if subgroup_generated(self.G, list(self.I.generators) + [self.phi_lift]) != self.D:
            raise GroupInputError("D/I is not generated by the class of the Frobenius lift")
        if self.decomposition.subgroup != self.I:
            raise GroupInputError("decomposition is not a decomposition of I")

    @classmethod
    def build(
        cls,
        G: FiniteAbelianGroup,
        inertia_gens: Iterable[Sequence[int]],
        decomp_gens: Iterable[Sequence[int]],
        phi_lift: Sequence[int],
        parts: Iterable[tuple[Sequence[int], int]] | None = None,
        pad_to: int | None = None,
    ) -> "InertiaConfig":
        I = subgroup_generated(G, inertia_gens)
        D = subgroup_generated(G, list(decomp_gens) + list(I.generators))
        phi = G.check(phi_lift)
        dec = decomposition_from_parts(I, parts) if parts is not None else cyclic_decomposition(I)
        if pad_to is not None:
            dec = dec.padded(pad_to)
        return cls(G, I, D, phi, dec)

    @property
    def s(self) -> int:
        return self.decomposition.s

    def with_decomposition(self, dec: CyclicDecomposition) -> "InertiaConfig":
        return InertiaConfig(self.G, self.I, self.D, self.phi_lift, dec.validate())

    def with_lift(self, phi: Element) -> "InertiaConfig":
        return InertiaConfig(self.G, self.I, self.D, phi, self.decomposition)

    def lifts(self) -> list[Element]:
        """Every lift of the Frobenius class, i.e. the coset ``phi_lift + I``."""
        return sorted({self.G.add(self.phi_lift, x) for x in self.I.elements})

    def key(self) -> tuple:
        """Sort/dedupe key: group factors, I, D and the Frobenius coset."""
        return (self.G.factors, self.I.elements, self.D.elements, self.lifts()[0])

    def describe(self) -> str:
        return f"G={self.G} I={self.I} D={self.D} phi={list(self.phi_lift)} s={self.s}"

    def label(self) -> str:
        """Compact sortable identifier used to order report records."""
        g = ".".join(str(n) for n in self.G.factors)
        i = ";".join(",".join(map(str, x)) for x in self.decomposition.generators)
        d = ";".join(",".join(map(str, x)) for x in self.D.generators)
        return f"G[{g}] I[{i}] D[{d}] phi[{','.join(map(str, self.phi_lift))}]"

    def as_dict(self) -> dict:
        """The config in the input-file format (inverse of loading a config file)."""
        return {
            "group": list(self.G.factors),
            "inertia_gens": [list(x) for x in self.decomposition.generators if any(x)],
            "decomp_gens": [list(x) for x in self.D.generators],
            "frobenius_lift": list(self.phi_lift),
            "decomposition_override": [[list(g), n] for g, n in self.decomposition.parts],
        }
