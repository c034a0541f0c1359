"""Enumeration of groups and of (I, D, phi) data up to automorphisms of G."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .groups import (
    Element,
    FiniteAbelianGroup,
    InertiaConfig,
    Subgroup,
    cyclic_decomposition,
    p_valuation,
    prime_factors,
    subgroup_generated,
)

ORDER_CAP = 200


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def abelian_groups_of_order(n: int) -> list[FiniteAbelianGroup]:
    """Every abelian group of order n, as products of prime-power cyclic factors.

    Factors are grouped by prime (increasing) with exponents decreasing.
    """
    per_prime = []
    for p in prime_factors(n):
        a = p_valuation(n, p)
        per_prime.append([tuple(p**k for k in lam) for lam in _partitions(a)])
    out = []
    for combo in itertools.product(*per_prime):
        out.append(FiniteAbelianGroup(tuple(x for part in combo for x in part)))
    return out


def odd_abelian_groups(max_order: int, min_order: int = 3) -> list[FiniteAbelianGroup]:
    out = []
    for n in range(max(min_order, 1), max_order + 1):
        if n % 2:
            out.extend(abelian_groups_of_order(n))
    return out


# subgroups ----------------------------------------------------------------


@lru_cache(maxsize=None)
def subgroups(G: FiniteAbelianGroup) -> tuple[Subgroup, ...]:
    """All subgroups, built as products of subgroups of the Sylow factors."""
    by_prime: dict[int, list[int]] = {}
    for i, n in enumerate(G.factors):
        if n > 1:
            by_prime.setdefault(prime_factors(n)[0], []).append(i)
    pieces = []
    for p, idx in sorted(by_prime.items()):
        pieces.append(_sylow_subgroups(G, tuple(idx)))
    out = []
    for combo in itertools.product(*pieces):
        elems = {G.identity}
        gens = []
        for part_gens, part_elems in combo:
            gens.extend(part_gens)
            elems = {G.add(a, b) for a in elems for b in part_elems}
        out.append(Subgroup(G, tuple(gens), tuple(sorted(elems))))
    return tuple(sorted(out, key=lambda H: (H.order, H.elements)))


def _sylow_subgroups(G: FiniteAbelianGroup, idx: tuple[int, ...]):
    """Subgroups supported on the coordinates ``idx``: list of (generators, elements)."""
    table = G.add_table
    elems = G.elements
    zero = G.index(G.identity)
    support = [
        G.index(x) for x in elems if all(x[i] == 0 for i in range(len(G.factors)) if i not in idx)
    ]
    cyclic = {}
    for x in support:
        cyc, y = [zero], x
        while y != zero:
            cyc.append(y)
            y = table[y][x]
        cyclic[x] = cyc
    seen = {frozenset([zero]): ()}
    frontier = [frozenset([zero])]
    while frontier:
        nxt = []
        for H in frontier:
            for x in support:
                if x in H:
                    continue
                K = frozenset(table[a][c] for a in H for c in cyclic[x])
                if K not in seen:
                    seen[K] = seen[H] + (elems[x],)
                    nxt.append(K)
        frontier = nxt
    return [(gens, tuple(elems[i] for i in sorted(K))) for K, gens in seen.items()]


def _coset_order(G: FiniteAbelianGroup, x: Element, I: Subgroup) -> int:
    k, y = 1, x
    while y not in I:
        y = G.add(y, x)
        k += 1
    return k


# automorphisms ------------------------------------------------------------


def _primitive_root(q: int, p: int) -> int:
    """A generator of (Z/q)^* for q a power of the odd prime p."""
    phi = q // p * (p - 1)
    ps = prime_factors(phi)
    for g in range(2, q):
        if g % p and all(pow(g, phi // r, q) != 1 for r in ps):
            return g
    return 1


@lru_cache(maxsize=None)
def automorphism_generators(G: FiniteAbelianGroup) -> tuple[tuple[Element, ...], ...]:
    """Generators of Aut(G) for G in primary form, each given by the images of the unit vectors.

    Per Sylow factor: scaling one coordinate by a primitive root, swapping two
    coordinates of equal order, and transvections e_i -> e_i + p^max(0, a_j - a_i) e_j.
    """
    k = len(G.factors)
    units = G.unit_vectors()
    gens = []

    def with_images(changes: dict[int, Element]) -> tuple[Element, ...]:
        return tuple(changes.get(i, units[i]) for i in range(k))

    for i, n in enumerate(G.factors):
        if n <= 2:
            continue
        p = prime_factors(n)[0]
        u = _primitive_root(n, p)
        if u != 1:
            gens.append(with_images({i: G.scale(u, units[i])}))
    for i, j in itertools.permutations(range(k), 2):
        ni, nj = G.factors[i], G.factors[j]
        if ni == 1 or nj == 1:
            continue
        pi, pj = prime_factors(ni)[0], prime_factors(nj)[0]
        if pi != pj:
            continue
        if i < j and ni == nj:
            gens.append(with_images({i: units[j], j: units[i]}))
        c = max(1, nj // ni)
        gens.append(with_images({i: G.add(units[i], G.scale(c, units[j]))}))
    return tuple(gens)


def apply_automorphism(G: FiniteAbelianGroup, images: tuple[Element, ...], x: Element) -> Element:
    out = G.identity
    for a, img in zip(x, images):
        if a:
            out = G.add(out, G.scale(a, img))
    return out


def is_automorphism(G: FiniteAbelianGroup, images: tuple[Element, ...]) -> bool:
    """Brute-force check: well defined on every cyclic factor and bijective."""
    for n, img in zip(G.factors, images):
        if G.scale(n, img) != G.identity:
            return False
    return len({apply_automorphism(G, images, x) for x in G.elements}) == G.order


def brute_force_automorphisms(G: FiniteAbelianGroup) -> list[tuple[Element, ...]]:
    """All automorphisms, by trying every image tuple (tiny groups only)."""
    out = []
    for images in itertools.product(G.elements, repeat=len(G.factors)):
        if is_automorphism(G, images):
            out.append(images)
    return out


def generated_automorphism_group(G: FiniteAbelianGroup, gens) -> set[tuple[Element, ...]]:
    """Closure of ``gens`` under composition (tiny groups only)."""
    units = tuple(G.unit_vectors())
    group = {units}
    frontier = [units]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                comp = tuple(apply_automorphism(G, g, img) for img in a)
                if comp not in group:
                    group.add(comp)
                    nxt.append(comp)
        frontier = nxt
    return group


# configurations -----------------------------------------------------------


ConfigKey = tuple  # (I elements, D elements, minimal lift)


@dataclass(frozen=True)
class RawConfig:
    I: Subgroup
    D: Subgroup
    phi: Element  # the smallest element of its coset phi + I

    def key(self) -> ConfigKey:
        return (self.I.elements, self.D.elements, self.phi)


def _coset_reps(G: FiniteAbelianGroup, I: Subgroup, D: Subgroup) -> dict[int, int]:
    """Element index -> index of the smallest element of its coset mod I, for x in D."""
    table = G.add_table
    I_idx = [G.index(y) for y in I.elements]
    reps: dict[int, int] = {}
    for x in D.elements:
        i = G.index(x)
        if i not in reps:
            coset = [table[i][j] for j in I_idx]
            r = min(coset)
            for c in coset:
                reps[c] = r
    return reps


def raw_configs(G: FiniteAbelianGroup) -> list[RawConfig]:
    """Every (I <= D, generator coset of the cyclic group D/I), coset given by its smallest element."""
    subs = subgroups(G)
    elems = G.elements
    out = []
    for D in subs:
        for I in subs:
            if D.order % I.order or not I.issubgroup(D):
                continue
            m = D.order // I.order
            reps = _coset_reps(G, I, D)
            gens = sorted(r for r in set(reps.values()) if _coset_order(G, elems[r], I) == m)
            for r in gens:
                out.append(RawConfig(I, D, elems[r]))
    return out


def _permutation(G: FiniteAbelianGroup, images) -> list[int]:
    return [G.index(apply_automorphism(G, images, x)) for x in G.elements]


def config_orbits(G: FiniteAbelianGroup) -> list[list[RawConfig]]:
    """Raw configs grouped into Aut(G)-orbits; each orbit sorted, orbits sorted by their first key."""
    raws = raw_configs(G)
    subs = subgroups(G)
    sub_index = {H.elements: k for k, H in enumerate(subs)}
    elems = G.elements
    table = G.add_table
    index = {r.key(): r for r in raws}
    parent = {r.key(): r.key() for r in raws}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for images in automorphism_generators(G):
        perm = _permutation(G, images)
        sub_image = []
        for H in subs:
            img = tuple(sorted(elems[perm[G.index(x)]] for x in H.elements))
            sub_image.append(subs[sub_index[img]])
        for r in raws:
            I2 = sub_image[sub_index[r.I.elements]]
            D2 = sub_image[sub_index[r.D.elements]]
            phi = perm[G.index(r.phi)]
            rep = elems[min(table[phi][G.index(y)] for y in I2.elements)]
            img = index.get((I2.elements, D2.elements, rep))
            if img is None:  # pragma: no cover - automorphisms preserve the data
                raise AssertionError("automorphism image is not a valid configuration")
            a, b = find(r.key()), find(img.key())
            if a != b:
                if b < a:
                    a, b = b, a
                parent[b] = a
    orbits: dict = {}
    for r in raws:
        orbits.setdefault(find(r.key()), []).append(r)
    out = [sorted(v, key=RawConfig.key) for v in orbits.values()]
    return sorted(out, key=lambda orb: orb[0].key())


def to_inertia_config(G: FiniteAbelianGroup, raw: RawConfig) -> InertiaConfig:
    I = subgroup_generated(G, cyclic_decomposition(raw.I).generators)
    dec = cyclic_decomposition(I)
    D = subgroup_generated(G, [raw.phi] + list(dec.generators))
    return InertiaConfig(G, I, D, raw.phi, dec)


def sweep_configs(max_order: int, min_order: int = 3, groups=None) -> list[InertiaConfig]:
    """One representative (the smallest key) per Aut(G)-orbit, for every odd-order group."""
    if max_order > ORDER_CAP:
        raise ValueError(f"max order {max_order} exceeds the safety cap {ORDER_CAP}")
    groups = groups if groups is not None else odd_abelian_groups(max_order, min_order)
    out = []
    for G in groups:
        for orb in config_orbits(G):
            out.append(to_inertia_config(G, orb[0]))
    return out
