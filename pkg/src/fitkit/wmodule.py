"""The local module W inside Z[D] + Z[D/I] and the map f(x, y) = x + nu_I * y.

W is the set of pairs (x, y) with x in the augmentation ideal of Z[D] and
x mod I equal to (1 - phi^-1) y in Z[D/I].  ``verify_local_cokernel`` checks
that f is injective with cokernel Z[D/I]/(g), g = 1 - phi^-1 + #I.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .fitting import GroupRingMatrix, fitt_i
from .group_ring import GroupRingElement
from .groups import (
    Element,
    FiniteAbelianGroup,
    GroupInputError,
    InertiaConfig,
    Subgroup,
    cyclic_decomposition,
    quotient_group,
    subgroup_generated,
)
from .lattice import Lattice, integer_kernel, quotient_structure
from .report import CheckRecord, check

SUITE = "lemma-Av"


def as_own_group(D: Subgroup) -> tuple[FiniteAbelianGroup, Callable[[Element], Element]]:
    """An abstract copy of ``D`` and the isomorphism from ``D`` (inside its parent) onto it."""
    G = D.parent
    dec = cyclic_decomposition(D)
    parts = [(g, n) for g, n in dec.parts if n > 1]
    H = FiniteAbelianGroup(tuple(n for _, n in parts))
    table: dict[Element, Element] = {}
    for exps in itertools.product(*(range(n) for _, n in parts)):
        x = G.identity
        for e, (g, _) in zip(exps, parts):
            x = G.add(x, G.scale(e, g))
        table[x] = tuple(exps)
    if len(table) != D.order:  # pragma: no cover - guaranteed by the decomposition
        raise AssertionError("cyclic decomposition does not parametrize D")
    return H, table.__getitem__


@dataclass(frozen=True)
class WModule:
    D: FiniteAbelianGroup
    I: Subgroup
    phi: Element
    quotient: FiniteAbelianGroup
    project: Callable[[Element], Element]
    lattice: Lattice
    lift_table: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def x_dim(self) -> int:
        return self.D.order

    @property
    def y_dim(self) -> int:
        return self.quotient.order

    @property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return self.lattice.basis()

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def split(self, v) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(v[: self.x_dim]), tuple(v[self.x_dim :])

    def translate(self, v, d: Element) -> tuple[int, ...]:
        """The action of d in D on a pair (x, y)."""
        D, Q = self.D, self.quotient
        x, y = self.split(v)
        nx = [0] * D.order
        for i, c in enumerate(x):
            if c:
                nx[D.index(D.add(D.elements[i], d))] += c
        ny = [0] * Q.order
        qd = self.project(d)
        for i, c in enumerate(y):
            if c:
                ny[Q.index(Q.add(Q.elements[i], qd))] += c
        return tuple(nx + ny)

    def satisfies_conditions(self, v) -> bool:
        x, y = self.split(v)
        return sum(x) == 0 and _reduce(self, x) == _times_one_minus_phi_inv(self, y)

    def is_D_stable(self) -> bool:
        gens = self.D.unit_vectors()
        return all(self.translate(b, d) in self.lattice for b in self.basis for d in gens)

    def lift(self, q: Element) -> Element:
        """The smallest element of D mapping to q."""
        return self.lift_table[q]


def _reduce(W: WModule, x) -> tuple[int, ...]:
    out = [0] * W.y_dim
    Q = W.quotient
    for d, c in zip(W.D.elements, x):
        if c:
            out[Q.index(W.project(d))] += c
    return tuple(out)


def _times_one_minus_phi_inv(W: WModule, y) -> tuple[int, ...]:
    Q = W.quotient
    shift = Q.neg(W.project(W.phi))
    out = list(y)
    for q, c in zip(Q.elements, y):
        if c:
            out[Q.index(Q.add(q, shift))] -= c
    return tuple(out)


def build_W(D: FiniteAbelianGroup, I: Subgroup, phi: Element) -> WModule:
    """Kernel lattice of (x, y) -> x mod I - (1 - phi^-1) y on Z[D] + Z[D/I]."""
    if I.parent != D:
        raise GroupInputError("I must be a subgroup of D")
    phi = D.check(phi)
    if subgroup_generated(D, list(I.generators) + [phi]).order != D.order:
        raise GroupInputError("D/I is not cyclic with generator the class of phi")
    Q, project = quotient_group(D, I)
    shift = Q.neg(project(phi))
    rows = []
    for d in D.elements:
        r = [0] * Q.order
        r[Q.index(project(d))] = 1
        rows.append(r)
    for q in Q.elements:
        r = [0] * Q.order
        r[Q.index(q)] -= 1
        r[Q.index(Q.add(q, shift))] += 1
        rows.append(r)
    lat = Lattice(D.order + Q.order, integer_kernel(rows, Q.order))
    lifts: dict[Element, Element] = {}
    for d in D.elements:
        lifts.setdefault(project(d), d)
    return WModule(D, I, phi, Q, project, lat, lifts)


def local_data(cfg: InertiaConfig) -> tuple[FiniteAbelianGroup, Subgroup, Element]:
    """(D, I, phi) with D taken as a group in its own right."""
    H, iso = as_own_group(cfg.D)
    I = subgroup_generated(H, [iso(x) for x in cfg.I.generators])
    return H, I, iso(cfg.phi_lift)


def build_W_for(cfg: InertiaConfig) -> WModule:
    return build_W(*local_data(cfg))


def f_image(W: WModule, v) -> tuple[int, ...]:
    """f(x, y) = x + nu_I * y~ for the smallest lift y~ of y."""
    D = W.D
    x, y = W.split(v)
    out = list(x)
    for q, c in zip(W.quotient.elements, y):
        if c:
            base = W.lift(q)
            for i in W.I.elements:
                out[D.index(D.add(base, i))] += c
    return tuple(out)


def f_map(W: WModule) -> list[tuple[int, ...]]:
    """Integer matrix of f on the HNF basis of W (one row per basis element)."""
    return [f_image(W, b) for b in W.basis]


def _elem(D: FiniteAbelianGroup, terms: dict) -> GroupRingElement:
    return GroupRingElement.from_dict(D, terms)


def generator_pair(W: WModule) -> tuple[int, ...]:
    """The pair (1 - phi~^-1, 1) in Z[D] + Z[D/I]."""
    D, Q = W.D, W.quotient
    x = [0] * D.order
    x[D.index(D.identity)] += 1
    x[D.index(D.neg(W.phi))] -= 1
    y = [0] * Q.order
    y[Q.index(Q.identity)] = 1
    return tuple(x + y)


def g_elements(W: WModule) -> tuple[GroupRingElement, GroupRingElement]:
    """g = 1 - phi^-1 + #I in Z[D/I] and its lift g~ in Z[D]."""
    D, Q, n = W.D, W.quotient, W.I.order
    g = _elem(Q, {Q.identity: 1 + n}) - GroupRingElement.of(Q, Q.neg(W.project(W.phi)))
    g_tilde = _elem(D, {D.identity: 1 + n}) - GroupRingElement.of(D, D.neg(W.phi))
    return g, g_tilde


def _records(W: WModule, label: str, witness: dict) -> list[CheckRecord]:
    D, I, Q = W.D, W.I, W.quotient
    recs = []

    def add(name, statement, ok, extra=None, note=""):
        recs.append(check(SUITE, name, statement, ok, label, {**witness, **(extra or {})}, note))

    add(
        "defining-conditions",
        "every basis pair (x, y) has aug(x) = 0, x mod I = (1 - phi^-1) y, and W is D-stable",
        all(W.satisfies_conditions(b) for b in W.basis) and W.is_D_stable(),
    )
    images = f_map(W)
    image = Lattice(D.order, images)
    add(
        "f-injective",
        "f has full row rank on the Z-basis of W",
        image.rank == W.rank == D.order,
        {"rank_W": W.rank, "rank_f": image.rank, "order_D": D.order},
    )

    g, g_tilde = g_elements(W)
    ref = Lattice(Q.order, g.ring.multiples(g.coeffs))
    coker_inv, coker_free = quotient_structure(Lattice(D.order, _identity(D.order)), image)
    ref_inv, ref_free = quotient_structure(Lattice(Q.order, _identity(Q.order)), ref)
    add(
        "cokernel-invariants",
        "Z[D]/f(W) and Z[D/I]/(g) have the same abelian invariants",
        coker_free == ref_free == 0 and coker_inv == ref_inv,
        {"coker": coker_inv, "reference": ref_inv},
    )
    coker_order = _product(coker_inv)
    ref_order = abs(_det_of(ref))
    add(
        "cokernel-order",
        "|Z[D]/f(W)| = |Z[D/I]/(g)|",
        coker_free == 0 and coker_order == ref_order,
        {"coker_order": coker_order, "reference_order": ref_order},
    )

    nonzero = [r for r in images if any(r)]
    coker_fitt = fitt_i(GroupRingMatrix.from_elements(D, [[r] for r in nonzero], ncols=1), 0)
    rels = [g_tilde.coeffs] + [
        (_elem(D, {s: 1}) - GroupRingElement.scalar(D, 1)).coeffs for s in I.generators
    ]
    ref_fitt = fitt_i(GroupRingMatrix.from_elements(D, [[r] for r in rels], ncols=1), 0)
    add(
        "fitting-zero",
        "Fitt_0 over Z[D] of Coker f equals Fitt_0 of Z[D/I]/(g)",
        coker_fitt == ref_fitt,
        {} if coker_fitt == ref_fitt else {"coker": [list(b) for b in coker_fitt.basis], "reference": [list(b) for b in ref_fitt.basis]},
    )
    add(
        "image-is-ideal",
        "f(W) = (g~) + I_I as lattices, so Coker f is the cyclic module Z[D/I]/(g)",
        image == ref_fitt.lattice,
    )

    pair = generator_pair(W)
    in_W = pair in W.lattice
    fx = f_image(W, pair) if in_W else None
    reduced = _reduce(W, fx) if fx is not None else None
    add(
        "basis-correspondence",
        "(1 - phi~^-1, 1) lies in W and f sends it to g modulo I",
        in_W and reduced == tuple(g.coeffs),
        {"image": list(fx) if fx else None},
    )
    # W = (J, 0) + Z[D](1 - phi~^-1, 1): the class of the pair is a free basis of W/(J, 0)
    span = Lattice(D.order + Q.order)
    for s in I.generators:
        tau = (_elem(D, {s: 1}) - GroupRingElement.scalar(D, 1)).coeffs
        for d in D.elements:
            span.add(tuple(W.translate(tuple(tau) + (0,) * Q.order, d)))
    for d in D.elements:
        span.add(W.translate(pair, d))
    add(
        "free-quotient",
        "W is spanned by (I_I, 0) and the D-translates of (1 - phi~^-1, 1)",
        span == W.lattice,
    )
    return recs


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _product(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def _det_of(lat: Lattice) -> int:
    return lat.determinant() if lat.is_full_rank() else 0


def verify_local_cokernel(D: FiniteAbelianGroup, I: Subgroup, phi: Element, label: str = "") -> list[CheckRecord]:
    W = build_W(D, I, phi)
    witness = {"D": list(D.factors), "I": [list(x) for x in I.generators], "phi": list(phi)}
    return _records(W, label or f"D[{'.'.join(map(str, D.factors))}]", witness)


def verify_W_cokernel(cfg: InertiaConfig) -> list[CheckRecord]:
    D, I, phi = local_data(cfg)
    return verify_local_cokernel(D, I, phi, cfg.label())
