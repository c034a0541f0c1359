"""Fitting ideals of matrices and finitely presented modules over Z[G].

Conventions: row vectors, so an m x n matrix presents the module
``Z[G]^n / (row span)``; ``Fitt_i`` is generated by the (n-i)-minors, equals
(1) for ``i >= n`` and is the zero ideal when there are fewer than n-i rows.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .group_ring import GroupRingElement, augmentation_generators, part_norms
from .groups import FiniteAbelianGroup, InertiaConfig
from .ideals import FractionalIdeal
from .lattice import Lattice, integer_kernel
from .rings import CycloGroupRing, Vec, group_ring

DEFAULT_SEED = 20200917


class MatrixInputError(ValueError):
    """Raised for ragged matrices, duplicate labels or non-square determinants."""


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    """The RNG seed for randomized checks: ``FITKIT_SEED`` if set, else ``default``."""
    raw = os.environ.get("FITKIT_SEED")
    return int(raw) if raw not in (None, "") else default


@dataclass(frozen=True)
class GroupRingMatrix:
    """An m x n matrix over Z[G] with labelled rows and columns."""

    group: FiniteAbelianGroup
    entries: tuple[tuple[Vec, ...], ...]
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()
    ncols: int = -1
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        ents = tuple(tuple(tuple(int(c) for c in _coeffs(e)) for e in row) for row in self.entries)
        object.__setattr__(self, "entries", ents)
        n = self.ncols if self.ncols >= 0 else (len(ents[0]) if ents else 0)
        object.__setattr__(self, "ncols", n)
        if any(len(r) != n for r in ents):
            raise MatrixInputError("matrix rows have different lengths")
        if any(len(e) != self.group.order for r in ents for e in r):
            raise MatrixInputError("entry has the wrong number of coefficients")
        rl = self.row_labels or tuple(f"r{i}" for i in range(len(ents)))
        cl = self.col_labels or tuple(f"c{j}" for j in range(n))
        if len(rl) != len(ents) or len(cl) != n:
            raise MatrixInputError("label count does not match matrix shape")
        if len(set(rl)) != len(rl) or len(set(cl)) != len(cl):
            raise MatrixInputError("row and column labels must be unique")
        object.__setattr__(self, "row_labels", tuple(rl))
        object.__setattr__(self, "col_labels", tuple(cl))

    @classmethod
    def from_elements(cls, group, rows, row_labels=(), col_labels=(), ncols: int = -1):
        return cls(group, tuple(tuple(rows_i) for rows_i in rows), tuple(row_labels), tuple(col_labels), ncols)

    @property
    def ring(self) -> CycloGroupRing:
        return group_ring(self.group)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def entry(self, i: int, j: int) -> GroupRingElement:
        return GroupRingElement(self.ring, self.entries[i][j])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "GroupRingMatrix":
        return GroupRingMatrix(
            self.group,
            tuple(tuple(self.entries[i][j] for j in cols) for i in rows),
            tuple(self.row_labels[i] for i in rows),
            tuple(self.col_labels[j] for j in cols),
            len(cols),
        )

    def without_rows(self, labels: Iterable[str]) -> "GroupRingMatrix":
        drop = set(labels)
        keep = [i for i, lab in enumerate(self.row_labels) if lab not in drop]
        return self.submatrix(keep, range(self.ncols))

    def stacked(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        if other.ncols != self.ncols:
            raise MatrixInputError("cannot stack matrices with different column counts")
        labels = self.row_labels + tuple(f"{lab}'" if lab in self.row_labels else lab for lab in other.row_labels)
        return GroupRingMatrix(self.group, self.entries + other.entries, labels, self.col_labels, self.ncols)

    # minors --------------------------------------------------------------

    def _det(self, rows: tuple[int, ...], cols: tuple[int, ...]) -> Vec:
        """Cofactor expansion along the first listed row; memoized on (rows, cols)."""
        key = (rows, cols)
        cache = self._cache
        if key in cache:
            return cache[key]
        ring = self.ring
        if not rows:
            out = ring.one
        else:
            r0, rest = rows[0], rows[1:]
            acc = [0] * ring.dim
            for pos, c in enumerate(cols):
                a = self.entries[r0][c]
                if not any(a):
                    continue
                sub = self._det(rest, cols[:pos] + cols[pos + 1 :])
                if not any(sub):
                    continue
                term = ring.mul(a, sub)
                if pos % 2:
                    acc = [x - y for x, y in zip(acc, term)]
                else:
                    acc = [x + y for x, y in zip(acc, term)]
            out = tuple(acc)
        cache[key] = out
        return out

    def minors(self, k: int) -> Iterator[Vec]:
        """All k x k minors (column subsets outermost so cofactors are shared)."""
        if k == 0:
            yield self.ring.one
            return
        if k > self.nrows or k > self.ncols:
            return
        for cols in itertools.combinations(range(self.ncols), k):
            for rows in itertools.combinations(range(self.nrows), k):
                yield self._det(rows, cols)

    def __str__(self) -> str:
        ring = self.ring
        width = max((len(lab) for lab in self.row_labels), default=0)
        lines = ["  ".join([" " * width] + list(self.col_labels))]
        for lab, row in zip(self.row_labels, self.entries):
            cells = [repr(GroupRingElement(ring, e)) for e in row]
            lines.append(lab.ljust(width) + "  " + " | ".join(cells))
        return "\n".join(lines)


def _coeffs(e) -> Sequence[int]:
    if isinstance(e, GroupRingElement):
        return e.coeffs
    return e


def determinant(M: GroupRingMatrix) -> GroupRingElement:
    if M.nrows != M.ncols:
        raise MatrixInputError(f"determinant of a non-square {M.nrows}x{M.ncols} matrix")
    n = M.nrows
    return GroupRingElement(M.ring, M._det(tuple(range(n)), tuple(range(n))))


def fitt_i(M: GroupRingMatrix, i: int) -> FractionalIdeal:
    """Ideal generated by the (n-i)-minors of M; (1) when ``i >= n``."""
    if i < 0:
        raise MatrixInputError("Fitting index must be non-negative")
    ring = M.ring
    k = M.ncols - i
    if k <= 0:
        return FractionalIdeal.unit(ring)
    return FractionalIdeal.from_generators(ring, M.minors(k))


@dataclass(frozen=True)
class PresentedModule:
    """The module ``Z[G]^n / (rows of presentation)``."""

    presentation: GroupRingMatrix

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.presentation.group

    @property
    def n_generators(self) -> int:
        return self.presentation.ncols

    def fitt(self, i: int) -> FractionalIdeal:
        return fitt_i(self.presentation, i)

    def fitting_chain(self) -> list[FractionalIdeal]:
        return [self.fitt(i) for i in range(self.n_generators + 1)]

    def quotient_presentation(self, ideal_gens: Iterable) -> GroupRingMatrix:
        """A presentation of ``X / aX`` for ``a = (ideal_gens)``: append ``x * e_j`` rows."""
        M = self.presentation
        ring = M.ring
        n = M.ncols
        extra = []
        labels = []
        for t, x in enumerate(ideal_gens):
            xv = tuple(_coeffs(x))
            for j in range(n):
                extra.append(tuple(xv if jj == j else ring.zero for jj in range(n)))
                labels.append(f"a{t}e{j}")
        more = GroupRingMatrix(M.group, tuple(extra), tuple(labels), M.col_labels, n)
        return M.stacked(more)


def hfitt_quotient(X: PresentedModule, ideal) -> FractionalIdeal:
    """``sum_{i=0}^{n} a^i Fitt_i(X)``, which is ``Fitt_0(X / aX)`` for an integral ideal a.

    ``ideal`` is a :class:`FractionalIdeal` with trivial denominator or a single
    group-ring element generating a principal ideal.
    """
    ring = group_ring(X.group)
    if not isinstance(ideal, FractionalIdeal):
        ideal = FractionalIdeal.from_generators(ring, [_coeffs(ideal)])
    if not ideal.is_integral():
        raise MatrixInputError("hfitt_quotient needs an integral ideal")
    total = FractionalIdeal.zero(ring)
    power = FractionalIdeal.unit(ring)
    for i in range(X.n_generators + 1):
        total = total + power * X.fitt(i)
        power = power * ideal
    return total


# the presentation of I_I from the tensor-product resolution --------------


def _pair_order(s: int) -> list[tuple[int, int]]:
    """Pairs l < l' in the order x_{s-1}x_s, ..., x_1x_3, x_1x_2 (reverse lexicographic)."""
    return sorted(itertools.combinations(range(s), 2), reverse=True)


def build_N(group: FiniteAbelianGroup, taus: Sequence) -> GroupRingMatrix:
    """Rows x_l x_l' (l < l') with -tau_l' in column x_l and tau_l in column x_l'."""
    ring = group_ring(group)
    tv = [tuple(_coeffs(t)) for t in taus]
    s = len(tv)
    rows, labels = [], []
    for l, lp in _pair_order(s):
        row = [ring.zero] * s
        row[l] = ring.neg(tv[lp])
        row[lp] = tv[l]
        rows.append(tuple(row))
        labels.append(f"x{l + 1}x{lp + 1}")
    return GroupRingMatrix(group, tuple(rows), tuple(labels), tuple(f"x{l + 1}" for l in range(s)), s)


def build_M_from(group: FiniteAbelianGroup, nus: Sequence, taus: Sequence) -> GroupRingMatrix:
    ring = group_ring(group)
    s = len(taus)
    if len(nus) != s:
        raise MatrixInputError("need one norm element per tau")
    rows, labels = [], []
    for l, nu in enumerate(nus):
        row = [ring.zero] * s
        row[l] = tuple(_coeffs(nu))
        rows.append(tuple(row))
        labels.append(f"x{l + 1}^2")
    top = GroupRingMatrix(group, tuple(rows), tuple(labels), tuple(f"x{l + 1}" for l in range(s)), s)
    return top.stacked(build_N(group, taus))


def build_M(cfg: InertiaConfig) -> GroupRingMatrix:
    """Presentation of the relative augmentation ideal I_I over Z[G] on generators tau_l."""
    taus, _ = augmentation_generators(cfg)
    return build_M_from(cfg.G, part_norms(cfg), taus)


# independent oracle -------------------------------------------------------


def _module_closure(ring: CycloGroupRing, s: int, vecs: Iterable[Vec]):
    """Greedy choice of Z[G]-module generators among ``vecs`` inside Z[G]^s."""
    n = ring.order
    perms = ring._translation_perms
    lat = Lattice(s * n)
    kept = []
    for v in vecs:
        if lat.contains(v):
            continue
        kept.append(v)
        for perm in perms:
            out = [0] * (s * n)
            for idx, a in enumerate(v):
                if a:
                    blk, hi = divmod(idx, n)
                    out[blk * n + perm[hi]] = a
            lat.add(out)
    return kept


def syzygy_presentation(group: FiniteAbelianGroup, gens: Sequence, prune: bool = True) -> GroupRingMatrix:
    """Presentation of the ideal generated by ``gens``, read off from the full relation module.

    The relation module is the integer kernel of ``Z[G]^s -> Z[G]``; its Z-basis
    is closed under G, so it presents the image.  With ``prune`` the basis is
    thinned to a set of module generators, which keeps minor counts small.
    """
    ring = group_ring(group)
    gv = [tuple(_coeffs(g)) for g in gens]
    s = len(gv)
    n = ring.order
    rows = []
    for g in gv:
        rows.extend(ring.multiples(g))
    # rows[l*n + k] is g_l * (k-th group element); the kernel lives in Z^(s*n)
    kernel = integer_kernel(rows, n) if rows else []
    # a kernel vector c gives the relation sum_l (sum_k c[l*n+k] e_k) * e_l
    if prune:
        kernel = _module_closure(ring, s, kernel)
    entries = tuple(tuple(tuple(c[l * n : (l + 1) * n]) for l in range(s)) for c in kernel)
    return GroupRingMatrix(
        group, entries, tuple(f"k{i}" for i in range(len(entries))), tuple(f"e{l + 1}" for l in range(s)), s
    )


# random presentations -----------------------------------------------------


def random_entry_pool(group: FiniteAbelianGroup) -> list[Vec]:
    """Entries {0, +-1, +-sigma, tau_l, nu_l} for the unit-vector generators sigma of G."""
    ring = group_ring(group)
    one = ring.one
    pool = [ring.zero, one, ring.neg(one)]
    for e in group.unit_vectors():
        if group.element_order(e) == 1:
            continue
        sig = ring.basis_vector(0, e)
        nu = [0] * ring.dim
        x = group.identity
        while True:
            nu[group.index(x)] += 1
            x = group.add(x, e)
            if x == group.identity:
                break
        pool += [sig, ring.neg(sig), ring.sub(sig, one), tuple(nu)]
    return pool


def random_matrix(group: FiniteAbelianGroup, m: int, n: int, rng: random.Random) -> GroupRingMatrix:
    pool = random_entry_pool(group)
    rows = tuple(tuple(rng.choice(pool) for _ in range(n)) for _ in range(m))
    return GroupRingMatrix(group, rows, ncols=n)


def elementary_variants(M: GroupRingMatrix, rng: random.Random) -> list[GroupRingMatrix]:
    """Presentations of the same module obtained by elementary changes of M."""
    ring = M.ring
    group = M.group
    pool = random_entry_pool(group)
    out = []
    m, n = M.shape
    rows = [list(r) for r in M.entries]
    if m >= 2:
        # add a multiple of one row to another
        i, j = rng.sample(range(m), 2)
        c = rng.choice(pool)
        new = [r[:] for r in rows]
        new[i] = [ring.add(a, ring.mul(c, b)) for a, b in zip(new[i], new[j])]
        out.append(GroupRingMatrix(group, tuple(map(tuple, new)), ncols=n))
    if n >= 2:
        # add a multiple of one column to another (a change of generators)
        i, j = rng.sample(range(n), 2)
        c = rng.choice(pool)
        new = [r[:] for r in rows]
        for r in new:
            r[i] = ring.add(r[i], ring.mul(c, r[j]))
        out.append(GroupRingMatrix(group, tuple(map(tuple, new)), ncols=n))
    # scale a column by a unit group element
    if n >= 1:
        g = rng.choice(group.elements)
        j = rng.randrange(n)
        unit = ring.basis_vector(0, g)
        new = [r[:] for r in rows]
        for r in new:
            r[j] = ring.mul(r[j], unit)
        out.append(GroupRingMatrix(group, tuple(map(tuple, new)), ncols=n))
    # append a redundant row (a combination of existing rows) and a zero row
    comb = [ring.zero] * n
    for r in rows:
        c = rng.choice(pool)
        comb = [ring.add(a, ring.mul(c, b)) for a, b in zip(comb, r)]
    out.append(GroupRingMatrix(group, tuple(map(tuple, rows + [comb, [ring.zero] * n])), ncols=n))
    # stabilise: one extra generator killed by an extra unit row
    stab = [r + [ring.zero] for r in rows] + [[ring.zero] * n + [ring.one]]
    out.append(GroupRingMatrix(group, tuple(map(tuple, stab)), ncols=n + 1))
    # row permutation
    perm = list(range(m))
    rng.shuffle(perm)
    out.append(GroupRingMatrix(group, tuple(tuple(rows[i]) for i in perm), ncols=n))
    return out
