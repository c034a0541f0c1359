"""Exact integer lattices: incremental Hermite normal form, Smith invariants, kernels.

Everything here works on plain Python integers, so there is no overflow and no
modular reduction; results are unconditional.  Vectors are sequences of ints and
lattices are row spans.
"""

from __future__ import annotations

from math import gcd, prod
from typing import Iterable, Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``x*a + y*b == g``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class Lattice:
    """A sublattice of Z^dim kept in row-echelon form and grown one vector at a time.

    Rows are stored by pivot column.  Every pivot is positive.  Full reduction of
    the entries above the pivots is deferred until :meth:`basis` is requested,
    which returns the canonical Hermite normal form.
    """

    __slots__ = ("dim", "_rows", "_canonical")

    def __init__(self, dim: int, rows: Iterable[Sequence[int]] = ()):
        self.dim = dim
        self._rows: dict[int, list[int]] = {}
        self._canonical: tuple[tuple[int, ...], ...] | None = ()
        for r in rows:
            self.add(r)

    def copy(self) -> "Lattice":
        other = Lattice(self.dim)
        other._rows = {j: r[:] for j, r in self._rows.items()}
        other._canonical = self._canonical
        return other

    @property
    def rank(self) -> int:
        return len(self._rows)

    def is_full_rank(self) -> bool:
        return len(self._rows) == self.dim

    def _install(self, j: int, row: list[int]) -> None:
        rows = self._rows
        for k in sorted(c for c in rows if c > j):
            q = row[k] // rows[k][k]
            if q:
                rk = rows[k]
                row[k:] = [a - q * b for a, b in zip(row[k:], rk[k:])]
        rows[j] = row
        self._canonical = None

    def add(self, vec: Sequence[int]) -> bool:
        """Add ``vec`` to the lattice; return True if the lattice grew."""
        if len(vec) != self.dim:
            raise ValueError(f"vector of length {len(vec)} in lattice of dim {self.dim}")
        v = list(vec)
        rows = self._rows
        n = self.dim
        changed = False
        j = 0
        while True:
            while j < n and not v[j]:
                j += 1
            if j == n:
                return changed
            r = rows.get(j)
            if r is None:
                if v[j] < 0:
                    v = [-a for a in v]
                self._install(j, v)
                return True
            a, b = r[j], v[j]
            q, rem = divmod(b, a)
            if rem == 0:
                # entries before the pivot are zero in both vectors
                v[j:] = [x - q * y for x, y in zip(v[j:], r[j:])]
            else:
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                head = [0] * j
                new = head + [x * s + y * t for s, t in zip(r[j:], v[j:])]
                v[j:] = [ag * t - bg * s for s, t in zip(r[j:], v[j:])]
                self._install(j, new)
                changed = True
            j += 1

    def add_all(self, vecs: Iterable[Sequence[int]]) -> bool:
        grew = False
        for v in vecs:
            grew = self.add(v) or grew
        return grew

    def contains(self, vec: Sequence[int]) -> bool:
        v = list(vec)
        rows = self._rows
        n = self.dim
        j = 0
        while True:
            while j < n and not v[j]:
                j += 1
            if j == n:
                return True
            r = rows.get(j)
            if r is None:
                return False
            q, rem = divmod(v[j], r[j])
            if rem:
                return False
            v[j:] = [x - q * y for x, y in zip(v[j:], r[j:])]
            j += 1

    __contains__ = contains

    def contains_lattice(self, other: "Lattice") -> bool:
        if other.rank > self.rank:
            return False
        # reduced rows keep the entries small during the membership tests
        self.basis()
        return all(self.contains(r) for r in other.basis())

    def basis(self) -> tuple[tuple[int, ...], ...]:
        """Canonical Hermite normal form: pivots positive, entries above a pivot in [0, pivot)."""
        if self._canonical is None:
            rows = self._rows
            pivots = sorted(rows)
            # rows bottom-up, each reduced left to right by the (already reduced) rows below
            for idx in range(len(pivots) - 2, -1, -1):
                r = rows[pivots[idx]]
                for c in pivots[idx + 1 :]:
                    rc = rows[c]
                    q = r[c] // rc[c]
                    if q:
                        r[c:] = [a - q * b for a, b in zip(r[c:], rc[c:])]
            self._canonical = tuple(tuple(rows[c]) for c in pivots)
        return self._canonical

    def generating_rows(self) -> list[list[int]]:
        """The current echelon rows (a Z-basis, not necessarily in canonical form)."""
        return list(self._rows.values())

    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def determinant(self) -> int:
        """Index of a full-rank lattice in Z^dim (product of the pivots)."""
        if not self.is_full_rank():
            raise ValueError("determinant of a lattice that is not full rank")
        return prod(r[j] for j, r in self._rows.items())

    def coordinates(self, vec: Sequence[int]) -> list[int] | None:
        """Coefficients of ``vec`` in terms of :meth:`basis`, or None if not a member."""
        basis = self.basis()
        piv = {c: i for i, c in enumerate(self.pivots())}
        v = list(vec)
        coords = [0] * len(basis)
        for j in range(self.dim):
            if not v[j]:
                continue
            i = piv.get(j)
            if i is None:
                return None
            q, rem = divmod(v[j], basis[i][j])
            if rem:
                return None
            coords[i] = q
            v = [x - q * y for x, y in zip(v, basis[i])]
        return coords

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.dim == other.dim and self.basis() == other.basis()

    def __hash__(self) -> int:
        return hash((self.dim, self.basis()))

    def __repr__(self) -> str:
        return f"Lattice(dim={self.dim}, rank={self.rank})"


def hnf(rows: Iterable[Sequence[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    return Lattice(dim, rows).basis()


def smith_invariants(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    diag, _ = smith_form(matrix, track_columns=False)
    return diag


def smith_form(
    matrix: Sequence[Sequence[int]], track_columns: bool = True
) -> tuple[list[int], list[list[int]] | None]:
    """Smith normal form by row and column operations.

    Returns the nonzero diagonal ``d_1 | d_2 | ...`` and, if requested, the
    unimodular column transform ``V`` (ncols x ncols) with ``U A V = diag``.
    """
    a = [list(r) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track_columns else None

    def col_op(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        for r in a:
            r[dst] -= q * r[src]
        if V is not None:
            for r in V:
                r[dst] -= q * r[src]

    def col_swap(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def col_neg(i: int) -> None:
        for r in a:
            r[i] = -r[i]
        if V is not None:
            for r in V:
                r[i] = -r[i]

    diag: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
                    if abs(a[i][j]) == 1:
                        break
            if best is not None and abs(a[best[0]][best[1]]) == 1:
                break
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        if j != t:
            col_swap(t, j)
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    col_op(j, t, q)
                    if a[t][j]:
                        clean = False
            if clean:
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                continue
            # move the smallest remaining entry of row/column t onto the diagonal
            cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cands)
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                col_swap(t, j)
        if a[t][t] < 0:
            col_neg(t)
        diag.append(a[t][t])
        t += 1
    return diag, V


def lattice_invariants(lat: Lattice) -> list[int]:
    """Invariant factors of the finite part of Z^dim / lat, excluding 1s.

    For a full-rank lattice this is the group structure of the quotient.
    Pivot-1 rows of the Hermite form split off as trivial summands.
    """
    basis = lat.basis()
    pivots = lat.pivots()
    keep_cols = [c for c in range(lat.dim)]
    unit = {c for c, b in zip(pivots, basis) if b[c] == 1}
    keep_cols = [c for c in keep_cols if c not in unit]
    rows = [[b[c] for c in keep_cols] for b, c in zip(basis, pivots) if c not in unit]
    if not rows:
        return []
    return [d for d in smith_invariants(rows) if d != 1]


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """A Z-basis of {x in Z^m : sum_i x_i rows[i] = 0}, where m = len(rows)."""
    m = len(rows)
    lat = Lattice(ncols + m)
    for i, r in enumerate(rows):
        aug = list(r) + [0] * m
        aug[ncols + i] = 1
        lat.add(aug)
    return [b[ncols:] for b, c in zip(lat.basis(), lat.pivots()) if c >= ncols]


def quotient_structure(big: Lattice, small: Lattice) -> tuple[list[int], int]:
    """Structure of big/small for small contained in big.

    Returns ``(invariants, free_rank)``: the nontrivial invariant factors of the
    torsion part and the rank difference.
    """
    coords = []
    for b in small.basis():
        c = big.coordinates(b)
        if c is None:
            raise ValueError("lattice is not contained in the ambient lattice")
        coords.append(c)
    free = big.rank - small.rank
    if not coords:
        return [], free
    diag = smith_invariants(coords)
    return [d for d in diag if d != 1], free


def quotient_order(big: Lattice, small: Lattice) -> int | None:
    """Order of big/small, or None when the quotient is infinite."""
    inv, free = quotient_structure(big, small)
    if free:
        return None
    return prod(inv)


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_coprime_to(n: int, p: int) -> bool:
    return gcd(n, p) == 1
