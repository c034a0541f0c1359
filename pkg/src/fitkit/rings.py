"""Commutative rings Z[zeta_m][H] with an explicit Z-basis.

One class covers the three rings we need:

* ``Z[G]``              -- conductor 1, group G
* ``Z[zeta_m]``         -- conductor m, trivial group
* ``Z[zeta_m][G_p]``    -- the target of a chi-component

The Z-basis is ``zeta^k * h`` for ``0 <= k < phi(m)`` and ``h`` in the group,
indexed as ``k * |H| + index(h)``.  Elements are tuples of ints in that basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterator

from .groups import Element, FiniteAbelianGroup

Vec = tuple[int, ...]


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (coefficient lists, lowest degree first)."""
    num = num[:]
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("polynomial division is not exact")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


class CycloGroupRing:
    """The ring ``Z[zeta_m][H]`` for a finite abelian group ``H``."""

    def __init__(self, conductor: int, group: FiniteAbelianGroup):
        self.conductor = conductor
        self.group = group
        self.degree = euler_phi(conductor)
        self.order = group.order
        self.dim = self.degree * self.order

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CycloGroupRing)
            and self.conductor == other.conductor
            and self.group == other.group
        )

    def __hash__(self) -> int:
        return hash((self.conductor, self.group))

    def __repr__(self) -> str:
        if self.conductor == 1:
            return f"Z[{self.group}]"
        if self.order == 1:
            return f"Z[zeta_{self.conductor}]"
        return f"Z[zeta_{self.conductor}][{self.group}]"

    @cached_property
    def zeta_powers(self) -> tuple[tuple[int, ...], ...]:
        """``zeta_powers[e]`` is zeta^e reduced modulo Phi_m, for ``0 <= e < m``."""
        m, d = self.conductor, self.degree
        phi = cyclotomic_polynomial(m)
        out = []
        cur = [1] + [0] * (d - 1)
        for _ in range(m):
            out.append(tuple(cur))
            # multiply by x and reduce with the monic Phi_m
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * f for c, f in zip(cur, phi)]
        return tuple(out)

    @property
    def zero(self) -> Vec:
        return (0,) * self.dim

    @property
    def one(self) -> Vec:
        return self.basis_vector(0, self.group.identity)

    def basis_vector(self, zeta_exp: int, h: Element) -> Vec:
        """The element ``zeta^zeta_exp * h``."""
        v = [0] * self.dim
        n = self.order
        hi = self.group.index(h)
        for k, c in enumerate(self.zeta_powers[zeta_exp % self.conductor]):
            if c:
                v[k * n + hi] = c
        return tuple(v)

    def scalar(self, c: int) -> Vec:
        return tuple(c * x for x in self.one)

    def add(self, x: Vec, y: Vec) -> Vec:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x: Vec, y: Vec) -> Vec:
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x: Vec) -> Vec:
        return tuple(-a for a in x)

    def smul(self, c: int, x: Vec) -> Vec:
        return tuple(c * a for a in x)

    def mul(self, x: Vec, y: Vec) -> Vec:
        n = self.order
        table = self.group.add_table
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        if self.degree == 1:
            out = [0] * n
            for i, a in xs:
                row = table[i]
                for j, b in ys:
                    out[row[j]] += a * b
            return tuple(out)
        # collect coefficients of x^e * h before reducing powers of zeta
        d = self.degree
        raw: dict[tuple[int, int], int] = {}
        for i, a in xs:
            ki, hi = divmod(i, n)
            row = table[hi]
            for j, b in ys:
                kj, hj = divmod(j, n)
                key = (ki + kj, row[hj])
                raw[key] = raw.get(key, 0) + a * b
        out = [0] * self.dim
        zp = self.zeta_powers
        m = self.conductor
        for (e, h), c in raw.items():
            if not c:
                continue
            if e < d:
                out[e * n + h] += c
            else:
                for k, z in enumerate(zp[e % m]):
                    if z:
                        out[k * n + h] += c * z
        return tuple(out)

    def pow(self, x: Vec, k: int) -> Vec:
        out = self.one
        for _ in range(k):
            out = self.mul(out, x)
        return out

    @cached_property
    def _translation_perms(self) -> tuple[tuple[int, ...], ...]:
        table = self.group.add_table
        n = self.order
        return tuple(tuple(table[i][g] for i in range(n)) for g in range(n))

    def multiples(self, x: Vec) -> Iterator[Vec]:
        """``x * b`` for every basis element ``b``: these span the principal ideal (x) over Z."""
        n = self.order
        perms = self._translation_perms
        if self.degree == 1:
            for perm in perms:
                out = [0] * n
                for i, a in enumerate(x):
                    if a:
                        out[perm[i]] = a
                yield tuple(out)
            return
        cur = x
        for k in range(self.degree):
            if k:
                cur = self.mul(cur, self.basis_vector(1, self.group.identity))
            for perm in perms:
                out = [0] * self.dim
                for i, a in enumerate(cur):
                    if a:
                        kk, hi = divmod(i, n)
                        out[kk * n + perm[hi]] = a
                yield tuple(out)

    def multiplication_matrix(self, x: Vec) -> list[Vec]:
        return list(self.multiples(x))


@lru_cache(maxsize=None)
def group_ring(group: FiniteAbelianGroup) -> CycloGroupRing:
    return CycloGroupRing(1, group)


@lru_cache(maxsize=None)
def cyclo_group_ring(conductor: int, group: FiniteAbelianGroup) -> CycloGroupRing:
    return CycloGroupRing(conductor, group)


class RingInputError(ValueError):
    """Raised when ring elements from different rings are combined."""


@dataclass(frozen=True)
class RingElement:
    """An element of a :class:`CycloGroupRing`, with arithmetic operators."""

    ring: CycloGroupRing
    coeffs: Vec

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.ring.dim:
            raise RingInputError(
                f"coefficient vector of length {len(self.coeffs)} for {self.ring} (dim {self.ring.dim})"
            )

    def _coerce(self, other) -> Vec | None:
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingInputError(f"cannot combine elements of {self.ring} and {other.ring}")
            return other.coeffs
        if isinstance(other, int):
            return self.ring.scalar(other)
        return None

    def _new(self, coeffs: Vec):
        return type(self)(self.ring, coeffs)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.ring.add(self.coeffs, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.ring.sub(self.coeffs, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.ring.sub(o, self.coeffs))

    def __neg__(self):
        return self._new(self.ring.neg(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new(self.ring.smul(other, self.coeffs))
        o = self._coerce(other)
        return NotImplemented if o is None else self._new(self.ring.mul(self.coeffs, o))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return self._new(self.ring.pow(self.coeffs, k))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()
