"""Finite abelian groups given by their invariant factors.

Elements are addressed two ways: as coordinate tuples ``(c_1, ..., c_r)`` with
``0 <= c_i < n_i``, and as a single mixed-radix index in ``[0, n)`` (last
coordinate fastest). The index form is what the sumset engine works with.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Iterator, Sequence

import numpy as np

Element = tuple[int, ...]

# Above this order the n x n difference table is not materialized.
TABLE_LIMIT = 1024


class GroupError(ValueError):
    """Invalid group description or element."""


@dataclass(frozen=True)
class Group:
    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors:
            raise GroupError("a group needs at least one invariant factor")
        for n in self.factors:
            if not isinstance(n, (int, np.integer)) or n < 2:
                raise GroupError(f"invariant factors must be integers >= 2, got {n!r}")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise GroupError(f"{a} does not divide {b}: not an invariant-factor chain")
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1]

    @property
    def is_cyclic(self) -> bool:
        return self.rank == 1

    def __str__(self) -> str:
        return ",".join(map(str, self.factors))

    def label(self) -> str:
        return " x ".join(f"Z{n}" for n in self.factors)

    # -- coordinates <-> indices -------------------------------------------

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for n in reversed(self.factors):
            out.append(s)
            s *= n
        return tuple(reversed(out))

    def element(self, coords: Sequence[int]) -> Element:
        """Validate ``coords`` and reduce each entry modulo its factor."""
        if len(coords) != self.rank:
            raise GroupError(f"element {tuple(coords)} has rank {len(coords)}, group has rank {self.rank}")
        return tuple(int(c) % n for c, n in zip(coords, self.factors))

    def index(self, coords: Sequence[int]) -> int:
        return sum(c * s for c, s in zip(self.element(coords), self.strides))

    def coords(self, index: int) -> Element:
        if not 0 <= index < self.order:
            raise GroupError(f"index {index} out of range for group of order {self.order}")
        return tuple((index // s) % n for s, n in zip(self.strides, self.factors))

    def elements(self) -> Iterator[Element]:
        for i in range(self.order):
            yield self.coords(i)

    # -- vectorized index arithmetic ---------------------------------------

    @cached_property
    def coord_array(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        cols = [(idx // s) % n for s, n in zip(self.strides, self.factors)]
        arr = np.stack(cols, axis=1)
        arr.flags.writeable = False
        return arr

    def _to_index(self, coords: np.ndarray) -> np.ndarray:
        return (coords % np.array(self.factors)) @ np.array(self.strides, dtype=np.int64)

    @cached_property
    def neg_index(self) -> np.ndarray:
        """``neg_index[x]`` is the index of ``-x``."""
        out = self._to_index(-self.coord_array)
        out.flags.writeable = False
        return out

    def scale_index(self, x, t: int):
        """Index of ``t * x`` (``x`` scalar or array of indices)."""
        c = self.coord_array[np.asarray(x)]
        return self._to_index(c * t)

    def add_index(self, x, y):
        c = self.coord_array[np.asarray(x)] + self.coord_array[np.asarray(y)]
        return self._to_index(c)

    @cached_property
    def _minus_table(self) -> np.ndarray:
        c = self.coord_array
        t = self._to_index(c[None, :, :] - c[:, None, :])
        t.flags.writeable = False
        return t

    def minus_rows(self, g) -> np.ndarray:
        """Rows ``[y - g for y in G]`` for each index in ``g``.

        Gathering a mask through these rows translates the set by ``g``:
        ``(S + g)[y] == S[y - g]``.
        """
        g = np.asarray(g)
        if self.order <= TABLE_LIMIT:
            return self._minus_table[g]
        c = self.coord_array
        return self._to_index(c - self.coord_array[g][..., None, :])

    @cached_property
    def self_inverse(self) -> tuple[int, ...]:
        """Indices ``x`` with ``2x = 0``, ascending."""
        neg = self.neg_index
        return tuple(int(x) for x in range(self.order) if neg[x] == x)

    @cached_property
    def inverse_pairs(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(x, -x)`` with ``x < -x``, ordered by ``x``."""
        neg = self.neg_index
        return tuple((x, int(neg[x])) for x in range(self.order) if x < neg[x])


def make_group(invariant_factors: Sequence[int]) -> Group:
    return Group(tuple(invariant_factors))


def parse_group(text: str) -> Group:
    """Parse ``"3,3"`` or ``"12"`` into a group."""
    try:
        factors = tuple(int(p) for p in text.replace(" ", "").split(",") if p)
    except ValueError:
        raise GroupError(f"cannot parse group {text!r}; expected comma-separated integers") from None
    return make_group(factors)


def add(G: Group, a: Sequence[int], b: Sequence[int]) -> Element:
    a, b = _check(G, a), _check(G, b)
    return tuple((x + y) % n for x, y, n in zip(a, b, G.factors))


def negate(G: Group, a: Sequence[int]) -> Element:
    a = _check(G, a)
    return tuple(-x % n for x, n in zip(a, G.factors))


def _check(G: Group, a: Sequence[int]) -> Element:
    if len(a) != G.rank:
        raise GroupError(f"element {tuple(a)} does not have rank {G.rank}")
    return tuple(a)


# -- number theory ---------------------------------------------------------


@lru_cache(maxsize=4096)
def _divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError(f"divisors need n >= 1, got {n}")
    return list(_divisors(n))


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _partitions(k: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def abelian_groups(n: int) -> list[Group]:
    """All abelian groups of order ``n`` up to isomorphism, in a fixed order.

    Order ``1`` has no invariant-factor chain here and yields nothing.
    """
    if n < 2:
        return []
    per_prime = []
    for p, k in sorted(factorize(n).items()):
        per_prime.append([[p**e for e in part] for part in _partitions(k)])
    groups = []
    for choice in _product(per_prime):
        rank = max(len(c) for c in choice)
        factors = []
        for i in range(rank):
            # i-th largest factor from each prime, combined
            factors.append(prod(c[i] if i < len(c) else 1 for c in choice))
        groups.append(make_group(sorted(factors)))
    return sorted(groups, key=lambda G: (G.rank, G.factors))


def _product(lists):
    if not lists:
        yield ()
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield (x,) + rest


def groups_up_to(max_order: int, min_order: int = 2) -> list[Group]:
    return [G for n in range(max(min_order, 2), max_order + 1) for G in abelian_groups(n)]


def subgroup_indices(G: Group, d: int) -> list[int]:
    """Indices of a subgroup of order ``d``, ascending.

    ``d`` is split as ``d_1 * ... * d_r`` with ``d_i | n_i`` by handing each
    factor, from the largest down, ``gcd(remaining, n_i)``. The subgroup is the
    product of the cyclic subgroups of order ``d_i`` (multiples of ``n_i/d_i``).
    """
    n = G.order
    if d < 1 or n % d:
        raise GroupError(f"{d} does not divide the group order {n}")
    parts = [1] * G.rank
    rest = d
    for i in reversed(range(G.rank)):
        parts[i] = gcd(rest, G.factors[i])
        rest //= parts[i]
    assert rest == 1  # per prime, the factors' exponents sum to at least d's
    gens = [range(0, ni, ni // di) for ni, di in zip(G.factors, parts)]
    idx = sorted(sum(c * s for c, s in zip(cs, G.strides)) for cs in _product([list(g) for g in gens]))
    return idx


def subgroup_of_order(G: Group, d: int):
    from .sumsets import ElementSet

    return ElementSet.from_indices(G, subgroup_indices(G, d))


def has_odd_square_subgroup(G: Group) -> bool:
    """True iff ``Z_p x Z_p`` embeds in ``G`` for some odd prime ``p``."""
    return any(p != 2 for p in factorize(prod(G.factors[:-1])))
