"""Explicit sets with small (signed) sumsets.

``cyclic_symmetric_witness`` builds a symmetric union of consecutive cosets in
``Z_n`` whose ``h``-fold sumset has at most ``f_d(m, h)`` elements; products of
those give symmetric witnesses in any group, and ``asymmetric_half_witness``
takes one element from each inverse pair of an odd-order subgroup.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import product as cartesian
from math import prod

from .bounds import _ceil_div, u_with_argmin
from .groups import Group, make_group, subgroup_indices
from .sumsets import ElementSet, PreconditionError, classify_symmetry, SymmetryClass


def _two_adic(x: int) -> tuple[int, int]:
    k = 0
    while x % 2 == 0:
        x //= 2
        k += 1
    return k, x


@dataclass(frozen=True)
class CyclicWitnessParams:
    n: int
    d: int
    m: int
    a: int
    b: int
    c: int
    n0: int
    d0: int
    m0: int
    e: int | None
    H_order: int
    case: int

    def to_json(self) -> dict:
        return asdict(self)


def cyclic_witness_params(n: int, m: int, d: int) -> CyclicWitnessParams:
    if d < 1 or n % d:
        raise PreconditionError(f"d={d} does not divide n={n}")
    if not 1 <= m <= n:
        raise PreconditionError(f"m must lie in [1, {n}], got {m}")
    if n < 2:
        raise PreconditionError("n must be at least 2")
    a, n0 = _two_adic(n)
    b, d0 = _two_adic(d)
    c, m0 = _two_adic(_ceil_div(m, d))
    if b + c <= a:
        return CyclicWitnessParams(n, d, m, a, b, c, n0, d0, m0, None, 2**c * d, 1)
    return CyclicWitnessParams(n, d, m, a, b, c, n0, d0, m0, n0 // d0, 2**a * d0, 2)


def cyclic_symmetric_witness(n: int, m: int, d: int, h: int = 1) -> ElementSet:
    """Symmetric ``R`` in ``Z_n`` with ``|R| = d * ceil(m/d)`` and ``|hR| <= f_d(m, h)``.

    Case 1 (``b + c <= a``): the cosets ``i + H`` for ``|i| <= m0 // 2`` with
    ``|H| = 2^c d``. Case 2: the cosets ``e//2 + i + H`` for
    ``-2^(b+c-a-1) m0 < i <= 2^(b+c-a-1) m0`` with ``|H| = 2^a d0``.
    """
    if h < 1:
        raise PreconditionError(f"h must be positive, got {h}")
    p = cyclic_witness_params(n, m, d)
    step = n // p.H_order
    if p.case == 1:
        half = p.m0 // 2
        shifts = range(-half, half + 1)
    else:
        half = 2 ** (p.b + p.c - p.a - 1) * p.m0
        shifts = range(p.e // 2 - half + 1, p.e // 2 + half + 1)
    members = {(s + k * step) % n for s in shifts for k in range(p.H_order)}
    R = ElementSet(make_group([n]), tuple(members))
    assert R.size == d * _ceil_div(m, d)
    assert classify_symmetry(R.group, R) is SymmetryClass.SYMMETRIC
    return R


def product_witness(G: Group, m_vector, h: int) -> ElementSet:
    """Product of per-factor cyclic witnesses at the minimizing divisor of ``u(n_i, m_i, h)``."""
    m_vector = tuple(m_vector)
    if len(m_vector) != G.rank:
        raise PreconditionError(f"need {G.rank} entries in the m vector, got {len(m_vector)}")
    for mi, ni in zip(m_vector, G.factors):
        if not 1 <= mi <= ni:
            raise PreconditionError(f"m_i={mi} outside [1, {ni}]")
    parts = []
    for mi, ni in zip(m_vector, G.factors):
        _, d = u_with_argmin(ni, mi, h)
        parts.append(cyclic_symmetric_witness(ni, mi, d, h).indices)
    members = (sum(c * s for c, s in zip(cs, G.strides)) for cs in cartesian(*parts))
    return ElementSet(G, tuple(members))


def asymmetric_half_witness(G: Group, m: int, d: int) -> ElementSet:
    """``m`` elements of a subgroup of odd order ``d``, no two of them inverse.

    Takes the smaller index of each inverse pair in the subgroup, ascending.
    ``0`` is never in the ``2``-fold signed sumset, which stays inside the
    subgroup, so that sumset has at most ``d - 1`` elements.
    """
    if d % 2 == 0:
        raise PreconditionError(f"d must be odd, got {d}")
    if d < 2 * m + 1:
        raise PreconditionError(f"need d >= 2m + 1, got d={d}, m={m}")
    if G.order % d:
        raise PreconditionError(f"d={d} does not divide |G|={G.order}")
    neg = G.neg_index
    H = subgroup_indices(G, d)
    lower = [x for x in H if x != 0 and x < neg[x]]
    return ElementSet(G, tuple(lower[:m]))


def trim_to_size(A: ElementSet, m: int) -> ElementSet:
    """Drop elements down to ``m``, largest indices first, keeping inverse pairs together where possible."""
    if m > A.size:
        raise PreconditionError(f"cannot trim a {A.size}-set to {m} elements")
    G = A.group
    neg = G.neg_index
    units = {}
    for x in A.indices:
        key = min(x, int(neg[x])) if A.mask[neg[x]] else x
        units.setdefault(key, []).append(x)
    order = sorted(units.values(), key=max, reverse=True)
    drop = A.size - m
    removed = set()
    for unit in order:
        if drop == 0:
            break
        if len(unit) <= drop:
            removed.update(unit)
            drop -= len(unit)
    if drop:
        # one element left to remove and only pairs remain: split the largest pair
        for unit in order:
            if not removed.issuperset(unit):
                removed.add(max(unit))
                drop -= 1
                break
    return ElementSet(G, tuple(x for x in A.indices if x not in removed))


def product_bound(G: Group, m_vector, h: int) -> int:
    return prod(u_with_argmin(ni, mi, h)[0] for ni, mi in zip(G.factors, m_vector))
