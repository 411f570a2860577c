"""h-fold sumsets, h-fold signed sumsets, and symmetry bookkeeping.

Sets are fixed-width boolean masks of length ``|G|`` over element indices.
The batched kernels take a ``(K, m)`` array of element indices (one candidate
set per row) and return ``(K, |G|)`` masks, so a search evaluates thousands of
candidates per numpy call.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .groups import Element, Group

MAX_H = 64
MAX_ORDER = 2**20


class PreconditionError(ValueError):
    pass


class SymmetryClass(str, enum.Enum):
    SYMMETRIC = "Symmetric"
    NEAR_SYMMETRIC = "NearSymmetric"
    ASYMMETRIC = "Asymmetric"
    OTHER = "Other"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ElementSet:
    group: Group
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        n = self.group.order
        if idx and not (0 <= idx[0] and idx[-1] < n):
            raise ValueError(f"element indices must lie in [0, {n})")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_indices(cls, group: Group, indices: Iterable[int]) -> ElementSet:
        return cls(group, tuple(indices))

    @classmethod
    def from_coords(cls, group: Group, elements: Iterable[Iterable[int]]) -> ElementSet:
        return cls(group, tuple(group.index(tuple(e)) for e in elements))

    @classmethod
    def from_mask(cls, group: Group, mask: np.ndarray) -> ElementSet:
        return cls(group, tuple(np.flatnonzero(mask).tolist()))

    @property
    def size(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x]) if 0 <= x < self.group.order else False

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[list(self.indices)] = True
        m.flags.writeable = False
        return m

    def negated(self) -> ElementSet:
        return ElementSet(self.group, tuple(self.group.neg_index[list(self.indices)].tolist()))

    def union(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.group, self.indices + other.indices)

    def issubset(self, other: ElementSet) -> bool:
        return not np.any(self.mask & ~other.mask)

    def coords(self) -> list[Element]:
        return [self.group.coords(i) for i in self.indices]

    def to_json(self) -> list[list[int]]:
        """Sorted coordinate tuples."""
        return [list(c) for c in sorted(self.coords())]


# -- batched kernels ---------------------------------------------------------


def _check_h(h: int):
    if h < 0:
        raise ValueError(f"h must be nonnegative, got {h}")
    if h > MAX_H:
        raise ValueError(f"h = {h} exceeds the configured cap {MAX_H}")


def sumset_masks(G: Group, rows: np.ndarray, h: int) -> np.ndarray:
    """Masks of ``hA`` for every row ``A`` of ``rows``."""
    _check_h(h)
    rows = np.asarray(rows, dtype=np.int64)
    K, m = rows.shape
    out = np.zeros((K, G.order), dtype=bool)
    if h == 0:
        out[:, 0] = True
        return out
    np.put_along_axis(out, rows, True, axis=1)
    shifts = G.minus_rows(rows)  # (K, m, n)
    acc = out
    for _ in range(h - 1):
        acc = np.take_along_axis(acc[:, None, :], shifts, axis=2).any(axis=1)
    return acc


def signed_sumset_masks(G: Group, rows: np.ndarray, h: int) -> np.ndarray:
    """Masks of ``h(+-)A`` for every row ``A`` of ``rows``.

    ``layers[:, w]`` holds the sums reachable with total weight ``w`` from the
    elements seen so far; each new element ``a`` gets a single coefficient
    ``+t`` or ``-t``.
    """
    _check_h(h)
    rows = np.asarray(rows, dtype=np.int64)
    K, m = rows.shape
    n = G.order
    layers = np.zeros((K, h + 1, n), dtype=bool)
    layers[:, 0, 0] = True
    neg = G.neg_index
    for j in range(m):
        a = rows[:, j]
        new = layers.copy()
        for t in range(1, h + 1):
            src = layers[:, : h + 1 - t, :]
            plus = G.scale_index(a, t)
            minus = neg[plus]
            new[:, t:, :] |= np.take_along_axis(src, G.minus_rows(plus)[:, None, :], axis=2)
            if np.any(plus != minus):
                new[:, t:, :] |= np.take_along_axis(src, G.minus_rows(minus)[:, None, :], axis=2)
        layers = new
    return layers[:, h, :]


def batch_size(G: Group, m: int, h: int, budget_cells: int = 2**22) -> int:
    per_row = G.order * max(h + 1, m)
    return max(1, min(8192, budget_cells // max(per_row, 1)))


# -- single-set operations ---------------------------------------------------


def _rows(A: ElementSet) -> np.ndarray:
    if not A.indices:
        raise ValueError("sumsets need a nonempty set")
    return np.array([A.indices], dtype=np.int64)


def fold_sumset(G: Group, A: ElementSet, h: int) -> ElementSet:
    return ElementSet.from_mask(G, sumset_masks(G, _rows(A), h)[0])


def fold_signed_sumset(G: Group, A: ElementSet, h: int) -> ElementSet:
    return ElementSet.from_mask(G, signed_sumset_masks(G, _rows(A), h)[0])


def sdeg(G: Group, A: ElementSet) -> int:
    """Degree of symmetry ``|A & -A|``."""
    if not A.indices:
        return 0
    idx = np.array(A.indices)
    return int(A.mask[G.neg_index[idx]].sum())


def classify_symmetry(G: Group, A: ElementSet) -> SymmetryClass:
    # Asymmetric is tested before near-symmetric so a singleton {x}, x != -x,
    # counts as asymmetric.
    m, s = A.size, sdeg(G, A)
    if s == m:
        return SymmetryClass.SYMMETRIC
    if s == 0:
        return SymmetryClass.ASYMMETRIC
    if s == m - 1:
        return SymmetryClass.NEAR_SYMMETRIC
    return SymmetryClass.OTHER


def symmetrize_step(G: Group, B: ElementSet, h: int | None = None) -> ElementSet:
    """Replace the smallest unpaired element by the negative of the next one.

    With ``b1 < b2`` the two smallest elements whose negatives are missing from
    ``B``, returns ``(B - {b1}) | {-b2}``. Its degree of symmetry is two higher
    and its signed sumsets are contained in those of ``B`` for every ``h``.
    ``h`` is accepted for interface symmetry and only range-checked.
    """
    if h is not None:
        _check_h(h)
    m, s = B.size, sdeg(G, B)
    if m < 3 or not 1 <= s <= m - 2:
        raise PreconditionError(f"symmetrize_step needs m >= 3 and 1 <= sdeg <= m-2; got m={m}, sdeg={s}")
    neg = G.neg_index
    unpaired = [b for b in B.indices if not B.mask[neg[b]]]
    b1, b2 = unpaired[0], unpaired[1]
    return ElementSet(G, tuple(x for x in B.indices if x != b1) + (int(neg[b2]),))


def sumset_size_chain(G: Group, A: ElementSet, h_max: int) -> list[int]:
    """``[|0A|, |1A|, ..., |h_max A|]`` from one pass of repeated set addition."""
    _check_h(h_max)
    shifts = G.minus_rows(np.array(A.indices, dtype=np.int64))  # (m, n)
    acc = np.zeros(G.order, dtype=bool)
    acc[0] = True
    sizes = [1]
    for _ in range(h_max):
        acc = acc[shifts].any(axis=0)
        sizes.append(int(acc.sum()))
    return sizes
