"""Exhaustive minimization of |hA| and |h(+-)A| over m-subsets.

The restricted search only visits symmetric, near-symmetric and asymmetric
sets, generated from the pair structure of ``G`` (self-inverse elements plus
inverse pairs ``{x, -x}``) rather than by filtering all subsets. The oracles
visit every ``m``-subset and exist to cross-check it on small groups.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, islice, product
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bounds import conjecture_value, d_m, u, u_pm_via_divisors
from .groups import Group, make_group
from .sumsets import (
    MAX_ORDER,
    ElementSet,
    SymmetryClass,
    batch_size,
    classify_symmetry,
    signed_sumset_masks,
    sumset_masks,
)

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "SIGMA_SUMSET_BUDGET"

CLASS_ORDER = (SymmetryClass.SYMMETRIC, SymmetryClass.NEAR_SYMMETRIC, SymmetryClass.ASYMMETRIC)


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int, what: str = "subsets"):
        super().__init__(f"search needs {needed} {what}, budget is {budget}")
        self.needed = needed
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class SearchOutcome:
    group: Group
    m: int
    h: int
    value: int
    witness: ElementSet
    witness_class: SymmetryClass
    mode: str
    explored: int
    signed: bool = True
    classes_searched: tuple[str, ...] = ()
    empty_classes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "m": self.m,
            "h": self.h,
            "signed": self.signed,
            "value": self.value,
            "witness": self.witness.to_json(),
            "witness_indices": list(self.witness.indices),
            "witness_class": str(self.witness_class),
            "mode": self.mode,
            "explored": self.explored,
            "classes_searched": list(self.classes_searched),
            "empty_classes": list(self.empty_classes),
        }


# -- class enumeration -------------------------------------------------------


def _sym_shapes(q: int, p: int, m: int) -> Iterator[tuple[int, int]]:
    """``(s, k)`` with ``s`` self-inverse elements and ``k`` whole pairs, ``s + 2k = m``."""
    for s in range(m % 2, min(q, m) + 1, 2):
        k = (m - s) // 2
        if k <= p:
            yield s, k


def class_size(G: Group, m: int, cls: SymmetryClass) -> int:
    q, p = len(G.self_inverse), len(G.inverse_pairs)
    if cls is SymmetryClass.SYMMETRIC:
        return sum(comb(q, s) * comb(p, k) for s, k in _sym_shapes(q, p, m))
    if cls is SymmetryClass.NEAR_SYMMETRIC:
        if m < 2:
            return 0
        return sum(comb(q, s) * comb(p, k) * 2 * (p - k) for s, k in _sym_shapes(q, p, m - 1))
    if cls is SymmetryClass.ASYMMETRIC:
        return comb(p, m) * 2**m
    raise ValueError(cls)


def _symmetric(G: Group, m: int) -> Iterator[tuple[int, ...]]:
    S, P = G.self_inverse, G.inverse_pairs
    for s, k in _sym_shapes(len(S), len(P), m):
        for selfs in combinations(S, s):
            for pairs in combinations(range(len(P)), k):
                yield selfs + tuple(x for i in pairs for x in P[i])


def _near_symmetric(G: Group, m: int) -> Iterator[tuple[int, ...]]:
    # m == 1 sets are asymmetric singletons; they are enumerated there
    if m < 2:
        return
    S, P = G.self_inverse, G.inverse_pairs
    for s, k in _sym_shapes(len(S), len(P), m - 1):
        for selfs in combinations(S, s):
            for pairs in combinations(range(len(P)), k):
                base = selfs + tuple(x for i in pairs for x in P[i])
                chosen = set(pairs)
                for j in range(len(P)):
                    if j not in chosen:
                        yield base + (P[j][0],)
                        yield base + (P[j][1],)


def _asymmetric(G: Group, m: int) -> Iterator[tuple[int, ...]]:
    P = G.inverse_pairs
    for pairs in combinations(range(len(P)), m):
        for signs in product((0, 1), repeat=m):
            yield tuple(P[i][sgn] for i, sgn in zip(pairs, signs))


_GENERATORS = {
    SymmetryClass.SYMMETRIC: _symmetric,
    SymmetryClass.NEAR_SYMMETRIC: _near_symmetric,
    SymmetryClass.ASYMMETRIC: _asymmetric,
}


def class_members(G: Group, m: int, cls: SymmetryClass) -> Iterator[tuple[int, ...]]:
    """All ``m``-subsets of ``G`` in ``cls``, each once, in a fixed order."""
    return _GENERATORS[cls](G, m)


# -- minimization ------------------------------------------------------------


@lru_cache(maxsize=64)
def _group(factors: tuple[int, ...]) -> Group:
    return make_group(factors)


def _eval_batch(factors: tuple[int, ...], rows: np.ndarray, h: int, signed: bool) -> tuple[int, int]:
    G = _group(factors)
    masks = signed_sumset_masks(G, rows, h) if signed else sumset_masks(G, rows, h)
    sizes = masks.sum(axis=1)
    i = int(np.argmin(sizes))
    return int(sizes[i]), i


def _batches(sets: Iterable[tuple[int, ...]], size: int) -> Iterator[np.ndarray]:
    it = iter(sets)
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.int64)


def _minimize(
    G: Group,
    h: int,
    signed: bool,
    batches: Iterator[np.ndarray],
    floor: int | None,
    workers: int,
) -> tuple[int, tuple[int, ...], int]:
    """Scan batches in order; the witness is the first minimizer in scan order.

    With ``floor`` set, scanning stops after the first batch that reaches it.
    Results are consumed in submission order, so the outcome (including the
    explored count) does not depend on ``workers``.
    """
    best_value, best_row = None, None
    explored = 0

    def consider(rows, result):
        nonlocal best_value, best_row, explored
        value, i = result
        explored += len(rows)
        if best_value is None or value < best_value:
            best_value, best_row = value, tuple(int(x) for x in rows[i])
        return floor is not None and best_value <= floor

    if workers <= 1:
        for rows in batches:
            if consider(rows, _eval_batch(G.factors, rows, h, signed)):
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pending = []
            done = False
            for rows in batches:
                pending.append((rows, pool.submit(_eval_batch, G.factors, rows, h, signed)))
                if len(pending) >= 2 * workers:
                    rows0, fut = pending.pop(0)
                    if consider(rows0, fut.result()):
                        done = True
                        break
            while pending and not done:
                rows0, fut = pending.pop(0)
                done = consider(rows0, fut.result())
            for _, fut in pending:
                fut.cancel()
    return best_value, best_row, explored


def _check(G: Group, m: int, h: int):
    if G.order > MAX_ORDER:
        raise ValueError(f"|G| = {G.order} exceeds the configured cap {MAX_ORDER}")
    if not 1 <= m <= G.order:
        raise ValueError(f"m must lie in [1, {G.order}], got {m}")
    if h < 0:
        raise ValueError(f"h must be nonnegative, got {h}")


def _lower_bound(G: Group, m: int, h: int) -> int:
    return 1 if h == 0 else u(G.order, m, h)


def rho_pm_restricted(
    G: Group,
    m: int,
    h: int,
    *,
    classes: Sequence[SymmetryClass] = CLASS_ORDER,
    early_stop: bool = True,
    budget: int | None = None,
    workers: int = 1,
) -> SearchOutcome:
    """Minimum ``|h(+-)A|`` over symmetric, near-symmetric and asymmetric ``m``-sets.

    Classes are scanned in the order given. Unless ``early_stop`` is off the
    scan ends as soon as some set meets ``u(|G|, m, h)``, which no set can
    beat. Restricting ``classes`` gives the minimum over those classes only.
    """
    _check(G, m, h)
    budget = default_budget() if budget is None else budget
    sizes = {cls: class_size(G, m, cls) for cls in classes}
    total = sum(sizes.values())
    if total > budget:
        raise BudgetExceeded(total, budget, "candidate sets")
    searched = tuple(str(c) for c in classes if sizes[c])
    empty = tuple(str(c) for c in classes if not sizes[c])
    if not searched:
        raise ValueError(f"no {m}-subsets of {G.label()} in the classes {[str(c) for c in classes]}")

    def stream():
        for cls in classes:
            yield from class_members(G, m, cls)

    floor = _lower_bound(G, m, h) if early_stop else None
    value, row, explored = _minimize(G, h, True, _batches(stream(), batch_size(G, m, h)), floor, workers)
    witness = ElementSet(G, row)
    return SearchOutcome(
        group=G,
        m=m,
        h=h,
        value=value,
        witness=witness,
        witness_class=classify_symmetry(G, witness),
        mode="restricted",
        explored=explored,
        classes_searched=searched,
        empty_classes=empty,
    )


def _oracle(G: Group, m: int, h: int, signed: bool, budget: int | None, workers: int) -> SearchOutcome:
    _check(G, m, h)
    budget = default_budget() if budget is None else budget
    total = comb(G.order, m)
    if total > budget:
        raise BudgetExceeded(total, budget)
    sets = combinations(range(G.order), m)
    value, row, explored = _minimize(G, h, signed, _batches(sets, batch_size(G, m, h)), None, workers)
    witness = ElementSet(G, row)
    return SearchOutcome(
        group=G,
        m=m,
        h=h,
        value=value,
        witness=witness,
        witness_class=classify_symmetry(G, witness),
        mode="full-oracle",
        explored=explored,
        signed=signed,
    )


def rho_pm_oracle(G: Group, m: int, h: int, *, budget: int | None = None, workers: int = 1) -> SearchOutcome:
    """Minimum ``|h(+-)A|`` over all ``m``-subsets; refuses when ``C(|G|, m)`` exceeds the budget."""
    return _oracle(G, m, h, True, budget, workers)


def rho_oracle(G: Group, m: int, h: int, *, budget: int | None = None, workers: int = 1) -> SearchOutcome:
    """Minimum ``|hA|`` over all ``m``-subsets."""
    return _oracle(G, m, h, False, budget, workers)


# -- surveys -----------------------------------------------------------------

CSV_FIELDS = ("group", "m", "h", "rho", "rho_pm", "u_pm", "d_m", "conjecture", "match_rho", "match_conjecture")


@dataclass
class SurveyRow:
    group: Group
    m: int
    h: int
    rho: int
    u_pm: int
    d_m: int | None
    conjecture: int | None
    rho_pm: int | None = None
    witness_class: str | None = None
    refused: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def match_rho(self) -> bool | None:
        return None if self.rho_pm is None else self.rho_pm == self.rho

    @property
    def match_conjecture(self) -> bool | None:
        if self.rho_pm is None or self.conjecture is None:
            return None
        return self.rho_pm == self.conjecture

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "m": self.m,
            "h": self.h,
            "rho": self.rho,
            "rho_pm": self.rho_pm,
            "u_pm": self.u_pm,
            "d_m": self.d_m,
            "conjecture": self.conjecture,
            "match_rho": self.match_rho,
            "match_conjecture": self.match_conjecture,
            "witness_class": self.witness_class,
            "refused": self.refused,
        }

    def csv_fields(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "true" if x else "false"
            return str(x)

        rho_pm = "refused" if self.refused else fmt(self.rho_pm)
        return [
            str(self.group), str(self.m), str(self.h), fmt(self.rho), rho_pm, fmt(self.u_pm),
            fmt(self.d_m), fmt(self.conjecture), fmt(self.match_rho), fmt(self.match_conjecture),
        ]


def survey(
    groups: Iterable[Group],
    m_range: Iterable[int] | None,
    h_range: Iterable[int],
    *,
    budget: int | None = None,
    workers: int = 1,
) -> list[SurveyRow]:
    """One row per ``(G, m, h)``; ``m_range=None`` means every ``m`` in ``[1, |G|]``.

    Instances over budget become rows with ``refused`` set; the sweep goes on.
    """
    h_values = list(h_range)
    m_values = None if m_range is None else list(m_range)
    rows = []
    for G in groups:
        ms = range(1, G.order + 1) if m_values is None else [m for m in m_values if 1 <= m <= G.order]
        for m in ms:
            for h in h_values:
                if h < 1:
                    raise ValueError("survey h values must be positive")
                row = SurveyRow(
                    group=G,
                    m=m,
                    h=h,
                    rho=u(G.order, m, h),
                    u_pm=u_pm_via_divisors(G, m, h),
                    d_m=d_m(G, m),
                    conjecture=conjecture_value(G, m, h) if h >= 2 else None,
                )
                try:
                    out = rho_pm_restricted(G, m, h, budget=budget, workers=workers)
                except BudgetExceeded as exc:
                    row.refused = str(exc)
                else:
                    row.rho_pm = out.value
                    row.witness_class = str(out.witness_class)
                rows.append(row)
    return rows


def write_survey_csv(rows: Iterable[SurveyRow], fh) -> None:
    w = csv.writer(fh, delimiter=";", lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for row in rows:
        w.writerow(row.csv_fields())
