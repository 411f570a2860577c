"""Closed-form minimum sumset sizes and upper bounds for signed sumsets."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import product
from math import prod

from .groups import Group, divisors


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _check_m(G: Group, m: int):
    if not 1 <= m <= G.order:
        raise ValueError(f"m must lie in [1, {G.order}], got {m}")


def f_d(m: int, h: int, d: int) -> int:
    """``(h * ceil(m/d) - h + 1) * d``."""
    if m < 1 or h < 1 or d < 1:
        raise ValueError(f"f_d needs positive m, h, d; got m={m}, h={h}, d={d}")
    return (h * _ceil_div(m, d) - h + 1) * d


def _argmin(m: int, h: int, ds) -> tuple[int, int]:
    # ds ascending, so strict < keeps the smallest divisor on ties
    best = None
    for d in ds:
        v = f_d(m, h, d)
        if best is None or v < best[0]:
            best = (v, d)
    return best


@lru_cache(maxsize=1 << 16)
def u_with_argmin(n: int, m: int, h: int) -> tuple[int, int]:
    if not 1 <= m <= n:
        raise ValueError(f"u(n, m, h) needs 1 <= m <= n; got n={n}, m={m}")
    if h < 1:
        raise ValueError(f"h must be positive, got {h}")
    return _argmin(m, h, divisors(n))


def u(n: int, m: int, h: int) -> int:
    """Minimum of ``f_d(m, h)`` over the divisors ``d`` of ``n``."""
    return u_with_argmin(n, m, h)[0]


def rho_formula(G: Group, m: int, h: int) -> int:
    """Minimum ``|hA|`` over ``m``-subsets ``A`` of ``G``; depends only on ``|G|``."""
    _check_m(G, m)
    return u(G.order, m, h)


def constrained_divisors(G: Group, m: int) -> list[int]:
    """Divisors ``d = d_1...d_r`` (``d_i | n_i``) with ``d * n_r >= d_r * m``."""
    _check_m(G, m)
    return list(_constrained_divisors(G.factors, m))


@lru_cache(maxsize=1 << 14)
def _constrained_divisors(factors: tuple[int, ...], m: int) -> tuple[int, ...]:
    nr = factors[-1]
    found = set()
    for parts in product(*(divisors(n) for n in factors)):
        d = prod(parts)
        if d not in found and d * nr >= parts[-1] * m:
            found.add(d)
    return tuple(sorted(found))


def u_pm_with_argmin(G: Group, m: int, h: int) -> tuple[int, int]:
    if h < 1:
        raise ValueError(f"h must be positive, got {h}")
    return _argmin(m, h, constrained_divisors(G, m))


def u_pm_via_divisors(G: Group, m: int, h: int) -> int:
    return u_pm_with_argmin(G, m, h)[0]


def u_pm_factorization_with_argmin(G: Group, m: int, h: int) -> tuple[int, tuple[int, ...]]:
    """Minimum of ``prod u(n_i, m_i, h)`` over ``m_i <= n_i`` with ``prod m_i >= m``.

    Returns the value and the first minimizing vector in lexicographic order.
    """
    _check_m(G, m)
    if h < 1:
        raise ValueError(f"h must be positive, got {h}")
    ns = G.factors
    n = G.order
    # m_i * (n / n_i) >= prod m_j >= m
    ranges = [range(max(1, _ceil_div(m * ni, n)), ni + 1) for ni in ns]
    best = None
    for ms in product(*ranges):
        if prod(ms) < m:
            continue
        v = prod(u(ni, mi, h) for ni, mi in zip(ns, ms))
        if best is None or v < best[0]:
            best = (v, ms)
    return best


def u_pm_via_factorization(G: Group, m: int, h: int) -> int:
    return u_pm_factorization_with_argmin(G, m, h)[0]


def d_m(G: Group, m: int) -> int | None:
    """Smallest odd divisor of ``|G|`` that is at least ``2m + 1``; ``None`` if there is none."""
    _check_m(G, m)
    for d in divisors(G.order):
        if d % 2 and d >= 2 * m + 1:
            return d
    return None


def conjecture_value(G: Group, m: int, h: int) -> int:
    if h < 2:
        raise ValueError(f"the conjectured formula covers h >= 2, got h={h}")
    v = u_pm_via_divisors(G, m, h)
    if h == 2:
        dm = d_m(G, m)
        if dm is not None:
            v = min(v, dm - 1)
    return v


@dataclass(frozen=True)
class BoundReport:
    group: Group
    m: int
    h: int
    u_value: int
    u_pm_value: int
    d_m: int | None
    conjecture_value: int | None
    argmin_d: int
    argmin_d_constrained: int

    def to_json(self) -> dict:
        out = asdict(self)
        out["group"] = str(self.group)
        return out


def bound_report(G: Group, m: int, h: int) -> BoundReport:
    uv, ud = u_with_argmin(G.order, m, h)
    pv, pd = u_pm_with_argmin(G, m, h)
    return BoundReport(
        group=G,
        m=m,
        h=h,
        u_value=uv,
        u_pm_value=pv,
        d_m=d_m(G, m),
        conjecture_value=conjecture_value(G, m, h) if h >= 2 else None,
        argmin_d=ud,
        argmin_d_constrained=pd,
    )
