"""Named verification sweeps, shared by the CLI and the acceptance tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .bounds import _ceil_div, conjecture_value, f_d, u, u_pm_via_divisors, u_pm_via_factorization
from .constructions import cyclic_symmetric_witness
from .groups import divisors, groups_up_to, has_odd_square_subgroup, make_group
from .search import BudgetExceeded, rho_pm_oracle, rho_pm_restricted
from .sumsets import SymmetryClass, classify_symmetry, sumset_size_chain


@dataclass
class CheckReport:
    check: str
    max_order: int
    h_values: list[int]
    instances: int = 0
    failures: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "max_order": self.max_order,
            "h": self.h_values,
            "passed": self.passed,
            "instances": self.instances,
            "failures": self.failures,
            "notes": self.notes,
        }


def check_symmetry(report: CheckReport, m_max: int | None, budget, workers):
    m_max = 5 if m_max is None else m_max
    for G in groups_up_to(report.max_order):
        for m in range(1, min(G.order, m_max) + 1):
            for h in report.h_values:
                full = rho_pm_oracle(G, m, h, budget=budget, workers=workers).value
                restricted = rho_pm_restricted(G, m, h, budget=budget, workers=workers).value
                report.instances += 1
                if full != restricted:
                    report.failures.append(
                        {"group": str(G), "m": m, "h": h, "oracle": full, "restricted": restricted}
                    )


def check_cyclic(report: CheckReport, m_max, budget, workers):
    for n in range(2, report.max_order + 1):
        G = make_group([n])
        for m in _ms(n, m_max):
            for h in report.h_values:
                value = rho_pm_restricted(G, m, h, budget=budget, workers=workers).value
                report.instances += 1
                if value != u(n, m, h):
                    report.failures.append({"group": str(G), "m": m, "h": h, "rho_pm": value, "u": u(n, m, h)})


def check_upm_equality(report: CheckReport, m_max, budget, workers):
    for G in groups_up_to(report.max_order):
        for m in _ms(G.order, m_max):
            for h in report.h_values:
                a, b = u_pm_via_divisors(G, m, h), u_pm_via_factorization(G, m, h)
                report.instances += 1
                if a != b:
                    report.failures.append({"group": str(G), "m": m, "h": h, "via_divisors": a, "via_factorization": b})


def check_conjecture(report: CheckReport, m_max, budget, workers):
    for G in groups_up_to(report.max_order):
        for m in _ms(G.order, m_max):
            for h in report.h_values:
                if h < 2:
                    continue
                value = rho_pm_restricted(G, m, h, budget=budget, workers=workers).value
                predicted = conjecture_value(G, m, h)
                report.instances += 1
                if value != predicted:
                    report.failures.append(
                        {"group": str(G), "m": m, "h": h, "rho_pm": value, "conjecture": predicted}
                    )


def check_no_p2_subgroup(report: CheckReport, m_max, budget, workers):
    skipped = 0
    for G in groups_up_to(report.max_order):
        if has_odd_square_subgroup(G):
            skipped += 1
            continue
        for m in _ms(G.order, m_max):
            for h in report.h_values:
                value = rho_pm_restricted(G, m, h, budget=budget, workers=workers).value
                report.instances += 1
                if value != u(G.order, m, h):
                    report.failures.append({"group": str(G), "m": m, "h": h, "rho_pm": value, "rho": u(G.order, m, h)})
    report.notes.append(f"{skipped} groups with a Z_p x Z_p subgroup (p odd) skipped")


def check_constructions(report: CheckReport, m_max, budget, workers):
    """Cyclic witnesses: symmetric, right size, ``|hR| <= f_d``, and the best ``d`` gives ``u``."""
    h_max = max(report.h_values)
    for n in range(2, report.max_order + 1):
        G = make_group([n])
        chains = {}
        for d in divisors(n):
            for k in range(1, n // d + 1):
                m = d * (k - 1) + 1
                R = cyclic_symmetric_witness(n, m, d, 1)
                ok = R.size == d * k and classify_symmetry(G, R) is SymmetryClass.SYMMETRIC
                if not ok:
                    report.failures.append({"n": n, "d": d, "m": m, "problem": "shape", "size": R.size})
                chains[d, k] = sumset_size_chain(G, R, h_max)
        for m in _ms(n, m_max):
            for h in report.h_values:
                best = None
                for d in divisors(n):
                    size = chains[d, _ceil_div(m, d)][h]
                    report.instances += 1
                    if size > f_d(m, h, d):
                        report.failures.append({"n": n, "d": d, "m": m, "h": h, "hR": size, "f_d": f_d(m, h, d)})
                    best = size if best is None else min(best, size)
                if best != u(n, m, h):
                    report.failures.append({"n": n, "m": m, "h": h, "best_hR": best, "u": u(n, m, h)})


def _ms(n: int, m_max: int | None):
    return range(1, (n if m_max is None else min(n, m_max)) + 1)


CHECKS: dict[str, tuple[Callable, int, list[int]]] = {
    "symmetry": (check_symmetry, 10, [2, 3]),
    "cyclic": (check_cyclic, 21, [2, 3]),
    "upm-equality": (check_upm_equality, 100, [2, 3, 4, 5]),
    "conjecture": (check_conjecture, 24, [2, 3]),
    "no-p2-subgroup": (check_no_p2_subgroup, 16, [2, 3]),
    "constructions": (check_constructions, 200, [1, 2, 3, 4, 5, 6]),
}


def run_check(
    name: str,
    max_order: int | None = None,
    h_values: Sequence[int] | None = None,
    *,
    m_max: int | None = None,
    budget: int | None = None,
    workers: int = 1,
) -> CheckReport:
    """Run a named sweep; ``KeyError`` for an unknown name, ``BudgetExceeded`` propagates."""
    fn, default_order, default_h = CHECKS[name]
    report = CheckReport(
        check=name,
        max_order=default_order if max_order is None else max_order,
        h_values=list(default_h if h_values is None else h_values),
    )
    if not report.h_values:
        raise ValueError("need at least one h value")
    fn(report, m_max, budget, workers)
    return report


__all__ = ["CHECKS", "CheckReport", "run_check", "BudgetExceeded"]
