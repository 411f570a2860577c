"""Exit criteria. Each test prints one PASS/FAIL line; all comparisons are exact."""

import random

import pytest

from sigma_sumset.bounds import conjecture_value, rho_formula, u, u_pm_via_divisors, u_pm_via_factorization
from sigma_sumset.constructions import asymmetric_half_witness
from sigma_sumset.groups import groups_up_to, make_group, parse_group
from sigma_sumset.search import rho_pm_oracle, rho_pm_restricted, survey
from sigma_sumset.sumsets import ElementSet, SymmetryClass, fold_signed_sumset, sdeg, symmetrize_step
from sigma_sumset.verify import run_check

G33, G55 = make_group([3, 3]), make_group([5, 5])


@pytest.fixture
def report(capsys, request):
    def emit(ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail}")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def survey_24():
    return survey(groups_up_to(24), None, [2, 3])


def test_criterion_01_headline_values(report):
    a = rho_pm_restricted(G33, 4, 2)
    b = rho_pm_restricted(G55, 9, 2)
    got = (a.value, rho_formula(G33, 4, 2), b.value, b.witness_class, conjecture_value(G33, 4, 2), conjecture_value(G55, 9, 2))
    want = (8, 7, 15, SymmetryClass.NEAR_SYMMETRIC, 8, 15)
    report(got == want, f"rho_pm(Z3^2,4,2)={a.value} rho={got[1]} rho_pm(Z5^2,9,2)={b.value} ({b.witness_class}) conj={got[4]},{got[5]}")


def test_criterion_02_z5_squared_symmetric_floor(report):
    out = rho_pm_restricted(G55, 9, 2, classes=[SymmetryClass.SYMMETRIC], early_stop=False)
    report(out.value >= 17 and out.explored == 495, f"min over {out.explored} symmetric 9-sets = {out.value} (need >= 17)")


def test_criterion_03_order_24_survey(report, survey_24):
    h2 = sorted((str(r.group), r.m) for r in survey_24 if r.h == 2 and not r.match_rho)
    h3 = sorted((str(r.group), r.m) for r in survey_24 if r.h == 3 and not r.match_rho)
    refused = [r for r in survey_24 if r.refused]
    ok = h2 == [("3,3", 4)] and not refused
    report(ok, f"{len(survey_24)} instances; h=2 exceptions {h2}; h=3 discrepancies (reported) {h3}")


def test_criterion_04_cyclic_groups(report):
    rep = run_check("cyclic", 21, [2, 3])
    report(rep.passed, f"{rep.instances} instances, failures {rep.failures[:3]}")


def test_criterion_05_restricted_matches_oracle(report):
    rep = run_check("symmetry", 10, [2, 3], m_max=5)
    report(rep.passed, f"{rep.instances} instances, failures {rep.failures[:3]}")


def test_criterion_06_symmetrization(report):
    rng = random.Random(20141)
    pool = [G for G in groups_up_to(16) if G.inverse_pairs]
    done, bad = 0, []
    while done < 1000:
        G = rng.choice(pool)
        m = rng.randint(3, G.order)
        B = ElementSet(G, tuple(rng.sample(range(G.order), m)))
        if not 1 <= sdeg(G, B) <= m - 2:
            continue
        h = rng.randint(1, 4)
        B2 = symmetrize_step(G, B, h)
        ok = sdeg(G, B2) == sdeg(G, B) + 2 and fold_signed_sumset(G, B2, h).issubset(fold_signed_sumset(G, B, h))
        if not ok:
            bad.append((str(G), B.indices, h))
        done += 1
    report(not bad, f"{done} samples, failures {bad[:3]}")


def test_criterion_07_u_pm_equivalence(report):
    rep = run_check("upm-equality", 100, [2, 3, 4, 5])
    report(rep.passed, f"{rep.instances} instances, failures {rep.failures[:3]}")


def test_criterion_08_construction_sweep(report):
    rep = run_check("constructions", 200, [1, 2, 3, 4, 5, 6])
    report(rep.passed, f"{rep.instances} (n, d, m, h) instances, failures {rep.failures[:3]}")


@pytest.mark.parametrize("gtext", ["3,3", "5,5", "3,9", "3,3,3"])
def test_criterion_09_odd_order(report, gtext):
    G = parse_group(gtext)
    n = G.order
    m = (n - 1) // 2
    upm = (u_pm_via_divisors(G, m, 2), u_pm_via_factorization(G, m, 2))
    A = asymmetric_half_witness(G, m, n)
    achieved = fold_signed_sumset(G, A, 2).size
    searched = rho_pm_restricted(G, m, 2).value
    ok = upm == (n, n) and achieved <= n - 1 and searched <= n - 1
    report(ok, f"{gtext}: u_pm={upm} witness={achieved} search={searched} (n={n})")


def test_criterion_10_no_p_squared(report):
    bad, count = [], 0
    for gtext in ["2,2", "2,4", "2,2,2", "2,6", "4,4"]:
        G = parse_group(gtext)
        for m in range(1, G.order + 1):
            for h in (2, 3):
                count += 1
                value = rho_pm_restricted(G, m, h).value
                if value != u(G.order, m, h):
                    bad.append((gtext, m, h, value))
    report(not bad, f"{count} instances, failures {bad[:3]}")


def test_criterion_11_conjecture_scan(report, survey_24):
    bad = [(str(r.group), r.m, r.h, r.rho_pm, r.conjecture) for r in survey_24 if not r.match_conjecture]
    report(not bad, f"{len(survey_24)} instances, mismatches {bad}")


def test_oracle_spot_check_on_headline(report):
    out = rho_pm_oracle(G33, 4, 2)
    report(out.value == 8 and out.explored == 126, f"full oracle over {out.explored} sets = {out.value}")
