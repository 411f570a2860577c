"""Sumsets and signed sumsets in finite abelian groups."""

from .bounds import (
    BoundReport,
    bound_report,
    conjecture_value,
    constrained_divisors,
    d_m,
    f_d,
    rho_formula,
    u,
    u_pm_via_divisors,
    u_pm_via_factorization,
)
from .constructions import (
    CyclicWitnessParams,
    asymmetric_half_witness,
    cyclic_symmetric_witness,
    product_witness,
)
from .groups import Group, GroupError, abelian_groups, add, divisors, make_group, negate, parse_group, subgroup_of_order
from .search import BudgetExceeded, SearchOutcome, rho_oracle, rho_pm_oracle, rho_pm_restricted, survey
from .sumsets import (
    ElementSet,
    PreconditionError,
    SymmetryClass,
    classify_symmetry,
    fold_signed_sumset,
    fold_sumset,
    sdeg,
    symmetrize_step,
)

__version__ = "0.1.0"
