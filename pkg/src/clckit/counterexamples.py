"""Built-in fixtures for the two negative results, one command away.

Counterexample A: the budget-additive function min(sum w_i, 2) on 12 elements
with weights (1,1,1,1,1,1,2,2,2,2,0,0) is nonnegative, monotone and
submodular, yet its degree-2 restriction has a Hessian with two positive
eigenvalues, so it is not log-concave.

Counterexample B: 3 x1 x2 + x1 x3 + x2 x3 is log-concave (Hessian inertia
(1,0,2)) but its pair values admit no two-coverage witness, and no monotone
submodular extension that is nonnegative on nonempty sets.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coverage2 import search_2cov_feasible
from .logconcave import (
    VERDICT_REFUTED,
    certify_clc_homogeneous,
    inertia,
    quadratic_log_concave,
)
from .polynomials import MultiaffinePolynomial, quadratic_hessian
from .setfn import (
    BudgetAdditive,
    SetFunctionTable,
    _monotone_witness,
    _submodular_witness,
    materialize,
)


def budget_additive_function() -> BudgetAdditive:
    return BudgetAdditive(
        weights=tuple(Fraction(w) for w in (1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 0, 0)),
        budget=Fraction(2),
    )


def triangle_quadratic() -> MultiaffinePolynomial:
    return MultiaffinePolynomial(
        3, {0b011: Fraction(3), 0b101: Fraction(1), 0b110: Fraction(1)}
    )


def triangle_table() -> SetFunctionTable:
    """The pair values of the triangle quadratic as a degree-2 table."""
    p = triangle_quadratic()
    return SetFunctionTable.from_entries(3, dict(p.coeffs))


@dataclass(frozen=True)
class CounterexampleOutcome:
    name: str
    ok: bool
    details: dict


def check_budget_additive() -> CounterexampleOutcome:
    f = materialize(budget_additive_function())
    monotone = _monotone_witness(f.n, f.values) is None
    submodular = _submodular_witness(f.n, f.values) is None
    report = certify_clc_homogeneous(f, 2)
    ok = (
        monotone
        and submodular
        and report.verdict == VERDICT_REFUTED
        and report.failure is not None
        and report.failure.reason == "inertia"
        and report.failure.n_pos == 2
        and report.failure.tau == ()
    )
    return CounterexampleOutcome(
        "budget-additive-degree-2",
        ok,
        {
            "monotone": monotone,
            "submodular": submodular,
            "verdict": report.verdict,
            "n_pos": report.failure.n_pos if report.failure else None,
        },
    )


def check_triangle() -> CounterexampleOutcome:
    p = triangle_quadratic()
    iner = inertia(quadratic_hessian(p))
    lc = quadratic_log_concave(p)
    search = search_2cov_feasible(triangle_table(), 2, ())
    ok = iner.as_tuple() == (1, 0, 2) and lc and not search.feasible
    return CounterexampleOutcome(
        "triangle-quadratic",
        ok,
        {
            "inertia": list(iner.as_tuple()),
            "log_concave": lc,
            "two_coverage_feasible": search.feasible,
            "phase1_optimum": str(search.infeasibility),
        },
    )


def run_all() -> list[CounterexampleOutcome]:
    return [check_budget_additive(), check_triangle()]
