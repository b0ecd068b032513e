"""Exact rational linear feasibility via phase-1 simplex with Bland's rule.

Bland's pivoting (smallest eligible entering index; leaving row whose basic
variable has the smallest index among the minimum ratios) guarantees
termination, so feasibility and infeasibility verdicts are both certificates:
the phase-1 optimum is zero exactly when the system A x = b, x >= 0 has a
solution.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InternalCheckError
from .setfn import ZERO, exact


@dataclass(frozen=True)
class LPFeasibility:
    feasible: bool
    point: tuple[Fraction, ...] | None  # values of the original variables
    infeasibility: Fraction  # phase-1 optimum; 0 iff feasible

    def __bool__(self) -> bool:
        return self.feasible


def phase1(a: Sequence[Sequence], b: Sequence) -> LPFeasibility:
    """Decide whether A x = b has a nonnegative solution, exactly."""
    m = len(a)
    if m == 0:
        return LPFeasibility(True, (), ZERO)
    n = len(a[0])
    rows = []
    for i in range(m):
        if len(a[i]) != n:
            raise ValueError("ragged constraint matrix")
        row = [exact(v) for v in a[i]]
        rhs = exact(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        rows.append(row + [rhs])

    total = n + m  # artificial variable n+i sits on row i
    tableau = []
    for i in range(m):
        art = [ZERO] * m
        art[i] = Fraction(1)
        tableau.append(rows[i][:n] + art + [rows[i][n]])
    basis = list(range(n, total))

    # objective row for min(sum of artificials), priced out over the basis:
    # z[j] = c_j - sum_i c_basis(i) * T[i][j]
    z = [ZERO] * (total + 1)
    for j in range(total + 1):
        col = sum((tableau[i][j] for i in range(m)), ZERO)
        cost = Fraction(1) if j >= n and j < total else ZERO
        z[j] = cost - col
    z[total] = -sum((tableau[i][total] for i in range(m)), ZERO)

    while True:
        enter = next((j for j in range(total) if z[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][total] / coef
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave is None:
            raise InternalCheckError("phase-1 objective is bounded; no ratio row found")
        _pivot(tableau, z, leave, enter, total)
        basis[leave] = enter

    objective = -z[total]
    if objective > 0:
        return LPFeasibility(False, None, objective)
    if objective < 0:
        raise InternalCheckError("phase-1 optimum below zero")
    point = [ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            point[var] = tableau[i][total]
    return LPFeasibility(True, tuple(point), ZERO)


def _pivot(tableau, z, row, col, rhs):
    pivot = tableau[row][col]
    prow = tableau[row]
    inv = 1 / pivot
    for j in range(rhs + 1):
        if prow[j]:
            prow[j] *= inv
    for other in tableau:
        if other is prow:
            continue
        factor = other[col]
        if factor:
            for j in range(rhs + 1):
                if prow[j]:
                    other[j] -= factor * prow[j]
    factor = z[col]
    if factor:
        for j in range(rhs + 1):
            if prow[j]:
                z[j] -= factor * prow[j]
