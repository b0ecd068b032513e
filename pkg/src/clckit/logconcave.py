"""Exact log-concavity machinery.

Every sign decision is made by exact congruence diagonalization of a rational
symmetric matrix (Sylvester's law of inertia keeps the sign counts invariant
under congruence), never by a floating eigensolver. Floating point appears
only in test oracles that cross-check these routines.

The two certification drivers apply the standard sufficient conditions for
complete log-concavity of a homogeneous multiaffine polynomial: every mixed
derivative down to the quadratics must be indecomposable, and every quadratic
derivative must have a Hessian with at most one positive eigenvalue. A
"certified" verdict means the sufficient conditions hold; "conditions-fail"
does not prove the opposite, except in the plain quadratic case where the
Hessian criterion is an exact characterization and the verdict upgrades to
"refuted".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .bitsets import labels_of, mask_of, masks_of_size
from .errors import CapExceededError, InternalCheckError
from .polynomials import (
    HomogenizedPolynomial,
    MultiaffinePolynomial,
    Polynomial,
    derive,
    generating_poly,
    homogenize,
    quadratic_hessian,
    scale,
)
from .setfn import (
    CoverageInstance,
    SetFunctionTable,
    ZERO,
    exact,
    homogeneous_restrict,
    materialize,
    mobius_coverage_weights,
)

VERDICT_CERTIFIED = "certified"
VERDICT_CONDITIONS_FAIL = "conditions-fail"
VERDICT_REFUTED = "refuted"
VERDICT_VACUOUS = "vacuous"


@dataclass(frozen=True)
class Inertia:
    """Eigenvalue sign counts (n_pos, n_zero, n_neg) of a symmetric matrix."""

    n_pos: int
    n_zero: int
    n_neg: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_pos, self.n_zero, self.n_neg)


def inertia(matrix: Sequence[Sequence]) -> Inertia:
    """Exact inertia by symmetric congruence diagonalization.

    A zero pivot with a nonzero off-diagonal entry is repaired by the
    congruence "add row/column j to row/column k", which turns the 2x2
    hyperbolic block into a regular pivot pair contributing (1, 0, 1).
    """
    m = len(matrix)
    a = [[exact(x) for x in row] for row in matrix]
    for row in a:
        if len(row) != m:
            raise ValueError("matrix must be square")
    for i in range(m):
        for j in range(i + 1, m):
            if a[i][j] != a[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i},{j})")

    pos = neg = zero = 0
    for k in range(m):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, m) if a[i][i] != 0), None)
            if swap is not None:
                a[k], a[swap] = a[swap], a[k]
                for row in a:
                    row[k], row[swap] = row[swap], row[k]
            else:
                off = next((i for i in range(k + 1, m) if a[i][k] != 0), None)
                if off is None:
                    zero += 1
                    continue
                # all trailing diagonal entries are zero here, so the new
                # pivot is exactly 2*a[off][k] != 0
                for t in range(m):
                    a[k][t] += a[off][t]
                for t in range(m):
                    a[t][k] += a[t][off]
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rowk = a[k]
        for i in range(k + 1, m):
            aik = a[i][k]
            if aik:
                f = aik / d
                rowi = a[i]
                for j in range(k + 1, m):
                    if rowk[j]:
                        rowi[j] -= f * rowk[j]
    return Inertia(pos, zero, neg)


def congruence(p: Sequence[Sequence], h: Sequence[Sequence]) -> list[list[Fraction]]:
    """P H P^T, exact; the inertia of the result equals that of H for invertible P."""
    rows = len(p)
    inner = len(p[0])
    ph = [[sum((exact(p[i][t]) * exact(h[t][j]) for t in range(inner)), ZERO) for j in range(inner)] for i in range(rows)]
    return [
        [sum((ph[i][t] * exact(p[j][t]) for t in range(inner)), ZERO) for j in range(rows)]
        for i in range(rows)
    ]


@dataclass(frozen=True)
class IndecompResult:
    indecomposable: bool
    components: tuple[tuple[int, ...], ...]  # variable groups when decomposable (0 = y)

    def __bool__(self) -> bool:
        return self.indecomposable


def _monomial_vars(p: Polynomial) -> list[tuple[int, ...]]:
    monos: list[tuple[int, ...]] = []
    degrees = set()
    if isinstance(p, MultiaffinePolynomial):
        for m in p.coeffs:
            if m == 0:
                raise ValueError("constant term present")
            monos.append(labels_of(m))
            degrees.add(m.bit_count())
    else:
        for ypow, m in p.coeffs:
            if ypow == 0 and m == 0:
                raise ValueError("constant term present")
            vars_ = ((0,) if ypow else ()) + labels_of(m)
            monos.append(vars_)
            degrees.add(ypow + m.bit_count())
    if len(degrees) > 1:
        raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degrees)}")
    return monos


def is_indecomposable(p: Polynomial) -> IndecompResult:
    """Connectivity of the variable co-occurrence graph; zero counts as
    indecomposable by convention."""
    monos = _monomial_vars(p)
    if not monos:
        return IndecompResult(True, ())
    parent: dict[int, int] = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for vars_ in monos:
        for v in vars_:
            parent.setdefault(v, v)
        for a, b in zip(vars_, vars_[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    if len(groups) <= 1:
        return IndecompResult(True, ())
    comps = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=min))
    return IndecompResult(False, comps)


def quadratic_log_concave(p: Polynomial) -> bool:
    """Exact characterization for 2-homogeneous polynomials with nonnegative
    coefficients: log-concave iff the (constant) Hessian has at most one
    positive eigenvalue. The zero polynomial counts as log-concave."""
    if not p.coeffs:
        return True
    for c in p.coeffs.values():
        if c < 0:
            raise ValueError("coefficients must be nonnegative")
    return inertia(quadratic_hessian(p)).n_pos <= 1


@dataclass(frozen=True)
class CertFailure:
    tau: tuple[int, ...]
    k: int | None  # y-derivative order; None for the homogeneous-part driver
    reason: str  # "decomposable" | "inertia"
    n_pos: int | None = None
    components: tuple[tuple[int, ...], ...] | None = None


@dataclass(frozen=True)
class CertificationReport:
    verdict: str
    checks: int
    failure: CertFailure | None = None

    def __bool__(self) -> bool:
        return self.verdict in (VERDICT_CERTIFIED, VERDICT_VACUOUS)


def certify_clc_homogeneous(
    f: SetFunctionTable, d: int, cap: int = 14
) -> CertificationReport:
    """Run the sufficient conditions on the degree-d restriction of f.

    Derivative multi-indices reduce to subsets because the generating
    polynomial is multiaffine. Contraction sets are swept by increasing size
    in lexicographic order and the first failure is reported. For d = 2 the
    single quadratic cell is an exact characterization, so an inertia failure
    there refutes log-concavity outright.
    """
    n = f.n
    if n > cap:
        raise CapExceededError(f"n={n} exceeds cap {cap}")
    if not 2 <= d <= n:
        raise ValueError(f"need 2 <= d <= n, got d={d}, n={n}")
    p = generating_poly(homogeneous_restrict(f, d))
    if p.is_zero():
        return CertificationReport(VERDICT_VACUOUS, 0)
    checks = 0
    for size in range(d - 1):
        for tmask in masks_of_size(n, size):
            tau = labels_of(tmask)
            q = derive(p, tau)
            checks += 1
            ind = is_indecomposable(q)
            if not ind:
                if d == 2:
                    # quadratic case: decide by the exact Hessian criterion
                    iner = inertia(quadratic_hessian(q))
                    checks += 1
                    if iner.n_pos > 1:
                        return CertificationReport(
                            VERDICT_REFUTED,
                            checks,
                            CertFailure(tau, None, "inertia", n_pos=iner.n_pos),
                        )
                return CertificationReport(
                    VERDICT_CONDITIONS_FAIL,
                    checks,
                    CertFailure(tau, None, "decomposable", components=ind.components),
                )
            if size == d - 2 and not q.is_zero():
                iner = inertia(quadratic_hessian(q))
                checks += 1
                if iner.n_pos > 1:
                    verdict = VERDICT_REFUTED if d == 2 else VERDICT_CONDITIONS_FAIL
                    return CertificationReport(
                        verdict,
                        checks,
                        CertFailure(tau, None, "inertia", n_pos=iner.n_pos),
                    )
    return CertificationReport(VERDICT_CERTIFIED, checks)


def certify_clc_homogenization(
    f: SetFunctionTable, cap: int = 10
) -> CertificationReport:
    """Run the sufficient conditions on the homogenization q_f of degree n+1.

    Cells are the mixed derivatives d^tau d_y^k q_f with k + |tau| <= n - 1;
    the cells with k + |tau| = n - 1 are quadratic and get the Hessian check
    after exact division by (n-1-|tau|)! (a positive constant, kept so the
    matrices take their conventional normalized form).
    """
    n = f.n
    if n > cap:
        raise CapExceededError(f"n={n} exceeds cap {cap}")
    q = homogenize(f)
    if q.is_zero():
        return CertificationReport(VERDICT_VACUOUS, 0)
    checks = 0
    for size in range(n):
        for tmask in masks_of_size(n, size):
            tau = labels_of(tmask)
            base = derive(q, tau)
            for k in range(n - size):
                qd = derive(base, (), k)
                checks += 1
                ind = is_indecomposable(qd)
                if not ind:
                    return CertificationReport(
                        VERDICT_CONDITIONS_FAIL,
                        checks,
                        CertFailure(tau, k, "decomposable", components=ind.components),
                    )
                if k == n - 1 - size and not qd.is_zero():
                    quad = scale(qd, Fraction(1, math.factorial(n - 1 - size)))
                    iner = inertia(quadratic_hessian(quad))
                    checks += 1
                    if iner.n_pos > 1:
                        return CertificationReport(
                            VERDICT_CONDITIONS_FAIL,
                            checks,
                            CertFailure(tau, k, "inertia", n_pos=iner.n_pos),
                        )
    return CertificationReport(VERDICT_CERTIFIED, checks)


def two_by_two_log_concave(a, b, c, d) -> bool:
    """Log-concavity of a + b y + c z + d y z with nonnegative coefficients
    reduces to the single inequality 2bc >= ad."""
    a, b, c, d = exact(a), exact(b), exact(c), exact(d)
    if min(a, b, c, d) < 0:
        raise ValueError("coefficients must be nonnegative")
    return 2 * b * c >= a * d


@dataclass(frozen=True)
class UlcResult:
    holds: bool
    failing_k: int | None

    def __bool__(self) -> bool:
        return self.holds


def ulc_check(sequence: Sequence) -> UlcResult:
    """Ultra-log-concavity of c_0..c_n against the binomials C(n+1, k):

        (c_k / C(n+1,k))^2 >= (c_{k-1} / C(n+1,k-1)) (c_{k+1} / C(n+1,k+1))

    for 1 < k < n, exactly; vacuously true when n <= 2."""
    c = [exact(v) for v in sequence]
    if any(v < 0 for v in c):
        raise ValueError("sequence must be nonnegative")
    n = len(c) - 1
    for k in range(2, n):
        lhs = (c[k] / math.comb(n + 1, k)) ** 2
        rhs = (c[k - 1] / math.comb(n + 1, k - 1)) * (c[k + 1] / math.comb(n + 1, k + 1))
        if lhs < rhs:
            return UlcResult(False, k)
    return UlcResult(True, None)


@dataclass(frozen=True)
class MainPSDWitness:
    """Exact witness that R := (DJ + JD) - Hess(p_{g^(2)}) dominates D.

    The decomposition R = sum_T x_T B_T + D (with B_T the all-ones block on
    T) is verified entrywise, and the inertia of R - D has no negative part.
    """

    m: int
    diag: tuple[Fraction, ...]
    r_matrix: tuple[tuple[Fraction, ...], ...]
    weights: Mapping[int, Fraction]
    r_minus_d_inertia: Inertia


def mainpsd_witness(instance: CoverageInstance, cap: int = 12) -> MainPSDWitness:
    m = instance.n
    if m > cap:
        raise CapExceededError(f"m={m} exceeds cap {cap}")
    table = materialize(instance)
    g1 = [table.values[1 << i] for i in range(m)]
    r = [[ZERO] * m for _ in range(m)]
    for i in range(m):
        r[i][i] = 2 * g1[i]
        for j in range(i + 1, m):
            pair = table.values[(1 << i) | (1 << j)]
            r[i][j] = r[j][i] = g1[i] + g1[j] - pair
    mob = mobius_coverage_weights(table)
    if not mob.is_coverage:
        raise InternalCheckError(
            f"coverage instance produced a negative weight {mob.min_weight}"
        )
    bsum = [[ZERO] * m for _ in range(m)]
    for t, x in mob.weights.x.items():
        members = [b for b in range(m) if t >> b & 1]
        for a in members:
            bsum[a][a] += x
            for b in members:
                if b > a:
                    bsum[a][b] += x
                    bsum[b][a] += x
    for i in range(m):
        for j in range(m):
            expected = bsum[i][j] + (g1[i] if i == j else ZERO)
            if r[i][j] != expected:
                raise InternalCheckError(
                    f"witness identity failed at ({i + 1},{j + 1}): {r[i][j]} != {expected}"
                )
    r_minus_d = [
        [r[i][j] - (g1[i] if i == j else ZERO) for j in range(m)] for i in range(m)
    ]
    iner = inertia(r_minus_d)
    if iner.n_neg != 0:
        raise InternalCheckError(f"R - D came out indefinite: {iner}")
    return MainPSDWitness(
        m=m,
        diag=tuple(g1),
        r_matrix=tuple(tuple(row) for row in r),
        weights=mob.weights.x,
        r_minus_d_inertia=iner,
    )
