"""Two-coverage and strongly-two-coverage certificates.

A certificate for a table f (ground positions 1..n) carries, per contraction
set tau, witnesses that pin down the contracted pair values:

  * two-coverage at degree d: for each |tau| = d-2, a support S inside the
    complement of tau, a coverage function g on S given by nonnegative
    weights, and a nonnegative linear function l with l({i}) <= g({i}), such
    that f(tau + {i,j}) = g({i,j}) - (l_i + l_j)/2 on pairs inside S and 0 on
    pairs leaving S. Indecomposability of every contracted derivative down to
    the quadratics is part of the definition and is checked directly from f.
    S is required to be exactly the set of elements that appear with tau in a
    nonzero size-d set (a larger zero-extended S would satisfy the equations
    literally, but verification pins the canonical choice).

  * strongly two-coverage: for each |tau| <= n-2, a coverage g on the whole
    complement of tau with f(tau + T) = g(T) + f(tau) for |T| in {1, 2}.

Synthesis verifies eagerly: the constructions encode proofs, so a synthesized
certificate that fails its own verification raises InternalCheckError.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .bitsets import compress, labels_of, mask_of, masks_of_size
from .errors import CapExceededError, InternalCheckError, MissingWitnessError
from .logconcave import is_indecomposable
from .matroids import Matroid, parallel_partition, to_setfunction
from .polynomials import derive, generating_poly
from .setfn import (
    CoverageInstance,
    CoverageWeights,
    LinearFunction,
    SetFunctionTable,
    ZERO,
    exact,
    homogeneous_restrict,
    materialize,
    mobius_coverage_weights,
)


@dataclass(frozen=True)
class TwoCoverageWitness:
    support: tuple[int, ...]  # S, ascending positions of the ground set
    g: CoverageWeights  # over positions 1..len(S), aligned with support
    ell: LinearFunction  # same indexing

    def __post_init__(self):
        if self.g.n != len(self.support) or self.ell.n != len(self.support):
            raise ValueError("witness pieces must live on the support")


@dataclass(frozen=True)
class TwoCoverageCertificate:
    n: int
    d: int
    witnesses: Mapping[tuple[int, ...], TwoCoverageWitness]  # key: sorted tau


@dataclass(frozen=True)
class StrongCertificate:
    n: int
    witnesses: Mapping[tuple[int, ...], CoverageWeights]  # g over sorted complement of tau


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    checks: int
    failure: str | None = None
    tau: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _pair_support(f: SetFunctionTable, tmask: int) -> tuple[dict[int, Fraction], set[int]]:
    """Pair values of the contraction and the elements they touch.

    Returns ({pair mask over original positions: f(tau + pair)}, support labels).
    """
    n = f.n
    outside = [b for b in range(n) if not tmask >> b & 1]
    pairs: dict[int, Fraction] = {}
    touched: set[int] = set()
    for a in range(len(outside)):
        for b in range(a + 1, len(outside)):
            pm = (1 << outside[a]) | (1 << outside[b])
            v = f.values[tmask | pm]
            pairs[pm] = v
            if v != 0:
                touched.add(outside[a] + 1)
                touched.add(outside[b] + 1)
    return pairs, touched


def verify_2cov(
    f: SetFunctionTable, d: int, cert: TwoCoverageCertificate
) -> CertificateCheck:
    """Check both certificate conditions against f, exactly."""
    n = f.n
    if d < 2:
        raise ValueError("two-coverage needs d >= 2")
    if cert.n != n or cert.d != d:
        raise ValueError("certificate dimensions do not match the table")
    p = generating_poly(homogeneous_restrict(f, d))
    checks = 0
    for size in range(d - 1):
        for tmask in masks_of_size(n, size):
            tau = labels_of(tmask)
            checks += 1
            if not is_indecomposable(derive(p, tau)):
                return CertificateCheck(
                    False, checks, "contracted restriction is decomposable", tau
                )
    for tmask in masks_of_size(n, d - 2):
        tau = labels_of(tmask)
        pairs, touched = _pair_support(f, tmask)
        witness = cert.witnesses.get(tau)
        if witness is None:
            if touched:
                raise MissingWitnessError(tau)
            checks += 1
            continue
        support = witness.support
        if tuple(sorted(touched)) != support:
            return CertificateCheck(
                False,
                checks + 1,
                f"support mismatch: expected {tuple(sorted(touched))}, witness has {support}",
                tau,
            )
        spos = {lab: i for i, lab in enumerate(support)}
        for i, lab in enumerate(support):
            checks += 1
            if witness.ell.ell[i] > witness.g.value(1 << i):
                return CertificateCheck(
                    False, checks, f"l({lab}) exceeds g({lab})", tau
                )
        for pm, value in pairs.items():
            la, lb = labels_of(pm)
            checks += 1
            if la in spos and lb in spos:
                gm = (1 << spos[la]) | (1 << spos[lb])
                want = witness.g.value(gm) - Fraction(
                    witness.ell.ell[spos[la]] + witness.ell.ell[spos[lb]], 2
                )
            else:
                want = ZERO
            if value != want:
                return CertificateCheck(
                    False,
                    checks,
                    f"pair equation failed on {{{la},{lb}}}: f_tau={value}, certificate gives {want}",
                    tau,
                )
    return CertificateCheck(True, checks)


def verify_strong2cov(
    f: SetFunctionTable, cert: StrongCertificate
) -> CertificateCheck:
    """Check f(tau + T) = g_tau(T) + f(tau) on all |T| in {1, 2}, all |tau| <= n-2."""
    n = f.n
    if cert.n != n:
        raise ValueError("certificate dimensions do not match the table")
    checks = 0
    for size in range(n - 1):
        for tmask in masks_of_size(n, size):
            tau = labels_of(tmask)
            g = cert.witnesses.get(tau)
            if g is None:
                raise MissingWitnessError(tau)
            outside = [b for b in range(n) if not tmask >> b & 1]
            if g.n != len(outside):
                raise ValueError(f"witness at tau={tau} has the wrong ground size")
            base = f.values[tmask]
            for ia, a in enumerate(outside):
                checks += 1
                if f.values[tmask | (1 << a)] != g.value(1 << ia) + base:
                    return CertificateCheck(
                        False, checks, f"singleton equation failed at {a + 1}", tau
                    )
                for ib in range(ia + 1, len(outside)):
                    b = outside[ib]
                    checks += 1
                    gm = (1 << ia) | (1 << ib)
                    if f.values[tmask | (1 << a) | (1 << b)] != g.value(gm) + base:
                        return CertificateCheck(
                            False,
                            checks,
                            f"pair equation failed at {{{a + 1},{b + 1}}}",
                            tau,
                        )
    return CertificateCheck(True, checks)


def _class_weights(partition, positions: Sequence[int]) -> CoverageWeights:
    """Unit weight on each full parallel class, indexed against `positions`."""
    pos_of = {lab: i for i, lab in enumerate(positions)}
    x = {}
    for cls in partition.classes:
        x[mask_of(pos_of[lab] + 1 for lab in cls)] = Fraction(1)
    return CoverageWeights(len(positions), x)


def synth_strong_matroid(m: Matroid, cap: int = 14) -> StrongCertificate:
    """Strong certificate for a matroid rank table from parallel classes.

    After contracting tau, elements fall into loops and parallel classes; unit
    weight on each class realizes the contracted rank on singletons and pairs.
    """
    els = tuple(sorted(m.elements))
    n = len(els)
    if n > cap:
        raise CapExceededError(f"{n} elements exceed cap {cap}")
    witnesses: dict[tuple[int, ...], CoverageWeights] = {}
    for size in range(n - 1):
        for tmask in masks_of_size(n, size):
            tau_labels = labels_of(tmask)  # positions 1..n
            tau_els = frozenset(els[t - 1] for t in tau_labels)
            part = parallel_partition(m.contract(tau_els))
            remaining = [p + 1 for p in range(n) if not tmask >> p & 1]
            # map element labels back to table positions before indexing
            el_to_pos = {e: i + 1 for i, e in enumerate(els)}
            part_positions = type(part)(
                loops=tuple(sorted(el_to_pos[e] for e in part.loops)),
                classes=tuple(
                    tuple(sorted(el_to_pos[e] for e in cls)) for cls in part.classes
                ),
            )
            witnesses[tau_labels] = _class_weights(part_positions, remaining)
    cert = StrongCertificate(n, witnesses)
    table = to_setfunction(m, "rank")
    check = verify_strong2cov(table, cert)
    if not check:
        raise InternalCheckError(
            f"synthesized strong certificate failed verification: {check.failure} at tau={check.tau}"
        )
    return cert


def synth_2cov_indicator(m: Matroid, d: int, cap: int = 14) -> TwoCoverageCertificate:
    """Two-coverage certificate for the independence indicator of a matroid.

    For each independent tau of size d-2, the support is the non-loops of the
    contraction, g puts unit weight on each parallel class, and l is
    identically one; dependent tau get the empty witness since every
    contracted pair value vanishes.
    """
    els = tuple(sorted(m.elements))
    n = len(els)
    if n > cap:
        raise CapExceededError(f"{n} elements exceed cap {cap}")
    if not 2 <= d <= m.full_rank():
        raise ValueError(f"d={d} exceeds the matroid rank {m.full_rank()}")
    el_to_pos = {e: i + 1 for i, e in enumerate(els)}
    witnesses: dict[tuple[int, ...], TwoCoverageWitness] = {}
    for tmask in masks_of_size(n, d - 2):
        tau_labels = labels_of(tmask)
        tau_els = frozenset(els[t - 1] for t in tau_labels)
        if m._rank(tau_els) < len(tau_els):
            witnesses[tau_labels] = TwoCoverageWitness(
                (), CoverageWeights(0, {}), LinearFunction(0, ())
            )
            continue
        part = parallel_partition(m.contract(tau_els))
        support = tuple(
            sorted(el_to_pos[e] for cls in part.classes for e in cls)
        )
        spos = {lab: i for i, lab in enumerate(support)}
        x = {}
        for cls in part.classes:
            x[mask_of(spos[el_to_pos[e]] + 1 for e in cls)] = Fraction(1)
        witnesses[tau_labels] = TwoCoverageWitness(
            support,
            CoverageWeights(len(support), x),
            LinearFunction(len(support), (Fraction(1),) * len(support)),
        )
    cert = TwoCoverageCertificate(n, d, witnesses)
    table = to_setfunction(m, "indicator")
    check = verify_2cov(table, d, cert)
    if not check:
        raise InternalCheckError(
            f"synthesized indicator certificate failed verification: {check.failure} at tau={check.tau}"
        )
    return cert


def synth_strong_from_parts(parts, table: SetFunctionTable | None = None) -> StrongCertificate:
    """Combine strong certificates with nonnegative coefficients, or build one
    directly from a coverage instance (sets shrink by the tau-covered part).

    All certificate equations are linear in (f, g), so a combination of
    verified certificates is valid for the combined function by linearity;
    pass `table` to re-verify against an explicit combined table anyway.
    A coverage instance is always verified against its own materialization.
    """
    if isinstance(parts, CoverageInstance):
        return _synth_strong_coverage(parts)
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one certificate")
    n = parts[0][0].n
    combined: dict[tuple[int, ...], dict[int, Fraction]] = {}
    for cert, coeff in parts:
        coeff = exact(coeff)
        if coeff < 0:
            raise ValueError("coefficients must be nonnegative")
        if cert.n != n:
            raise ValueError("dimension mismatch between certificates")
        for tau, g in cert.witnesses.items():
            bucket = combined.setdefault(tau, {})
            for t, v in g.x.items():
                bucket[t] = bucket.get(t, ZERO) + coeff * v
    witnesses = {}
    for size in range(n - 1):
        for tmask in masks_of_size(n, size):
            tau = labels_of(tmask)
            m = n - size
            witnesses[tau] = CoverageWeights(m, combined.get(tau, {}))
    cert = StrongCertificate(n, witnesses)
    if table is not None:
        check = verify_strong2cov(table, cert)
        if not check:
            raise InternalCheckError(
                f"combined certificate failed verification: {check.failure} at tau={check.tau}"
            )
    return cert


def _synth_strong_coverage(inst: CoverageInstance) -> StrongCertificate:
    n = inst.n
    witnesses: dict[tuple[int, ...], CoverageWeights] = {}
    for size in range(n - 1):
        for tmask in masks_of_size(n, size):
            tau = labels_of(tmask)
            covered = frozenset().union(
                *(inst.sets[t - 1] for t in tau)
            ) if tau else frozenset()
            rest = [i for i in range(1, n + 1) if not tmask >> (i - 1) & 1]
            sub = CoverageInstance(
                inst.universe, tuple(inst.sets[i - 1] - covered for i in rest)
            )
            mob = mobius_coverage_weights(materialize(sub))
            if not mob.is_coverage:
                raise InternalCheckError("coverage instance produced negative weights")
            witnesses[tau] = CoverageWeights(len(rest), dict(mob.weights.x))
    cert = StrongCertificate(n, witnesses)
    check = verify_strong2cov(materialize(inst), cert)
    if not check:
        raise InternalCheckError(
            f"coverage-built certificate failed verification: {check.failure} at tau={check.tau}"
        )
    return cert


@dataclass(frozen=True)
class SearchResult:
    feasible: bool
    support: tuple[int, ...]
    g: CoverageWeights | None
    ell: LinearFunction | None
    infeasibility: Fraction  # phase-1 optimum; positive certifies infeasibility

    def __bool__(self) -> bool:
        return self.feasible


def search_2cov_feasible(
    f: SetFunctionTable, d: int, tau, cap: int = 10
) -> SearchResult:
    """Decide whether a (g, l) witness exists for this tau, by exact LP.

    Variables are all 2^|S| - 1 coverage weights plus the l values; the pair
    equations are equalities and l({i}) <= g({i}) gets a slack. Weights on
    sets of size >= 3 matter (they feed several pair overlaps at once), so the
    search is complete and an infeasible verdict is a proof.
    """
    from .simplex import phase1

    tmask = mask_of(tau)
    if tmask.bit_length() > f.n:
        raise ValueError("tau outside the ground set")
    if tmask.bit_count() != d - 2:
        raise ValueError(f"tau must have size d-2={d - 2}")
    pairs, touched = _pair_support(f, tmask)
    support = tuple(sorted(touched))
    m = len(support)
    if m > cap:
        raise CapExceededError(f"|S|={m} exceeds cap {cap}")
    if m == 0:
        return SearchResult(True, (), CoverageWeights(0, {}), LinearFunction(0, ()), ZERO)
    spos = {lab: i for i, lab in enumerate(support)}
    num_x = (1 << m) - 1  # x_T for T = 1..2^m-1
    num_cols = num_x + m + m  # + l_i + slack_i
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    half = Fraction(1, 2)
    for pm, value in pairs.items():
        la, lb = labels_of(pm)
        if la not in spos or lb not in spos:
            continue  # pair values off the support are zero by construction
        gm = (1 << spos[la]) | (1 << spos[lb])
        row = [ZERO] * num_cols
        for t in range(1, 1 << m):
            if t & gm:
                row[t - 1] = Fraction(1)
        row[num_x + spos[la]] = -half
        row[num_x + spos[lb]] = -half
        rows.append(row)
        rhs.append(value)
    for i in range(m):
        row = [ZERO] * num_cols
        for t in range(1, 1 << m):
            if t >> i & 1:
                row[t - 1] = Fraction(1)
        row[num_x + i] = Fraction(-1)
        row[num_x + m + i] = Fraction(-1)
        rows.append(row)
        rhs.append(ZERO)
    result = phase1(rows, rhs)
    if not result:
        return SearchResult(False, support, None, None, result.infeasibility)
    point = result.point
    g = CoverageWeights(
        m, {t: point[t - 1] for t in range(1, 1 << m) if point[t - 1] != 0}
    )
    ell = LinearFunction(m, tuple(point[num_x + i] for i in range(m)))
    return SearchResult(True, support, g, ell, ZERO)
