"""Exact set-function tables and the representations that generate them.

Everything here is exact rational arithmetic (fractions.Fraction): all the
downstream certification logic consists of sign conditions, so no tolerances
belong in this layer. Tables materialize a function f: 2^[n] -> Q>=0 as a
dense array indexed by subset bitmask, with f(empty) = 0 as a standing
convention. Floats are rejected on input; parse decimal strings instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .bitsets import expand, labels_of, mask_of, submasks
from .errors import CapExceededError, InternalCheckError

HARD_CAP = 24

ZERO = Fraction(0)


def exact(value) -> Fraction:
    """Coerce to Fraction, rejecting floats (binary64 noise has no place here)."""
    if isinstance(value, float):
        raise TypeError(
            f"refusing float {value!r} in an exact context; pass int, Fraction or a string"
        )
    return Fraction(value)


@dataclass(frozen=True)
class SetFunctionTable:
    """Exhaustive values of f: 2^[n] -> Q>=0, indexed by subset bitmask."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("ground-set size must be nonnegative")
        if self.n > HARD_CAP:
            raise CapExceededError(f"n={self.n} exceeds the hard cap {HARD_CAP}")
        if len(self.values) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} values, got {len(self.values)}")
        if self.values[0] != 0:
            raise ValueError("f(empty set) must be 0")
        for v in self.values:
            if v < 0:
                raise ValueError(f"negative value {v}")

    @classmethod
    def from_entries(cls, n: int, entries: Mapping) -> "SetFunctionTable":
        """Build from {labels-or-mask: value}; unspecified subsets default to 0."""
        vals = [ZERO] * (1 << n)
        for key, v in entries.items():
            mask = key if isinstance(key, int) else mask_of(key)
            if mask >= 1 << n:
                raise ValueError(f"subset {key} out of range for n={n}")
            vals[mask] = exact(v)
        return cls(n, tuple(vals))

    def __getitem__(self, mask: int) -> Fraction:
        return self.values[mask]

    def value_of(self, labels: Iterable[int]) -> Fraction:
        return self.values[mask_of(labels)]

    def degree(self) -> int:
        """Largest |S| with f(S) != 0; 0 for the zero function."""
        best = 0
        for mask, v in enumerate(self.values):
            if v != 0:
                best = max(best, mask.bit_count())
        return best

    def support(self, size: int | None = None) -> tuple[int, ...]:
        """Masks with f > 0, optionally restricted to one cardinality."""
        return tuple(
            m
            for m, v in enumerate(self.values)
            if v != 0 and (size is None or m.bit_count() == size)
        )

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


@dataclass(frozen=True)
class CoverageInstance:
    """Weighted universe plus n subsets A_1..A_n; f(T) = w(union of A_i, i in T)."""

    universe: tuple[tuple[str, Fraction], ...]  # (element id, nonnegative weight)
    sets: tuple[frozenset[str], ...]

    def __post_init__(self):
        ids = [e for e, _ in self.universe]
        if len(set(ids)) != len(ids):
            raise ValueError("malformed instance: duplicate universe element ids")
        for e, w in self.universe:
            if w < 0:
                raise ValueError(f"malformed instance: negative weight for {e!r}")
        declared = set(ids)
        for i, a in enumerate(self.sets, start=1):
            missing = a - declared
            if missing:
                raise ValueError(
                    f"malformed instance: A_{i} references unknown elements {sorted(missing)}"
                )

    @classmethod
    def build(cls, universe, sets) -> "CoverageInstance":
        uni = tuple((str(e), exact(w)) for e, w in universe)
        return cls(uni, tuple(frozenset(str(x) for x in a) for a in sets))

    @property
    def n(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class CoverageWeights:
    """Weights x_T on nonempty subsets; f(S) = sum of x_T over T meeting S.

    In certificate mode all weights are nonnegative; diagnostic=True relaxes
    that so Moebius inversion can report negative weights as evidence.
    """

    n: int
    x: Mapping[int, Fraction]  # mask -> weight, zero entries absent
    diagnostic: bool = False

    def __post_init__(self):
        cleaned = {}
        for mask, v in self.x.items():
            if mask == 0:
                raise ValueError("x on the empty set is not part of the representation")
            if mask >= 1 << self.n:
                raise ValueError(f"subset mask {mask} out of range for n={self.n}")
            v = exact(v)
            if v < 0 and not self.diagnostic:
                raise ValueError(f"negative weight {v} on {labels_of(mask)}")
            if v != 0:
                cleaned[mask] = v
        object.__setattr__(self, "x", cleaned)

    def value(self, mask: int) -> Fraction:
        """f(S) = sum of x_T over T with T intersecting S."""
        return sum((v for t, v in self.x.items() if t & mask), ZERO)


@dataclass(frozen=True)
class LinearFunction:
    """f(T) = sum of per-element values over T."""

    n: int
    ell: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.ell) != self.n:
            raise ValueError("need one value per element")
        object.__setattr__(self, "ell", tuple(exact(v) for v in self.ell))
        for v in self.ell:
            if v < 0:
                raise ValueError(f"negative value {v}")

    def value(self, mask: int) -> Fraction:
        total = ZERO
        for i in range(self.n):
            if mask >> i & 1:
                total += self.ell[i]
        return total


@dataclass(frozen=True)
class BudgetAdditive:
    """f(S) = min(sum of weights over S, budget)."""

    weights: tuple[Fraction, ...]
    budget: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(exact(w) for w in self.weights))
        object.__setattr__(self, "budget", exact(self.budget))
        if any(w < 0 for w in self.weights) or self.budget < 0:
            raise ValueError("weights and budget must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.weights)


Representation = Union[CoverageInstance, LinearFunction, BudgetAdditive, CoverageWeights]


def materialize(rep, mode: str = "rank") -> SetFunctionTable:
    """Exhaustively evaluate a representation into a table.

    Accepts the four concrete representations above or a matroid oracle
    (mode selects its rank function or independence indicator).
    """
    from . import matroids  # local import: matroids builds tables through this module

    if isinstance(rep, matroids.Matroid):
        return matroids.to_setfunction(rep, mode)
    if isinstance(rep, CoverageInstance):
        return _materialize_coverage(rep)
    if isinstance(rep, LinearFunction):
        return _materialize_linear(rep)
    if isinstance(rep, BudgetAdditive):
        return _materialize_budget(rep)
    if isinstance(rep, CoverageWeights):
        return _materialize_weights(rep)
    raise TypeError(f"cannot materialize {type(rep).__name__}")


def _check_cap(n: int):
    if n > HARD_CAP:
        raise CapExceededError(f"n={n} exceeds the hard cap {HARD_CAP}")


def _materialize_coverage(inst: CoverageInstance) -> SetFunctionTable:
    n = inst.n
    _check_cap(n)
    pos = {e: i for i, (e, _) in enumerate(inst.universe)}
    weights = [w for _, w in inst.universe]
    setmask = [mask_of(pos[e] + 1 for e in a) for a in inst.sets]
    size = 1 << n
    unions = [0] * size
    for s in range(1, size):
        low = s & -s
        unions[s] = unions[s ^ low] | setmask[low.bit_length() - 1]
    weight_of: dict[int, Fraction] = {0: ZERO}
    vals = [ZERO] * size
    for s in range(1, size):
        u = unions[s]
        w = weight_of.get(u)
        if w is None:
            w = sum((weights[b] for b in range(len(weights)) if u >> b & 1), ZERO)
            weight_of[u] = w
        vals[s] = w
    return SetFunctionTable(n, tuple(vals))


def _materialize_linear(lin: LinearFunction) -> SetFunctionTable:
    n = lin.n
    _check_cap(n)
    size = 1 << n
    vals = [ZERO] * size
    for s in range(1, size):
        low = s & -s
        vals[s] = vals[s ^ low] + lin.ell[low.bit_length() - 1]
    return SetFunctionTable(n, tuple(vals))


def _materialize_budget(ba: BudgetAdditive) -> SetFunctionTable:
    n = ba.n
    _check_cap(n)
    size = 1 << n
    sums = [ZERO] * size
    for s in range(1, size):
        low = s & -s
        sums[s] = sums[s ^ low] + ba.weights[low.bit_length() - 1]
    return SetFunctionTable(n, tuple(min(v, ba.budget) for v in sums))


def _materialize_weights(cw: CoverageWeights) -> SetFunctionTable:
    n = cw.n
    _check_cap(n)
    size = 1 << n
    # f(S) = total - sum over T inside the complement of S  (zeta transform)
    below = [ZERO] * size
    for t, v in cw.x.items():
        below[t] = v
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit:
                below[m] += below[m ^ bit]
    total = below[size - 1]
    full = size - 1
    vals = [total - below[full ^ s] for s in range(size)]
    return SetFunctionTable(n, tuple(vals))


@dataclass(frozen=True)
class Contraction:
    """Result of contracting a table by tau.

    table holds g(S) = f(S + tau) on the surviving ground set (compacted to
    positions 1..m, original labels in `elements`); g(empty) would be f(tau),
    which tables cannot store, so it is carried separately as `base`. The
    table is *not* shifted by base; consumers read base explicitly.
    """

    base: Fraction
    table: SetFunctionTable
    elements: tuple[int, ...]


def contract(f: SetFunctionTable, tau: Iterable[int]) -> Contraction:
    tmask = mask_of(tau)
    if tmask >= 1 << f.n:
        raise ValueError(f"tau {labels_of(tmask)} not inside the ground set")
    kept = tuple(b for b in range(f.n) if not tmask >> b & 1)
    m = len(kept)
    vals = [ZERO] * (1 << m)
    for sub in range(1, 1 << m):
        vals[sub] = f.values[expand(sub, kept) | tmask]
    return Contraction(
        base=f.values[tmask],
        table=SetFunctionTable(m, tuple(vals)),
        elements=tuple(b + 1 for b in kept),
    )


def homogeneous_restrict(f: SetFunctionTable, d: int) -> SetFunctionTable:
    """Keep values on sets of size d, zero elsewhere."""
    if not 0 <= d <= f.n:
        raise ValueError(f"degree {d} out of range for n={f.n}")
    vals = tuple(
        v if m.bit_count() == d else ZERO for m, v in enumerate(f.values)
    )
    return SetFunctionTable(f.n, vals)


@dataclass(frozen=True)
class PredicateReport:
    monotone: bool
    submodular: bool
    log_submodular: bool
    almost_log_submodular: bool
    witnesses: Mapping[str, tuple]  # failed flag -> first violating witness


def predicates(f: SetFunctionTable) -> PredicateReport:
    """Check the four structural predicates, exhaustively and exactly.

    Log-submodularity is checked multiplicatively, f(S+i) f(T) >= f(T+i) f(S)
    for S inside T, so zero values need no special casing.
    """
    n = f.n
    # every inequality is homogeneous in f, so scale to integers once and let
    # the 3^n sweeps run on plain ints
    scale = 1
    for v in f.values:
        scale = scale * v.denominator // math.gcd(scale, v.denominator)
    vals = [int(v * scale) for v in f.values]
    witnesses: dict[str, tuple] = {}

    mono = _monotone_witness(n, vals)
    if mono:
        witnesses["monotone"] = mono
    sub = _submodular_witness(n, vals)
    if sub:
        witnesses["submodular"] = sub
    logsub = _log_submodular_witness(n, vals)
    if logsub:
        witnesses["log_submodular"] = logsub
    almost = _almost_witness(n, vals)
    if almost:
        witnesses["almost_log_submodular"] = almost

    return PredicateReport(
        monotone=mono is None,
        submodular=sub is None,
        log_submodular=logsub is None,
        almost_log_submodular=almost is None,
        witnesses=witnesses,
    )


def _monotone_witness(n, vals):
    full = (1 << n) - 1
    for s in range(full + 1):
        rest = full & ~s
        while rest:
            low = rest & -rest
            if vals[s] > vals[s | low]:
                return (labels_of(s), low.bit_length())
            rest ^= low
    return None


def _submodular_witness(n, vals):
    # local characterization: f(S+i) + f(S+j) >= f(S+i+j) + f(S)
    full = (1 << n) - 1
    for s in range(full + 1):
        out = [b for b in range(n) if not s >> b & 1]
        for a in range(len(out)):
            for b in range(a + 1, len(out)):
                i, j = 1 << out[a], 1 << out[b]
                if vals[s | i] + vals[s | j] < vals[s | i | j] + vals[s]:
                    return (labels_of(s), out[a] + 1, out[b] + 1)
    return None


def _log_submodular_witness(n, vals):
    # f(S+i) f(T) >= f(T+i) f(S) for all S inside T, i outside T
    full = (1 << n) - 1
    for t in range(full + 1):
        out = [b for b in range(n) if not t >> b & 1]
        for s in submasks(t):
            for b in out:
                i = 1 << b
                if vals[s | i] * vals[t] < vals[t | i] * vals[s]:
                    return (labels_of(s), labels_of(t), b + 1)
    return None


def _almost_witness(n, vals):
    # 2 f(S+i) f(S+j) >= f(S) f(S+i+j)
    full = (1 << n) - 1
    for s in range(full + 1):
        out = [b for b in range(n) if not s >> b & 1]
        for a in range(len(out)):
            for b in range(a + 1, len(out)):
                i, j = 1 << out[a], 1 << out[b]
                if 2 * vals[s | i] * vals[s | j] < vals[s] * vals[s | i | j]:
                    return (labels_of(s), out[a] + 1, out[b] + 1)
    return None


@dataclass(frozen=True)
class MobiusResult:
    weights: CoverageWeights  # diagnostic mode: negative entries allowed
    is_coverage: bool
    min_weight: Fraction


def mobius_coverage_weights(f: SetFunctionTable) -> MobiusResult:
    """Solve f(S) = sum over T meeting S of x_T for the unique x.

    Sets y(U) = f([n]) - f([n] \\ U), which equals the sum of x_T over T
    inside U, then inverts by the Moebius transform. The reconstruction
    identity is re-verified exactly before returning.
    """
    n = f.n
    size = 1 << n
    full = size - 1
    top = f.values[full]
    x = [top - f.values[full ^ u] for u in range(size)]
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit:
                x[m] -= x[m ^ bit]
    # independent re-check: zeta(x) must reproduce f through the defining sums
    z = x[:]
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit:
                z[m] += z[m ^ bit]
    for s in range(size):
        if z[full] - z[full ^ s] != f.values[s]:
            raise InternalCheckError(
                f"Moebius reconstruction failed at S={labels_of(s)}"
            )
    min_weight = min(x[1:]) if n else ZERO
    weights = CoverageWeights(
        n, {m: v for m in range(1, size) if (v := x[m]) != 0}, diagnostic=True
    )
    return MobiusResult(weights, min_weight >= 0, min_weight)


def combine(
    fs: Sequence[SetFunctionTable], coeffs: Sequence
) -> SetFunctionTable:
    """Pointwise nonnegative combination sum(a_i * f_i)."""
    if len(fs) != len(coeffs):
        raise ValueError("need one coefficient per table")
    if not fs:
        raise ValueError("need at least one table")
    n = fs[0].n
    for g in fs:
        if g.n != n:
            raise ValueError(f"dimension mismatch: n={g.n} vs n={n}")
    cs = [exact(c) for c in coeffs]
    for c in cs:
        if c < 0:
            raise ValueError(f"negative coefficient {c}")
    size = 1 << n
    vals = [ZERO] * size
    for g, c in zip(fs, cs):
        if c == 0:
            continue
        for m in range(size):
            vals[m] += c * g.values[m]
    return SetFunctionTable(n, tuple(vals))


def level_sequence(f: SetFunctionTable) -> tuple[Fraction, ...]:
    """c_i = sum of f over sets of size i, for i = 0..n."""
    out = [ZERO] * (f.n + 1)
    for m, v in enumerate(f.values):
        if v != 0:
            out[m.bit_count()] += v
    return tuple(out)
