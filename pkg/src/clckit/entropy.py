"""Joint-distribution entropies and the mutual-information decomposition.

Unlike the rest of the toolkit this module works in binary64: entropies are
transcendental, so identities are verified to 1e-9 instead of exactly. All
entropies are in bits (base 2); every verified identity is homogeneous in the
base, so the choice is cosmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .bitsets import labels_of, mask_of
from .errors import CapExceededError

IDENTITY_TOL = 1e-9
NEGATIVE_TOL = -1e-9


@dataclass(frozen=True)
class JointDistribution:
    """Finite joint pmf over n variables with the given alphabet sizes."""

    alphabets: tuple[int, ...]
    pmf: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        for outcome, p in self.pmf.items():
            if len(outcome) != len(self.alphabets):
                raise ValueError(f"outcome {outcome} has the wrong arity")
            for v, k in zip(outcome, self.alphabets):
                if not 0 <= v < k:
                    raise ValueError(f"outcome {outcome} leaves the alphabet")
            if p < 0:
                raise ValueError(f"negative probability {p} at {outcome}")
        total = math.fsum(self.pmf.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")

    @property
    def n(self) -> int:
        return len(self.alphabets)


class _Entropies:
    """Marginal entropies by mask, with memoized conditional MMI recursion."""

    def __init__(self, joint: JointDistribution):
        self.joint = joint
        self._h: dict[int, float] = {0: 0.0}
        self._mmi: dict[tuple[tuple[int, ...], int], float] = {}

    def h(self, mask: int) -> float:
        got = self._h.get(mask)
        if got is not None:
            return got
        marg: dict[tuple[int, ...], float] = {}
        idx = [b for b in range(self.joint.n) if mask >> b & 1]
        for outcome, p in self.joint.pmf.items():
            if p == 0.0:
                continue
            key = tuple(outcome[b] for b in idx)
            marg[key] = marg.get(key, 0.0) + p
        value = -math.fsum(p * math.log2(p) for p in marg.values() if p > 0.0)
        self._h[mask] = value
        return value

    def cond(self, smask: int, cmask: int) -> float:
        return self.h(smask | cmask) - self.h(cmask)

    def mmi(self, order: tuple[int, ...], cmask: int) -> float:
        if len(order) == 1:
            return self.cond(1 << (order[0] - 1), cmask)
        key = (order, cmask)
        got = self._mmi.get(key)
        if got is not None:
            return got
        head, last = order[:-1], order[-1]
        value = self.mmi(head, cmask) - self.mmi(head, cmask | 1 << (last - 1))
        self._mmi[key] = value
        return value


def cond_entropy(joint: JointDistribution, s: Iterable[int], c: Iterable[int] = ()) -> float:
    """H(Y_S | Y_C) in bits, with the 0 log 0 = 0 convention."""
    smask, cmask = mask_of(s), mask_of(c)
    if smask & cmask:
        raise ValueError("conditioned variables overlap the target set")
    return _Entropies(joint).cond(smask, cmask)


def mmi(joint: JointDistribution, order: Sequence[int], c: Iterable[int] = ()) -> float:
    """Multivariate mutual information I(Y_t1, ..., Y_tk | Y_C), recursively:

        I(X_1..X_k | Z) = I(X_1..X_{k-1} | Z) - I(X_1..X_{k-1} | X_k, Z)

    The result does not depend on the ordering (it can be negative for k >= 3).
    """
    order = tuple(order)
    if not order:
        raise ValueError("need at least one variable")
    cmask = mask_of(c)
    if mask_of(order) & cmask:
        raise ValueError("conditioned variables overlap the target set")
    return _Entropies(joint).mmi(order, cmask)


@dataclass(frozen=True)
class EntropyDecomposition:
    """f(S) = H(Y_S) and its (possibly signed) interaction weights.

    weights[T] = I(Y_T | Y_complement). The identity
    f(S) = sum over T meeting S of weights[T] holds mathematically; its
    largest numerical residual is reported, as is the smallest weight. A
    negative weight means the decomposition is not a nonnegative coverage
    witness for this distribution, and is flagged rather than hidden.
    """

    n: int
    values: tuple[float, ...]  # H(Y_S) by subset mask
    weights: Mapping[int, float]  # nonempty T mask -> bits
    max_identity_residual: float
    min_weight: float
    mobius_max_diff: float
    has_negative_weight: bool


def entropy_decomposition(joint: JointDistribution, cap: int = 8) -> EntropyDecomposition:
    n = joint.n
    if n > cap:
        raise CapExceededError(f"n={n} exceeds cap {cap}")
    calc = _Entropies(joint)
    size = 1 << n
    full = size - 1
    values = tuple(calc.h(m) for m in range(size))
    weights = {
        t: calc.mmi(labels_of(t), full ^ t) for t in range(1, size)
    }
    # identity residual via a float zeta transform over complements
    below = [0.0] * size
    for t, w in weights.items():
        below[t] = w
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit:
                below[m] += below[m ^ bit]
    total = below[full]
    residual = max(
        abs(values[s] - (total - below[full ^ s])) for s in range(size)
    )
    # uniqueness cross-check: the Moebius inversion of the entropy table must
    # reproduce the recursive weights
    mob = [values[full] - values[full ^ u] for u in range(size)]
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit:
                mob[m] -= mob[m ^ bit]
    mobius_diff = max(abs(weights[t] - mob[t]) for t in range(1, size)) if n else 0.0
    min_weight = min(weights.values()) if weights else 0.0
    return EntropyDecomposition(
        n=n,
        values=values,
        weights=weights,
        max_identity_residual=residual,
        min_weight=min_weight,
        mobius_max_diff=mobius_diff,
        has_negative_weight=min_weight < NEGATIVE_TOL,
    )
