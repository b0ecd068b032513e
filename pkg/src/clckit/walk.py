"""Down-up walk over the size-d support of a set function.

One step from S drops a uniformly random element i, then moves to
R + {j} (j outside R = S - {i}, including j = i) with probability
proportional to f(R + {j}). Re-adding i always has positive weight, so the
chain never leaves the support. The stationary distribution is f / sum(f)
and detailed balance holds exactly; transition_matrix re-verifies both
rather than assuming them.

Randomness comes from numpy's Philox4x64-10 counter-based generator, scheme
"philox4x64-10/v1": the key is the user seed and draws are raw bytes reduced
by rejection sampling, so trajectories are reproducible across platforms and
the exact rational step probabilities are sampled without float bias.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .bitsets import labels_of
from .errors import CapExceededError, InternalCheckError
from .setfn import SetFunctionTable, ZERO, exact

RNG_SCHEME = "philox4x64-10/v1"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def _uniform_below(rng: np.random.Generator, bound: int) -> int:
    """Exact uniform integer in [0, bound) via rejection on raw bytes."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    if bound == 1:
        return 0
    bits = (bound - 1).bit_length()
    nbytes = (bits + 7) // 8
    mask = (1 << bits) - 1
    while True:
        r = int.from_bytes(rng.bytes(nbytes), "little") & mask
        if r < bound:
            return r


@dataclass(frozen=True)
class WalkInstance:
    n: int
    d: int
    support: tuple[int, ...]  # size-d masks with f > 0, ascending
    weights: tuple[Fraction, ...]  # f values aligned with support
    total: Fraction
    index: Mapping[int, int] = field(repr=False)

    def mu(self, mask: int) -> Fraction:
        pos = self.index.get(mask)
        return self.weights[pos] / self.total if pos is not None else ZERO

    def weight(self, mask: int) -> Fraction:
        pos = self.index.get(mask)
        return self.weights[pos] if pos is not None else ZERO


def walk_instance(f: SetFunctionTable, d: int) -> WalkInstance:
    if not 1 <= d <= f.n:
        raise ValueError(f"need 1 <= d <= n, got d={d}")
    support = f.support(size=d)
    if not support:
        raise ValueError(f"f has no nonzero sets of size {d}")
    weights = tuple(f.values[m] for m in support)
    return WalkInstance(
        n=f.n,
        d=d,
        support=support,
        weights=weights,
        total=sum(weights, ZERO),
        index={m: i for i, m in enumerate(support)},
    )


def _candidates(w: WalkInstance, base: int) -> list[tuple[int, Fraction]]:
    out = []
    for j in range(w.n):
        if not base >> j & 1:
            t = base | (1 << j)
            weight = w.weight(t)
            if weight != 0:
                out.append((t, weight))
    return out


def step(w: WalkInstance, state: int, rng: np.random.Generator) -> int:
    """One down-up transition; deterministic given the seeded rng stream."""
    if state not in w.index:
        raise ValueError(f"state {labels_of(state)} is not in the support")
    members = labels_of(state)
    drop = members[_uniform_below(rng, w.d)]
    base = state & ~(1 << (drop - 1))
    cands = _candidates(w, base)
    if not cands:
        raise InternalCheckError("no candidate after dropping; support corrupted")
    denom = 1
    for _, weight in cands:
        denom = denom * weight.denominator // math.gcd(denom, weight.denominator)
    scaled = [int(weight * denom) for _, weight in cands]
    r = _uniform_below(rng, sum(scaled))
    acc = 0
    for (t, _), s in zip(cands, scaled):
        acc += s
        if r < acc:
            return t
    raise InternalCheckError("sampling fell off the cumulative weights")


@dataclass(frozen=True)
class TransitionMatrix:
    states: tuple[int, ...]
    rows: tuple[tuple[Fraction, ...], ...]


def transition_matrix(w: WalkInstance, cap: int = 5000) -> TransitionMatrix:
    """Exact transition matrix; row sums and detailed balance are re-verified
    entrywise before returning."""
    k = len(w.support)
    if k > cap:
        raise CapExceededError(f"support size {k} exceeds cap {cap}")
    rows = [[ZERO] * k for _ in range(k)]
    d = Fraction(w.d)
    for si, s in enumerate(w.support):
        for drop in labels_of(s):
            base = s & ~(1 << (drop - 1))
            cands = _candidates(w, base)
            denom = sum((weight for _, weight in cands), ZERO)
            for t, weight in cands:
                rows[si][w.index[t]] += weight / (d * denom)
    for si in range(k):
        if sum(rows[si], ZERO) != 1:
            raise InternalCheckError(f"row {si} does not sum to 1")
        for ti in range(si + 1, k):
            if w.weights[si] * rows[si][ti] != w.weights[ti] * rows[ti][si]:
                raise InternalCheckError(
                    f"detailed balance violated between states {si} and {ti}"
                )
    return TransitionMatrix(w.support, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class MixingResult:
    t_mix: int | None
    ratio: float | None  # observed constant in t_mix ~ d ln(d/eps)
    tv_curve: tuple  # max-over-starts TV after each step (Fraction while exact)
    converged: bool
    switched_to_float_at: int | None


def _max_tv(dist_rows, mu) -> Fraction:
    best = ZERO
    for row in dist_rows:
        tv = sum((abs(p - q) for p, q in zip(row, mu)), ZERO) / 2
        if tv > best:
            best = tv
    return best


def _max_bits(rows) -> int:
    worst = 0
    for row in rows:
        for v in row:
            worst = max(worst, v.numerator.bit_length(), v.denominator.bit_length())
    return worst


def mixing_time_exact(
    w: WalkInstance,
    eps,
    cap: int = 2000,
    max_steps: int = 10**6,
    max_bits: int = 4096,
) -> MixingResult:
    """Smallest t with max-over-starts TV(P^t(S0, .), mu) <= eps.

    Powering is exact rational until entries exceed max_bits bits, then
    switches to binary64 with 1e-12 slack on the eps comparison. The TV curve
    must be nonincreasing; in exact mode a violation raises (it would be a
    bug), in float mode a 1e-12 wobble is tolerated.
    """
    eps = exact(eps) if not isinstance(eps, float) else Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    k = len(w.support)
    if k > cap:
        raise CapExceededError(f"support size {k} exceeds cap {cap}")
    tm = transition_matrix(w, cap=max(cap, 5000))
    p = [list(row) for row in tm.rows]
    mu = [wt / w.total for wt in w.weights]
    rows = [[Fraction(1) if i == j else ZERO for j in range(k)] for i in range(k)]
    exact_mode = True
    switched_at = None
    t = 0
    tv = _max_tv(rows, mu)
    curve = [tv]
    eps_f = float(eps)

    def done(value) -> bool:
        if exact_mode:
            return value <= eps
        return value <= eps_f + 1e-12

    while not done(tv):
        if t >= max_steps:
            return MixingResult(None, None, tuple(curve), False, switched_at)
        if exact_mode:
            rows = [
                [
                    sum((rows[i][l] * p[l][j] for l in range(k) if rows[i][l]), ZERO)
                    for j in range(k)
                ]
                for i in range(k)
            ]
            t += 1
            new_tv = _max_tv(rows, mu)
            if new_tv > tv:
                raise InternalCheckError("TV increased during exact powering")
            if _max_bits(rows) > max_bits:
                rows = np.array([[float(v) for v in row] for row in rows])
                p = np.array([[float(v) for v in row] for row in p])
                mu = np.array([float(v) for v in mu])
                exact_mode = False
                switched_at = t
                new_tv = float(new_tv)
        else:
            rows = rows @ p
            t += 1
            new_tv = float(np.max(np.abs(rows - mu).sum(axis=1)) / 2.0)
            if new_tv > float(tv) + 1e-12:
                raise InternalCheckError("TV increased during float powering")
        tv = new_tv
        curve.append(tv)
    ratio = t / (w.d * math.log(w.d / eps_f)) if t else 0.0
    return MixingResult(t, ratio, tuple(curve), True, switched_at)


@dataclass(frozen=True)
class ChainResult:
    final: int
    histogram: Mapping[int, int]  # state mask -> visits (start included)
    steps: int
    seed: int
    scheme: str = RNG_SCHEME


def sample_chain(w: WalkInstance, start: int, steps: int, seed: int) -> ChainResult:
    """Run `steps` transitions from `start`; reproducible for a fixed seed."""
    if start not in w.index:
        raise ValueError(f"start {labels_of(start)} is not in the support")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    rng = make_rng(seed)
    hist: dict[int, int] = {}
    state = start
    hist[state] = 1
    for _ in range(steps):
        state = step(w, state, rng)
        hist[state] = hist.get(state, 0) + 1
    return ChainResult(final=state, histogram=hist, steps=steps, seed=seed)


def histogram_tv(w: WalkInstance, histogram: Mapping[int, int]) -> float:
    """TV distance between a visit histogram and the exact stationary mu."""
    total = sum(histogram.values())
    if total == 0:
        raise ValueError("empty histogram")
    acc = 0.0
    for mask, weight in zip(w.support, w.weights):
        emp = histogram.get(mask, 0) / total
        acc += abs(emp - float(weight / w.total))
    extra = sum(v for m, v in histogram.items() if m not in w.index)
    return (acc + extra / total) / 2.0


def is_irreducible(w: WalkInstance) -> bool:
    """Connectivity of the support under single-element swaps."""
    if len(w.support) == 1:
        return True
    seen = {w.support[0]}
    queue = [w.support[0]]
    while queue:
        s = queue.pop()
        for drop in labels_of(s):
            base = s & ~(1 << (drop - 1))
            for t, _ in _candidates(w, base):
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return len(seen) == len(w.support)
