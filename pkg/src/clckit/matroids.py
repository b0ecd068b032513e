"""Matroid oracles: uniform, partition, graphic, explicit, and contractions.

Ranks are exact integers; ground elements are 1-based labels. Contracting by
tau keeps the parent's labels (the ground set shrinks), and rank then means
rk(S + tau) - rk(tau). Tables produced from an oracle are indexed by the
surviving labels in ascending order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .bitsets import labels_of, mask_of
from .errors import CapExceededError, NotAMatroidError
from .setfn import SetFunctionTable, ZERO


class Matroid:
    """Rank oracle over a finite ground set of 1-based labels."""

    elements: tuple[int, ...]

    def rank(self, subset: Iterable[int]) -> int:
        s = frozenset(subset)
        extra = s.difference(self.elements)
        if extra:
            raise ValueError(f"invalid subset: {sorted(extra)} outside the ground set")
        return self._rank(s)

    def _rank(self, s: frozenset) -> int:
        raise NotImplementedError

    def full_rank(self) -> int:
        return self._rank(frozenset(self.elements))

    def is_independent(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return self.rank(s) == len(s)

    def contract(self, tau: Iterable[int]) -> "Matroid":
        t = frozenset(tau)
        if not t:
            return self
        extra = t.difference(self.elements)
        if extra:
            raise ValueError(f"invalid contraction set: {sorted(extra)}")
        if isinstance(self, ContractedMatroid):
            return ContractedMatroid(self.base, self.tau | t)
        return ContractedMatroid(self, t)


def contract_matroid(m: Matroid, tau: Iterable[int]) -> Matroid:
    return m.contract(tau)


class UniformMatroid(Matroid):
    """U_{r,n}: every set of size at most r is independent."""

    def __init__(self, r: int, n: int):
        if not 0 <= r <= n:
            raise ValueError("need 0 <= r <= n")
        self.r = r
        self.n = n
        self.elements = tuple(range(1, n + 1))

    def _rank(self, s: frozenset) -> int:
        return min(len(s), self.r)

    def __repr__(self):
        return f"UniformMatroid(r={self.r}, n={self.n})"


class PartitionMatroid(Matroid):
    """Blocks partition [n]; rank is the capped count per block."""

    def __init__(self, blocks: Sequence[Iterable[int]], caps: Sequence[int]):
        self.blocks = tuple(frozenset(b) for b in blocks)
        self.caps = tuple(int(c) for c in caps)
        if len(self.blocks) != len(self.caps):
            raise ValueError("need one cap per block")
        if any(c < 0 for c in self.caps):
            raise ValueError("caps must be nonnegative")
        n = sum(len(b) for b in self.blocks)
        covered = frozenset().union(*self.blocks) if self.blocks else frozenset()
        if covered != frozenset(range(1, n + 1)) or len(covered) != n:
            raise ValueError("blocks must partition {1,...,n}")
        self.elements = tuple(range(1, n + 1))

    def _rank(self, s: frozenset) -> int:
        return sum(min(len(s & b), c) for b, c in zip(self.blocks, self.caps))

    def __repr__(self):
        return f"PartitionMatroid(blocks={[sorted(b) for b in self.blocks]}, caps={list(self.caps)})"


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; self-loop edges are matroid loops."""

    def __init__(self, num_vertices: int, edges: Sequence[tuple[int, int]]):
        if num_vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        self.num_vertices = num_vertices
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        for u, v in self.edges:
            if not (1 <= u <= num_vertices and 1 <= v <= num_vertices):
                raise ValueError(f"edge ({u},{v}) references an unknown vertex")
        self.elements = tuple(range(1, len(self.edges) + 1))

    def _rank(self, s: frozenset) -> int:
        parent = list(range(self.num_vertices + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        rank = 0
        for e in sorted(s):
            u, v = self.edges[e - 1]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank

    def __repr__(self):
        return f"GraphicMatroid(V={self.num_vertices}, edges={list(self.edges)})"


@dataclass(frozen=True)
class ExplicitValidation:
    ok: bool
    kind: str | None = None  # "empty" | "out-of-range" | "not-downward-closed" | "exchange-failure"
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_explicit(n: int, family: Iterable[Iterable[int]]) -> ExplicitValidation:
    """Check the independence axioms; violations come back as return values."""
    fam = {frozenset(i) for i in family}
    if not fam:
        return ExplicitValidation(False, "empty", None)
    ground = frozenset(range(1, n + 1))
    for i in fam:
        if not i <= ground:
            return ExplicitValidation(False, "out-of-range", (tuple(sorted(i)),))
    for i in fam:
        for e in i:
            if i - {e} not in fam:
                return ExplicitValidation(
                    False, "not-downward-closed", (tuple(sorted(i)), tuple(sorted(i - {e})))
                )
    members = sorted(fam, key=lambda s: (len(s), sorted(s)))
    for a in members:
        for b in members:
            if len(a) < len(b):
                if not any(a | {x} in fam for x in b - a):
                    return ExplicitValidation(
                        False, "exchange-failure", (tuple(sorted(a)), tuple(sorted(b)))
                    )
    return ExplicitValidation(True)


class ExplicitMatroid(Matroid):
    """Matroid given by listing its independent sets; validated eagerly."""

    def __init__(self, n: int, independent: Iterable[Iterable[int]]):
        fam = frozenset(frozenset(i) for i in independent)
        check = validate_explicit(n, fam)
        if not check:
            raise NotAMatroidError(f"{check.kind}: witness {check.witness}")
        self.n = n
        self.family = fam
        self.elements = tuple(range(1, n + 1))
        # rank(S) = max |I| over independent I inside S, tabulated bottom-up
        size = 1 << n
        table = [0] * size
        fam_masks = {mask_of(i) for i in fam}
        for m in range(1, size):
            if m in fam_masks:
                table[m] = m.bit_count()
            else:
                best = 0
                rest = m
                while rest:
                    low = rest & -rest
                    best = max(best, table[m ^ low])
                    rest ^= low
                table[m] = best
        self._table = table

    def _rank(self, s: frozenset) -> int:
        return self._table[mask_of(s)]

    def __repr__(self):
        return f"ExplicitMatroid(n={self.n}, |family|={len(self.family)})"


class ContractedMatroid(Matroid):
    """M/tau with the parent's labels; rank(S) = rk(S + tau) - rk(tau)."""

    def __init__(self, base: Matroid, tau: frozenset):
        extra = tau.difference(base.elements)
        if extra:
            raise ValueError(f"invalid contraction set: {sorted(extra)}")
        self.base = base
        self.tau = frozenset(tau)
        self.elements = tuple(e for e in base.elements if e not in tau)
        self._tau_rank = base._rank(self.tau)

    def _rank(self, s: frozenset) -> int:
        return self.base._rank(s | self.tau) - self._tau_rank

    def __repr__(self):
        return f"{self.base!r} / {sorted(self.tau)}"


@dataclass(frozen=True)
class ParallelPartition:
    """Loops plus parallel classes covering the rest of the ground set."""

    loops: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]


def parallel_partition(m: Matroid) -> ParallelPartition:
    """Group elements into loops and parallel classes, then verify the
    pairwise rank case table (0 loop-loop, 1 within a class or with a loop,
    2 across classes) on every pair."""
    loops = []
    nonloops = []
    for x in m.elements:
        (loops if m._rank(frozenset((x,))) == 0 else nonloops).append(x)
    classes: list[list[int]] = []
    for x in nonloops:
        for cls in classes:
            if m._rank(frozenset((x, cls[0]))) == 1:
                cls.append(x)
                break
        else:
            classes.append([x])
    cls_of = {}
    for idx, cls in enumerate(classes):
        for x in cls:
            cls_of[x] = idx
    loop_set = set(loops)
    for x, y in combinations(m.elements, 2):
        if x in loop_set and y in loop_set:
            expected = 0
        elif x in loop_set or y in loop_set:
            expected = 1
        elif cls_of[x] == cls_of[y]:
            expected = 1
        else:
            expected = 2
        actual = m._rank(frozenset((x, y)))
        if actual != expected:
            raise NotAMatroidError(
                f"pair rank case table violated at ({x},{y}): rank {actual}, expected {expected}"
            )
    return ParallelPartition(
        loops=tuple(sorted(loops)),
        classes=tuple(tuple(sorted(c)) for c in sorted(classes, key=min)),
    )


def to_setfunction(m: Matroid, mode: str = "rank") -> SetFunctionTable:
    """Rank table or 0/1 independence indicator over the sorted ground labels.

    The indicator stores 0 at the empty set (the table convention wins over
    the combinatorial value 1; degree->=1 restrictions are unaffected).
    """
    if mode not in ("rank", "indicator"):
        raise ValueError(f"unknown mode {mode!r}")
    els = tuple(sorted(m.elements))
    k = len(els)
    if k > 24:
        raise CapExceededError(f"{k} elements exceed the materialization cap")
    vals = [ZERO] * (1 << k)
    for mask in range(1, 1 << k):
        s = frozenset(els[b] for b in range(k) if mask >> b & 1)
        r = m._rank(s)
        if mode == "rank":
            vals[mask] = Fraction(r)
        else:
            vals[mask] = Fraction(1) if r == len(s) else ZERO
    return SetFunctionTable(k, tuple(vals))
