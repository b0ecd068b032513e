"""Shared fixtures and small random generators for the suite.

Random constructions use seeded random.Random instances so every run checks
the same cases; the generators live here so module tests and the acceptance
suite draw from the same families.
"""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from clckit import (
    CoverageInstance,
    GraphicMatroid,
    PartitionMatroid,
    SetFunctionTable,
    UniformMatroid,
)


def coverage_example() -> CoverageInstance:
    """Three sets over {a, b} with unit weights: values (1,2,1) on singletons."""
    return CoverageInstance.build(
        [("a", 1), ("b", 1)], [["a"], ["a", "b"], ["b"]]
    )


def k4() -> GraphicMatroid:
    """Complete graph on 4 vertices; 6 edges, rank 3."""
    return GraphicMatroid(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


def rand_coverage_instance(rng: random.Random, n: int, universe_size: int = 5) -> CoverageInstance:
    universe = [
        (f"u{i}", Fraction(rng.randint(0, 4))) for i in range(universe_size)
    ]
    sets = []
    for _ in range(n):
        size = rng.randint(0, universe_size)
        sets.append(rng.sample([e for e, _ in universe], size))
    return CoverageInstance.build(universe, sets)


def rand_partition_matroid(rng: random.Random, n: int) -> PartitionMatroid:
    labels = list(range(1, n + 1))
    rng.shuffle(labels)
    blocks = []
    while labels:
        size = rng.randint(1, min(3, len(labels)))
        blocks.append(labels[:size])
        labels = labels[size:]
    caps = [rng.randint(1, len(b)) for b in blocks]
    return PartitionMatroid(blocks, caps)


def rand_table(rng: random.Random, n: int, max_value: int = 4) -> SetFunctionTable:
    vals = [Fraction(rng.randint(0, max_value)) for _ in range(1 << n)]
    vals[0] = Fraction(0)
    return SetFunctionTable(n, tuple(vals))


def rand_symmetric(rng: random.Random, m: int, span: int = 5) -> list[list[Fraction]]:
    h = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        h[i][i] = Fraction(rng.randint(-span, span))
        for j in range(i + 1, m):
            v = Fraction(rng.randint(-span, span), rng.randint(1, 3))
            h[i][j] = h[j][i] = v
    return h


def rand_invertible(rng: random.Random, m: int) -> list[list[Fraction]]:
    while True:
        p = [[Fraction(rng.randint(-3, 3)) for _ in range(m)] for _ in range(m)]
        if _det(p) != 0:
            return p


def _det(matrix) -> Fraction:
    m = len(matrix)
    a = [row[:] for row in matrix]
    det = Fraction(1)
    for k in range(m):
        pivot = next((i for i in range(k, m) if a[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, m):
            f = a[i][k] / a[k][k]
            for j in range(k, m):
                a[i][j] -= f * a[k][j]
    return det


def float_npos(h, tol: float = 1e-9) -> int:
    """Floating eigenvalue oracle: positive-eigenvalue count of a symmetric
    matrix scaled to unit max entry."""
    arr = np.array([[float(v) for v in row] for row in h], dtype=float)
    peak = np.max(np.abs(arr))
    if peak > 0:
        arr = arr / peak
    return int((np.linalg.eigvalsh(arr) > tol).sum())
