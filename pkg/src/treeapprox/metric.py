"""Finite metric spaces with exact rational distances.

Validation, the ultrametric and four-point checks, chain components at a
scale, and the exact Nagata constant.  Everything here is a pure function
over immutable inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    AsymmetricMatrix,
    DuplicateLabel,
    NegativeOrZeroOffDiagonal,
    NonPositiveScale,
    SinglePoint,
    TriangleViolation,
)

Rational = Fraction
Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class MetricSpace:
    """Point labels plus an exact symmetric distance matrix."""

    points: tuple[str, ...]
    dist: Matrix

    @property
    def n(self) -> int:
        return len(self.points)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index(self, label: str) -> int:
        return self.points.index(label)

    def pairs(self) -> Iterable[tuple[int, int]]:
        return combinations(range(self.n), 2)

    def sep(self) -> Fraction:
        if self.n < 2:
            raise SinglePoint("separation undefined for a single point")
        return min(self.dist[i][j] for i, j in self.pairs())

    def diam(self) -> Fraction:
        if self.n < 2:
            return Fraction(0)
        return max(self.dist[i][j] for i, j in self.pairs())

    def distinct_distances(self) -> list[Fraction]:
        """Sorted distinct off-diagonal distance values."""
        return sorted({self.dist[i][j] for i, j in self.pairs()})

    def restrict(self, idxs: Sequence[int]) -> "MetricSpace":
        pts = tuple(self.points[i] for i in idxs)
        mat = tuple(tuple(self.dist[i][j] for j in idxs) for i in idxs)
        return MetricSpace(pts, mat)


@dataclass(frozen=True)
class Partition:
    """Chain components at a scale: blocks are > scale apart and
    chain-connected at threshold <= scale."""

    blocks: tuple[frozenset[int], ...]
    scale: Fraction

    def block_of(self, i: int) -> frozenset[int]:
        for b in self.blocks:
            if i in b:
                return b
        raise KeyError(i)


@dataclass(frozen=True)
class NagataReport:
    constant: Fraction
    witness_scale: Fraction | None
    witness_block: frozenset[int]
    is_ultrametric: bool
    is_zero_hyperbolic: bool
    separation: Fraction | None
    diameter: Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected rational, got {type(x).__name__}: {x!r}")


def _check_triangles(labels, mat) -> None:
    n = len(labels)
    # Exact check on a common-denominator integer matrix; vectorized with
    # numpy when the entries stay comfortably inside int64.
    denom_lcm = 1
    for row in mat:
        for x in row:
            denom_lcm = denom_lcm * x.denominator // math.gcd(denom_lcm, x.denominator)
    scaled = [[x.numerator * (denom_lcm // x.denominator) for x in row] for row in mat]
    peak = max(max(abs(v) for v in row) for row in scaled) if n else 0
    if peak < 2**61:
        import numpy as np

        D = np.array(scaled, dtype=np.int64)
        for k in range(n):
            bad = D > D[:, k : k + 1] + D[k : k + 1, :]
            if bad.any():
                i, j = map(int, divmod(int(bad.argmax()), n))
                raise TriangleViolation(labels[i], labels[j], labels[k])
        return
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if mat[i][j] > mat[i][k] + mat[k][j]:
                    raise TriangleViolation(labels[i], labels[j], labels[k])


def validate_metric(labels: Sequence[str], matrix: Sequence[Sequence]) -> MetricSpace:
    """Build a MetricSpace, rejecting anything that is not a metric."""
    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        seen = set()
        dup = next(x for x in labels if x in seen or seen.add(x))
        raise DuplicateLabel(f"duplicate point label {dup!r}")
    n = len(labels)
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise AsymmetricMatrix(f"expected a {n}x{n} matrix")
    mat = [[_as_fraction(x) for x in row] for row in matrix]
    for i in range(n):
        if mat[i][i] != 0:
            raise NegativeOrZeroOffDiagonal(
                f"nonzero diagonal entry at {labels[i]!r}"
            )
        for j in range(i + 1, n):
            if mat[i][j] != mat[j][i]:
                raise AsymmetricMatrix(
                    f"d({labels[i]},{labels[j]}) != d({labels[j]},{labels[i]})"
                )
            if mat[i][j] <= 0:
                raise NegativeOrZeroOffDiagonal(
                    f"d({labels[i]},{labels[j]}) = {mat[i][j]} must be positive"
                )
    _check_triangles(labels, mat)
    return MetricSpace(labels, tuple(tuple(row) for row in mat))


def metric_from_trusted(labels: Sequence[str], matrix) -> MetricSpace:
    """Wrap a matrix known valid by construction (generators); skips the
    cubic triangle scan."""
    return MetricSpace(
        tuple(labels), tuple(tuple(_as_fraction(x) for x in row) for row in matrix)
    )


def is_ultrametric(X: MetricSpace) -> bool:
    """Brute-force strong triangle inequality over all triples."""
    d = X.dist
    for i, j, k in combinations(range(X.n), 3):
        if d[i][j] > max(d[i][k], d[k][j]):
            return False
        if d[i][k] > max(d[i][j], d[j][k]):
            return False
        if d[j][k] > max(d[j][i], d[i][k]):
            return False
    return True


def four_point_witness(X: MetricSpace) -> tuple[str, str, str, str] | None:
    """First quadruple violating the four-point condition, if any."""
    d = X.dist
    for w, x, y, z in combinations(range(X.n), 4):
        s1 = d[w][x] + d[y][z]
        s2 = d[w][y] + d[x][z]
        s3 = d[w][z] + d[x][y]
        top = max(s1, s2, s3)
        if sorted((s1, s2, s3))[1] < top:
            return (X.points[w], X.points[x], X.points[y], X.points[z])
    return None


def is_zero_hyperbolic(X: MetricSpace) -> bool:
    """Brute-force four-point condition over all unordered quadruples."""
    return four_point_witness(X) is None


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[ri] = rj


def chain_components(X: MetricSpace, s) -> Partition:
    """Connected components of the threshold graph with edges d <= s."""
    s = _as_fraction(s)
    if s <= 0:
        raise NonPositiveScale(f"scale must be positive, got {s}")
    uf = _UnionFind(X.n)
    for i, j in X.pairs():
        if X.dist[i][j] <= s:
            uf.union(i, j)
    groups: dict[int, set[int]] = {}
    for i in range(X.n):
        groups.setdefault(uf.find(i), set()).add(i)
    blocks = sorted(groups.values(), key=min)
    return Partition(tuple(frozenset(b) for b in blocks), s)


def block_diam(X: MetricSpace, block: Iterable[int]) -> Fraction:
    idx = sorted(block)
    if len(idx) < 2:
        return Fraction(0)
    return max(X.dist[i][j] for i, j in combinations(idx, 2))


def nagata_constant(X: MetricSpace) -> NagataReport:
    """Exact Nagata constant via a scan over the distinct distance values.

    The chain partition is constant on the half-open interval between
    consecutive distance values and diam(block)/s decreases in s there, so
    the supremum over s > 0 is attained at some distance value.
    """
    if X.n < 2:
        return NagataReport(
            constant=Fraction(0),
            witness_scale=None,
            witness_block=frozenset(),
            is_ultrametric=True,
            is_zero_hyperbolic=True,
            separation=None,
            diameter=Fraction(0),
        )
    best = Fraction(0)
    w_scale: Fraction | None = None
    w_block: frozenset[int] = frozenset()
    for s in X.distinct_distances():
        part = chain_components(X, s)
        for b in part.blocks:
            ratio = block_diam(X, b) / s
            if ratio > best:
                best, w_scale, w_block = ratio, s, b
    ultra = best == 1
    from .rtree import zero_hyperbolic_fast

    return NagataReport(
        constant=best,
        witness_scale=w_scale,
        witness_block=w_block,
        is_ultrametric=ultra,
        is_zero_hyperbolic=zero_hyperbolic_fast(X),
        separation=X.sep(),
        diameter=X.diam(),
    )
