"""Weighted trees over the input point set and certified distortion.

Canonical weights (each edge weighted by the metric distance of its
endpoints) minimize the identity-map distortion over all positive weight
functions, so distortion searches only ever range over edge sets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotASpanningTree
from .metric import MetricSpace, _UnionFind

Edge = tuple[int, int, Fraction]


@dataclass(frozen=True)
class WeightedTree:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class DistortionReport:
    expansion: Fraction
    contraction: Fraction
    distortion: Fraction
    witness_expand: tuple[str, str] | None
    witness_contract: tuple[str, str] | None


def make_tree(vertices: Sequence[str], edges: Sequence[tuple[int, int, Fraction]]) -> WeightedTree:
    """Validate and freeze a weighted tree (connected, acyclic, positive weights)."""
    n = len(vertices)
    if n == 0:
        raise NotASpanningTree("empty vertex set")
    if len(edges) != n - 1:
        raise NotASpanningTree(f"{len(edges)} edges on {n} vertices")
    uf = _UnionFind(n)
    for u, v, w in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise NotASpanningTree(f"bad edge ({u}, {v})")
        if w <= 0:
            raise NotASpanningTree(f"non-positive weight on edge ({u}, {v})")
        if uf.find(u) == uf.find(v):
            raise NotASpanningTree(f"edge ({u}, {v}) closes a cycle")
        uf.union(u, v)
    return WeightedTree(
        tuple(vertices), tuple((u, v, Fraction(w)) for u, v, w in edges)
    )


def _adjacency(T: WeightedTree) -> list[list[tuple[int, Fraction]]]:
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(T.n)]
    for u, v, w in T.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    return adj


def _scaled_adjacency(T: WeightedTree) -> tuple[list[list[tuple[int, int]]], int]:
    """Adjacency with integer lengths on a common denominator."""
    denom = 1
    for _, _, w in T.edges:
        denom = denom * w.denominator // math.gcd(denom, w.denominator)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(T.n)]
    for u, v, w in T.edges:
        s = w.numerator * (denom // w.denominator)
        adj[u].append((v, s))
        adj[v].append((u, s))
    return adj, denom


def tree_metric(T: WeightedTree) -> list[list[Fraction]]:
    """Full shortest-path matrix, one traversal per source vertex."""
    adj, denom = _scaled_adjacency(T)
    n = T.n
    out = [[Fraction(0)] * n for _ in range(n)]
    for src in range(n):
        dist = [-1] * n
        dist[src] = 0
        stack = [src]
        while stack:
            u = stack.pop()
            du = dist[u]
            for v, w in adj[u]:
                if dist[v] < 0:
                    dist[v] = du + w
                    stack.append(v)
        row = out[src]
        for v in range(n):
            row[v] = Fraction(dist[v], denom)
    return out


def path_distance(T: WeightedTree, a: int, b: int) -> Fraction:
    """Single-pair tree distance via rooted parent pointers and the
    lowest common ancestor; independent of :func:`tree_metric`."""
    adj = _adjacency(T)
    parent: list[int | None] = [None] * T.n
    depth: list[Fraction] = [Fraction(0)] * T.n
    level = [0] * T.n
    parent[0] = 0
    order = [0]
    seen = {0}
    while order:
        u = order.pop()
        for v, w in adj[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = u
                depth[v] = depth[u] + w
                level[v] = level[u] + 1
                order.append(v)
    x, y = a, b
    while level[x] > level[y]:
        x = parent[x]
    while level[y] > level[x]:
        y = parent[y]
    while x != y:
        x, y = parent[x], parent[y]
    return depth[a] + depth[b] - 2 * depth[x]


def canonical_weights(X: MetricSpace, edges: Sequence[tuple[int, int]]) -> WeightedTree:
    """Spanning tree on X with each edge weighted by the metric distance."""
    return make_tree(X.points, [(u, v, X.dist[u][v]) for u, v in edges])


def distortion(X: MetricSpace, T: WeightedTree) -> DistortionReport:
    """Exact expansion/contraction extrema of the identity map X -> T.

    Witness ties go to the lexicographically first point-index pair.
    """
    if set(T.vertices) != set(X.points):
        raise NotASpanningTree("tree does not span the metric space's points")
    # Map tree vertex -> metric index so the scan runs in metric order.
    to_metric = [X.index(lbl) for lbl in T.vertices]
    to_tree = [0] * X.n
    for t_idx, m_idx in enumerate(to_metric):
        to_tree[m_idx] = t_idx
    if X.n < 2:
        one = Fraction(1)
        return DistortionReport(one, one, one, None, None)
    dt = tree_metric(T)
    exp = Fraction(0)
    con = Fraction(0)
    wit_e: tuple[str, str] | None = None
    wit_c: tuple[str, str] | None = None
    for i, j in X.pairs():
        dT = dt[to_tree[i]][to_tree[j]]
        dX = X.dist[i][j]
        r = dT / dX
        if r > exp:
            exp, wit_e = r, (X.points[i], X.points[j])
        rc = dX / dT
        if rc > con:
            con, wit_c = rc, (X.points[i], X.points[j])
    return DistortionReport(exp, con, exp * con, wit_e, wit_c)
