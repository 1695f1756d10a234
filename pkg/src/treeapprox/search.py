"""Minimum-distortion spanning tree search.

Canonical weights never contract, so the distortion of a candidate edge
set is simply the largest tree-to-metric ratio over point pairs; all
comparisons are exact integer cross-multiplications on a common
denominator.
"""
from __future__ import annotations

import heapq
import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import TooLarge
from .metric import MetricSpace, _UnionFind
from .trees import WeightedTree, canonical_weights, distortion

EXHAUSTIVE_LIMIT = 9
BNB_LIMIT = 20


@dataclass(frozen=True)
class SearchResult:
    best_tree: WeightedTree
    best_distortion: Fraction
    lower_bound: Fraction
    method: str
    trees_examined: int


def _decode_prufer(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for s in seq:
        degree[s] += 1
    edges = []
    heap = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(heap)
    for s in seq:
        leaf = heapq.heappop(heap)
        edges.append((min(leaf, s), max(leaf, s)))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(heap, s)
    u = heapq.heappop(heap)
    v = heapq.heappop(heap)
    edges.append((u, v))
    return edges


def enumerate_spanning_trees(n: int) -> Iterator[list[tuple[int, int]]]:
    """Every labeled spanning tree on n vertices exactly once, in
    lexicographic order of the encoding sequence."""
    if n < 2:
        raise TooLarge(f"need at least 2 vertices, got {n}")
    if n > EXHAUSTIVE_LIMIT:
        raise TooLarge(f"{n}^{n - 2} trees is beyond the exhaustive cutoff")
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield _decode_prufer(seq, n)


def _scaled_dist(X: MetricSpace) -> tuple[list[list[int]], int]:
    denom = 1
    for i, j in X.pairs():
        d = X.dist[i][j].denominator
        denom = denom * d // math.gcd(denom, d)
    D = [
        [int(X.dist[i][j] * denom) for j in range(X.n)] for i in range(X.n)
    ]
    return D, denom


def _tree_ratio(
    n: int,
    edges: list[tuple[int, int]],
    D: list[list[int]],
    best: tuple[int, int] | None,
) -> tuple[int, int] | None:
    """Max d_T/d over pairs as an integer pair, or None once it is clear
    the tree cannot strictly beat ``best``."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v in edges:
        w = D[u][v]
        adj[u].append((v, w))
        adj[v].append((u, w))
    num, den = 1, 1
    dist = [0] * n
    for src in range(n - 1):
        for k in range(n):
            dist[k] = -1
        dist[src] = 0
        stack = [src]
        while stack:
            u = stack.pop()
            du = dist[u]
            for v, w in adj[u]:
                if dist[v] < 0:
                    dist[v] = du + w
                    stack.append(v)
        row = D[src]
        for j in range(src + 1, n):
            dt = dist[j]
            d = row[j]
            if dt * den > num * d:
                num, den = dt, d
                if best is not None and num * best[1] >= best[0] * den:
                    return None
    return num, den


def _is_leaf(edges: list[tuple[int, int]], vertex: int) -> bool:
    return sum(1 for u, v in edges if vertex in (u, v)) == 1


def _exhaustive_chunk(
    X: MetricSpace,
    D: list[list[int]],
    firsts: Sequence[int],
    symmetry: bool,
) -> tuple[tuple[int, int] | None, tuple[int, ...] | None, int]:
    """Scan all encoding sequences whose first symbol is in ``firsts``
    (in increasing order); returns the chunk's best ratio, the first
    sequence achieving it, and the number of trees examined."""
    n = X.n
    best: tuple[int, int] | None = None
    best_seq: tuple[int, ...] | None = None
    examined = 0
    if n == 2:
        return (1, 1), (), 1
    for first in firsts:
        for rest in itertools.product(range(n), repeat=n - 3):
            seq = (first, *rest)
            edges = _decode_prufer(seq, n)
            if symmetry and not _is_leaf(edges, 0):
                continue
            examined += 1
            r = _tree_ratio(n, edges, D, best)
            if r is not None and (
                best is None or r[0] * best[1] < best[0] * r[1]
            ):
                best, best_seq = r, seq
    return best, best_seq, examined


def min_distortion_exhaustive(
    X: MetricSpace, threads: int = 1, symmetry: bool = False
) -> SearchResult:
    """Exact optimum over all labeled spanning trees; ties go to the
    lexicographically smallest encoding sequence.

    With ``symmetry`` set, only trees where vertex 0 is a leaf are
    scanned; that is only sound for vertex-transitive spaces.
    """
    n = X.n
    if n > EXHAUSTIVE_LIMIT:
        raise TooLarge(f"exhaustive search refuses n = {n} > {EXHAUSTIVE_LIMIT}")
    if n < 2:
        raise TooLarge("search needs at least 2 points")
    D, _ = _scaled_dist(X)
    if n == 2:
        T = canonical_weights(X, [(0, 1)])
        one = Fraction(1)
        return SearchResult(T, one, one, "exhaustive", 1)
    firsts_by_worker: list[list[int]] = [[] for _ in range(max(1, threads))]
    for first in range(n):
        firsts_by_worker[first % max(1, threads)].append(first)
    if threads <= 1:
        parts = [
            _exhaustive_chunk(X, D, fs, symmetry) for fs in firsts_by_worker
        ]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(
                    lambda fs: _exhaustive_chunk(X, D, fs, symmetry),
                    firsts_by_worker,
                )
            )
    best = None
    best_seq = None
    examined = 0
    for r, seq, cnt in parts:
        examined += cnt
        if r is None:
            continue
        if (
            best is None
            or r[0] * best[1] < best[0] * r[1]
            or (r[0] * best[1] == best[0] * r[1] and seq < best_seq)
        ):
            best, best_seq = r, seq
    assert best is not None
    T = canonical_weights(X, _decode_prufer(best_seq, n))
    val = Fraction(best[0], best[1])
    return SearchResult(T, val, val, "exhaustive", examined)


def min_distortion_bnb(X: MetricSpace, node_budget: int = 10**7) -> SearchResult:
    """Branch and bound over parent assignments of a tree rooted at
    vertex 0.  The bound for a partial forest is the largest tree-to-
    metric ratio among pairs already connected, which adding edges can
    never lower.  On budget exhaustion the incumbent is returned with
    the weakest bound left open."""
    n = X.n
    if n > BNB_LIMIT:
        raise TooLarge(f"branch and bound refuses n = {n} > {BNB_LIMIT}")
    if n < 2:
        raise TooLarge("search needs at least 2 points")
    D, _ = _scaled_dist(X)
    if n == 2:
        T = canonical_weights(X, [(0, 1)])
        one = Fraction(1)
        return SearchResult(T, one, one, "branch-and-bound", 1)

    # incumbent from the star at vertex 0, never empty
    star = [(0, v) for v in range(1, n)]
    inc_ratio = _tree_ratio(n, star, D, None)
    inc_edges = list(star)
    trees_examined = 1

    # comp[v]: component id; members[c]: vertices; dF[(a, b)]: forest distance
    comp = list(range(n))
    members = {c: [c] for c in range(n)}
    dF: dict[tuple[int, int], int] = {}
    nodes_visited = 0
    open_bound: tuple[int, int] | None = None  # weakest bound left open

    def ratio_le(a: tuple[int, int], b: tuple[int, int]) -> bool:
        return a[0] * b[1] <= b[0] * a[1]

    def ratio_lt(a: tuple[int, int], b: tuple[int, int]) -> bool:
        return a[0] * b[1] < b[0] * a[1]

    # frame: (v, parent, undo info); DFS assigns parents for v = 1..n-1
    def connect(v: int, p: int) -> tuple[tuple[int, int], list]:
        """Join v's and p's components; returns (new max ratio among the
        newly connected pairs, undo record)."""
        ca, cb = comp[v], comp[p]
        w = D[v][p]
        new_pairs = []
        num, den = 0, 1
        for a in members[ca]:
            da = dF[(a, v)] if a != v else 0
            for b in members[cb]:
                db = dF[(b, p)] if b != p else 0
                dt = da + w + db
                key = (a, b) if a < b else (b, a)
                dF[key] = dF[(key[1], key[0])] = dt
                new_pairs.append(key)
                d = D[a][b]
                if dt * den > num * d:
                    num, den = dt, d
        moved = members[cb]
        for b in moved:
            comp[b] = ca
        members[ca] = members[ca] + moved
        del members[cb]
        return (num, den), [ca, cb, moved, new_pairs]

    def undo(rec) -> None:
        ca, cb, moved, new_pairs = rec
        members[ca] = members[ca][: len(members[ca]) - len(moved)]
        members[cb] = moved
        for b in moved:
            comp[b] = cb
        for a, b in new_pairs:
            del dF[(a, b)]
            del dF[(b, a)]

    budget_exhausted = False

    def dfs(v: int, bound: tuple[int, int]) -> None:
        nonlocal inc_ratio, inc_edges, nodes_visited, open_bound
        nonlocal trees_examined, budget_exhausted
        if budget_exhausted:
            return
        if v == n:
            trees_examined += 1
            if ratio_lt(bound, inc_ratio):
                inc_ratio = bound
                inc_edges = [
                    (min(u, comp_parent[u]), max(u, comp_parent[u]))
                    for u in range(1, n)
                ]
            return
        for p in range(n):
            if p == v:
                continue
            if comp[p] == comp[v]:
                continue  # would close a cycle
            nodes_visited += 1
            if nodes_visited > node_budget:
                budget_exhausted = True
                if open_bound is None or ratio_lt(bound, open_bound):
                    open_bound = bound
                return
            new_ratio, rec = connect(v, p)
            nb = new_ratio if ratio_lt(bound, new_ratio) else bound
            if ratio_lt(nb, inc_ratio):
                comp_parent[v] = p
                dfs(v + 1, nb)
            undo(rec)
            if budget_exhausted:
                if open_bound is None or ratio_lt(bound, open_bound):
                    open_bound = bound
                return

    comp_parent = [0] * n
    dfs(1, (1, 1))
    val = Fraction(inc_ratio[0], inc_ratio[1])
    if budget_exhausted and open_bound is not None:
        lb = Fraction(open_bound[0], open_bound[1])
        lb = min(lb, val)
    else:
        lb = val
    T = canonical_weights(X, inc_edges)
    return SearchResult(T, val, lb, "branch-and-bound", trees_examined)


def improve_local(
    X: MetricSpace, start: WeightedTree, seed: int, iterations: int = 100
) -> WeightedTree:
    """Best-improvement edge swaps: remove a tree edge, reconnect the two
    halves by the pair that minimizes the resulting distortion.  Stops at
    a local optimum or after ``iterations`` swaps; never worse than the
    start.  The seed only permutes the scan order among exact ties."""
    rng = random.Random(("improve_local", seed).__repr__())
    idx = {lbl: i for i, lbl in enumerate(X.points)}
    edges = [(idx[start.vertices[u]], idx[start.vertices[v]]) for u, v, _ in start.edges]
    D, _ = _scaled_dist(X)
    n = X.n
    cur = _tree_ratio(n, edges, D, None)

    def split(edge_list, drop):
        uf = _UnionFind(n)
        for k, (u, v) in enumerate(edge_list):
            if k != drop:
                uf.union(u, v)
        root = uf.find(edge_list[drop][0])
        side_a = [v for v in range(n) if uf.find(v) == root]
        side_b = [v for v in range(n) if uf.find(v) != root]
        return side_a, side_b

    for _ in range(iterations):
        best_swap = None
        best_ratio = cur
        order = list(range(len(edges)))
        rng.shuffle(order)
        for k in order:
            side_a, side_b = split(edges, k)
            cand_pairs = [(a, b) for a in side_a for b in side_b]
            rng.shuffle(cand_pairs)
            for a, b in cand_pairs:
                if (min(a, b), max(a, b)) == (
                    min(edges[k]), max(edges[k])
                ):
                    continue
                trial = edges[:k] + edges[k + 1 :] + [(a, b)]
                r = _tree_ratio(n, trial, D, best_ratio)
                if r is not None and r[0] * best_ratio[1] < best_ratio[0] * r[1]:
                    best_ratio = r
                    best_swap = trial
        if best_swap is None:
            break
        edges, cur = best_swap, best_ratio
    return canonical_weights(X, [(min(u, v), max(u, v)) for u, v in edges])
