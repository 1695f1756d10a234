"""Deterministic generators for the named test spaces and seeded random
families.

The random families are plumbing for property tests: the ultrametric
family nests strictly shrinking blocks, the treeset family samples points
on a random weighted tree with branch nodes, so membership in the target
class holds by construction.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .errors import OutOfRange
from .metric import MetricSpace, metric_from_trusted


def gen_binary_leaves(n: int) -> MetricSpace:
    """Leaves of the full binary tree of height n: points {0,1}^n with
    d(x, x') = 2 * max{k : x_k != x'_k} (positions 1-based)."""
    if not 1 <= n <= 12:
        raise OutOfRange(f"binary-leaves height must be in [1, 12], got {n}")
    labels = [format(i, f"0{n}b") for i in range(2**n)]
    size = 2**n
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            diff = i ^ j
            # label positions read left to right, so the largest differing
            # 1-based position is governed by the lowest set bit of i ^ j
            low = (diff & -diff).bit_length() - 1
            k = n - low
            mat[i][j] = mat[j][i] = Fraction(2 * k)
    return metric_from_trusted(labels, mat)


def gen_cycle(n: int) -> MetricSpace:
    if n < 3:
        raise OutOfRange(f"cycle needs n >= 3, got {n}")
    labels = [str(i) for i in range(n)]
    mat = [
        [Fraction(min(abs(i - j), n - abs(i - j))) for j in range(n)]
        for i in range(n)
    ]
    return metric_from_trusted(labels, mat)


def gen_adic(k: int) -> MetricSpace:
    """Truncated 2-adic metric on 0..2^k-1: d(x, y) = 2^{-v2(x - y)}."""
    if not 1 <= k <= 7:
        raise OutOfRange(f"adic truncation level must be in [1, 7], got {k}")
    size = 2**k
    labels = [str(i) for i in range(size)]
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            diff = j - i
            v = (diff & -diff).bit_length() - 1
            mat[i][j] = mat[j][i] = Fraction(1, 2**v)
    return metric_from_trusted(labels, mat)


def _example33_weight(level: int, N: int) -> int:
    if level >= N - 1:
        return 1
    return 2 ** ((N - 1) - level)


def gen_example33(N: int) -> MetricSpace:
    """Leaves of the full binary tree of height N under edge weights 1 at
    levels N and N-1 and 2^{(N-1)-k} at level k <= N-2 (root at level 0).

    A 2^n-valued ultrametric with sep 2 and diam 2^N whose optimal tree
    distortion approaches 4 from below.
    """
    if N < 3:
        raise OutOfRange(f"need N >= 3, got {N}")
    size = 2**N
    labels = [format(i, f"0{N}b") for i in range(size)]
    # distance between leaves meeting at level m: 2 * sum of weights at
    # levels m+1 .. N
    suffix = [0] * (N + 2)
    for lvl in range(N, 0, -1):
        suffix[lvl] = suffix[lvl + 1] + _example33_weight(lvl, N)
    mat = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            diff = i ^ j
            meet = N - diff.bit_length()
            mat[i][j] = mat[j][i] = Fraction(2 * suffix[meet + 1])
    return metric_from_trusted(labels, mat)


def gen_random_ultrametric(n: int, seed: int) -> MetricSpace:
    """Recursive random partition with strictly shrinking block diameters."""
    if not 2 <= n <= 4096:
        raise OutOfRange(f"size must be in [2, 4096], got {n}")
    rng = random.Random(("ultrametric", seed, n).__repr__())
    mat = [[Fraction(0)] * n for _ in range(n)]

    def build(idxs: list[int], diam: Fraction) -> None:
        if len(idxs) < 2:
            return
        rng.shuffle(idxs)
        k = rng.randint(2, min(len(idxs), 4))
        cuts = sorted(rng.sample(range(1, len(idxs)), k - 1)) if len(idxs) > k - 1 else list(range(1, k))
        groups = []
        prev = 0
        for c in cuts + [len(idxs)]:
            if c > prev:
                groups.append(idxs[prev:c])
                prev = c
        if len(groups) == 1:
            groups = [idxs[:1], idxs[1:]]
        for gi, g in enumerate(groups):
            for h in groups[gi + 1 :]:
                for a in g:
                    for b in h:
                        mat[a][b] = mat[b][a] = diam
        shrink = Fraction(rng.randint(1, 3), 4)
        for g in groups:
            build(g, diam * shrink)

    top = Fraction(rng.randint(4, 64))
    build(list(range(n)), top)
    labels = [f"p{i}" for i in range(n)]
    return metric_from_trusted(labels, mat)


def gen_random_treeset(n: int, seed: int) -> MetricSpace:
    """Path metric of n marked locations on a random weighted tree with
    branch (Steiner) nodes; 0-hyperbolic by construction."""
    if not 2 <= n <= 4096:
        raise OutOfRange(f"size must be in [2, 4096], got {n}")
    rng = random.Random(("treeset", seed, n).__repr__())
    # nodes: adjacency of (neighbor, weight); marked[i] = node of point i
    adj: list[list[tuple[int, Fraction]]] = [[], []]
    w0 = Fraction(rng.randint(1, 12), rng.choice([1, 2, 4]))
    adj[0].append((1, w0))
    adj[1].append((0, w0))
    edges: list[tuple[int, int]] = [(0, 1)]
    marked = [0, 1]

    def add_node() -> int:
        adj.append([])
        return len(adj) - 1

    def connect(u: int, v: int, w: Fraction) -> None:
        adj[u].append((v, w))
        adj[v].append((u, w))
        edges.append((u, v))

    def split_edge(eidx: int, off: Fraction) -> int:
        u, v = edges[eidx]
        w = next(wt for x, wt in adj[u] if x == v)
        mid = add_node()
        adj[u] = [(x, wt) for x, wt in adj[u] if x != v]
        adj[v] = [(x, wt) for x, wt in adj[v] if x != u]
        edges[eidx] = (u, mid)
        adj[u].append((mid, off))
        adj[mid].append((u, off))
        connect(mid, v, w - off)
        return mid

    while len(marked) < n:
        style = rng.random()
        if style < 0.55:
            # branch off the interior of a random edge
            eidx = rng.randrange(len(edges))
            u, v = edges[eidx]
            w = next(wt for x, wt in adj[u] if x == v)
            off = w * Fraction(rng.randint(1, 7), 8)
            if off == w:
                off = w / 2
            mid = split_edge(eidx, off)
            leaf = add_node()
            connect(mid, leaf, Fraction(rng.randint(1, 12), rng.choice([1, 2, 4])))
            marked.append(leaf)
        elif style < 0.8:
            # pendant off an existing node
            host = rng.randrange(len(adj) - 1)
            leaf = add_node()
            connect(host, leaf, Fraction(rng.randint(1, 12), rng.choice([1, 2, 4])))
            marked.append(leaf)
        else:
            # marked point in the interior of an edge (collinear triples)
            eidx = rng.randrange(len(edges))
            u, v = edges[eidx]
            w = next(wt for x, wt in adj[u] if x == v)
            off = w * Fraction(rng.randint(1, 7), 8)
            if off == w:
                off = w / 2
            mid = split_edge(eidx, off)
            if mid in marked:
                continue
            marked.append(mid)

    # path metric between marked nodes
    nn = len(adj)
    mat = [[Fraction(0)] * n for _ in range(n)]
    pos = {node: i for i, node in enumerate(marked)}
    for i, src in enumerate(marked):
        dist: list[Fraction | None] = [None] * nn
        dist[src] = Fraction(0)
        stack = [src]
        while stack:
            u = stack.pop()
            for v, w in adj[u]:
                if dist[v] is None:
                    dist[v] = dist[u] + w
                    stack.append(v)
        for node, j in pos.items():
            if j != i:
                mat[i][j] = dist[node]
    labels = [f"p{i}" for i in range(n)]
    return metric_from_trusted(labels, mat)


def gen_random_l1(n: int, seed: int, dim: int = 3) -> MetricSpace:
    """Random integer points under the L1 metric: a generic exact metric
    that is usually neither ultrametric nor 0-hyperbolic."""
    if not 2 <= n <= 4096:
        raise OutOfRange(f"size must be in [2, 4096], got {n}")
    rng = random.Random(("l1", seed, n, dim).__repr__())
    pts: list[tuple[int, ...]] = []
    seen = set()
    while len(pts) < n:
        p = tuple(rng.randint(0, 40) for _ in range(dim))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    mat = [
        [Fraction(sum(abs(a - b) for a, b in zip(p, q))) for q in pts]
        for p in pts
    ]
    labels = [f"p{i}" for i in range(n)]
    return metric_from_trusted(labels, mat)
