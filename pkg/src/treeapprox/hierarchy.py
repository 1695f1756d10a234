"""Dyadic chain hierarchy and the spanning tree it induces.

Chain partitions at scales 2^i are refined from all-singletons up to a
single block; a consistent choice of representatives (the anchor's block
always keeps the anchor) turns the refinement into a spanning tree whose
identity-map distortion is at most 8 c (1 - 2^{-levels}).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundViolation, SinglePoint
from .metric import MetricSpace, Partition, chain_components, nagata_constant
from .trees import WeightedTree, canonical_weights, distortion, tree_metric

Block = frozenset


@dataclass(frozen=True)
class ChainHierarchy:
    scales: tuple[int, ...]  # exponents i, scale value 2^i
    partitions: tuple[Partition, ...]  # aligned with scales
    pred: dict  # (i, block) -> tuple of child blocks at scale i-1
    rep: dict  # (i, block) -> point index
    root_point: int

    @property
    def i_min(self) -> int:
        return self.scales[0]

    @property
    def i_max(self) -> int:
        return self.scales[-1]

    @property
    def levels(self) -> int:
        return self.i_max - self.i_min


def _max_exp_below(x: Fraction) -> int:
    """Largest integer i with 2^i < x."""
    i = 0
    while Fraction(2) ** (i + 1) < x:
        i += 1
    while Fraction(2) ** i >= x:
        i -= 1
    return i


def build_hierarchy(X: MetricSpace, root: str | None = None) -> ChainHierarchy:
    """Chain partitions at all dyadic scales from below sep(X) up to one
    block, with choice-function representatives anchored at ``root``."""
    if X.n < 2:
        raise SinglePoint("hierarchy needs at least two points")
    root_idx = X.index(root) if root is not None else min(
        range(X.n), key=lambda i: X.points[i]
    )
    i_min = _max_exp_below(X.sep())
    scales = [i_min]
    partitions = [chain_components(X, Fraction(2) ** i_min)]
    assert all(len(b) == 1 for b in partitions[0].blocks)
    i = i_min
    while len(partitions[-1].blocks) > 1:
        i += 1
        scales.append(i)
        partitions.append(chain_components(X, Fraction(2) ** i))

    pred: dict = {}
    rep: dict = {}
    for b in partitions[0].blocks:
        rep[(i_min, b)] = min(b)
    for lvl in range(1, len(scales)):
        i = scales[lvl]
        for b in partitions[lvl].blocks:
            children = tuple(
                c for c in partitions[lvl - 1].blocks if c <= b
            )
            pred[(i, b)] = children
            designated = _designated_child(X, children, root_idx)
            rep[(i, b)] = rep[(i - 1, designated)]
    return ChainHierarchy(
        tuple(scales), tuple(partitions), pred, rep, root_idx
    )


def _designated_child(X: MetricSpace, children, root_idx: int):
    """The child whose representative is promoted: the one holding the
    anchor if present, else the one holding the smallest label."""
    for c in children:
        if root_idx in c:
            return c
    return min(children, key=lambda c: min(X.points[p] for p in c))


def nagata_tree(X: MetricSpace, root: str | None = None) -> WeightedTree:
    """Spanning tree of the chain hierarchy with canonical weights.

    Each block contributes star edges from its promoted representative to
    the representatives of its other children; blocks that do not split
    contribute nothing, so weights stay strictly positive.
    """
    if X.n < 2:
        raise SinglePoint("tree construction needs at least two points")
    H = build_hierarchy(X, root)
    edges: list[tuple[int, int]] = []
    for lvl in range(1, len(H.scales)):
        i = H.scales[lvl]
        threshold = Fraction(2) ** (i - 1)
        for b in H.partitions[lvl].blocks:
            children = H.pred[(i, b)]
            if len(children) == 1:
                continue
            r = H.rep[(i, b)]
            for c in children:
                rc = H.rep[(i - 1, c)]
                if rc == r:
                    continue
                edges.append((r, rc))
            # points split at this scale sit in children > 2^{i-1} apart
            for ci in range(len(children)):
                for cj in range(ci + 1, len(children)):
                    gap = min(
                        X.dist[a][b2]
                        for a in children[ci]
                        for b2 in children[cj]
                    )
                    if gap <= threshold:
                        raise BoundViolation(
                            f"children at scale 2^{i} only {gap} apart"
                        )
    return canonical_weights(X, edges)


def verify_hierarchy_bounds(X: MetricSpace, root: str | None = None) -> WeightedTree:
    """Build the tree and check every proof-backed inequality exactly.

    Raises BoundViolation on any failure; returns the tree otherwise.
    """
    H = build_hierarchy(X, root)
    T = nagata_tree(X, root)
    c = nagata_constant(X).constant
    dt = tree_metric(T)
    pos = {lbl: k for k, lbl in enumerate(T.vertices)}
    idx = [pos[X.points[i]] for i in range(X.n)]
    # block-to-representative radius bound, for every (block, point)
    for lvl, i in enumerate(H.scales):
        for b in H.partitions[lvl].blocks:
            r = H.rep[(i, b)]
            depth = i - H.i_min
            bound = c * Fraction(2) ** i * sum(
                Fraction(1, 2**k) for k in range(depth)
            )
            for x in b:
                if dt[idx[x]][idx[r]] > bound:
                    raise BoundViolation(
                        f"radius bound fails for point {X.points[x]} in a "
                        f"scale-2^{i} block"
                    )
    # global distortion bound
    rep_bound = 8 * c * (1 - Fraction(1, 2**H.levels))
    rep_d = distortion(X, T)
    if rep_d.distortion > rep_bound:
        raise BoundViolation(
            f"distortion {rep_d.distortion} exceeds 8c(1-2^-l) = {rep_bound}"
        )
    return T
